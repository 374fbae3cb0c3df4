#pragma once

#include <string>
#include <vector>

#include "gasket/lattice.hpp"
#include "gasket/rational.hpp"

namespace gasket {

/// A self-avoiding crossing O -> a_1 of the frame triangle O a_1 b_1, with the
/// laws of the loop-erased level-1 crossings attached.
struct ShapeRecord {
  std::string id;
  Path path;
  /// Type 1 and Type 2 cell counts of the unit-scale skeleton.
  int s1 = 0;
  int s2 = 0;
  /// Mass under the law of L X_1 (zero for shapes through b_1).
  Rational p_direct;
  /// Mass under the law of L X'_1.
  Rational p_via;

  int length() const { return static_cast<int>(path.size()) - 1; }
};

struct ShapeTable {
  std::vector<ShapeRecord> shapes;

  /// nullptr when `path` is not an admissible shape.
  const ShapeRecord* find(const Path& path) const;
  const ShapeRecord& at(const std::string& id) const;
  std::size_t index_of(const ShapeRecord& r) const { return static_cast<std::size_t>(&r - shapes.data()); }
};

}  // namespace gasket
