#pragma once

// Loop erasure on the gasket, largest scale first.
//
// A path in W_N or V_N is erased in stages M = N, N-1, ..., 1. Stage M takes a
// path with no loops of scale 2^M or larger, coarse-grains each cell of its
// 2^M-skeleton to G_{M-1}, erases that coarse segment chronologically, and
// splices back the fine pieces that survive.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gasket/lattice.hpp"
#include "gasket/shape_table.hpp"

namespace gasket {

enum class CellKind { type1, type2, other };

std::string_view to_string(CellKind k);

struct SkeletonEntry {
  Triangle triangle;
  Coord entry;
  Coord exit;
  CellKind kind = CellKind::type1;
  /// Number of G_M hits from entry to exit (1 for Type 1, 2 for Type 2).
  int hits = 1;
  std::size_t entry_index = 0;
  std::size_t exit_index = 0;

  friend bool operator==(const SkeletonEntry&, const SkeletonEntry&) = default;
};

struct Skeleton {
  int level = 0;
  std::vector<SkeletonEntry> entries;

  int count(CellKind k) const;
  /// Same triangles with the same entry and exit corners; kinds and indices ignored.
  bool same_cells(const Skeleton& other) const;
};

/// Indices s_0 < s_1 < ... < s_m of the forward erasure: s_0 is the last visit to
/// w[0] and s_i the last visit to w[s_{i-1} + 1].
std::vector<std::size_t> chronological_indices(std::span<const Coord> w);

Path chronological_erase(const Path& w);

/// The 2^level-skeleton: the cells w passes through with their exit times.
/// Throws error(invalid_argument) if w does not start and end on G_level.
Skeleton skeleton(const Path& w, int level);

/// Erase the 2^{level-1}-scale loops of a path that has none of scale 2^level or larger.
/// Throws error(precondition_violated) if a larger-scale loop remains.
Path erase_scale(const Path& w, int level);

/// N such that w ends at a_N; throws error(precondition_violated) if w is not in W_N or V_N.
int crossing_level(const Path& w);

/// The full operator L on W_N and V_N.
Path loop_erase(const Path& w);

/// Coordinates of a coarse segment crossing `cell` (side 2^M) in the level-1 shape
/// frame: entry -> O, exit -> a_1, third corner -> b_1, scaled by 2^{1-M}.
Path to_shape_frame(const Path& coarse_segment, const Triangle& cell, Coord entry, Coord exit);

/// The admissible shape with this exact vertex sequence.
/// Throws error(unknown_shape) if there is none.
const ShapeRecord& classify_shape(const Path& frame_path, const ShapeTable& table);

}  // namespace gasket
