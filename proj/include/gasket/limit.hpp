#pragma once

// The scaling limit as a two-type branching refinement.
//
// Start from the unit cell (entry O, exit a_0). At every step each cell draws a
// shape from the kernel of its type, and the shape's unit-scale skeleton, mapped
// into the cell (entry -> O, exit -> a_1, third corner -> b_1), replaces it.
// Each draw is keyed by the cell's position in the refinement tree, so a sample
// at depth M+1 refines exactly the sample at depth M from the same root key.
//
// At depth m, cells are stored in integer coordinates scaled by 2^m: every cell
// is a side-1 triangle of the lattice.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gasket/eraser.hpp"
#include "gasket/exact.hpp"
#include "gasket/shape_table.hpp"
#include "gasket/stats.hpp"
#include "gasket/walker.hpp"

namespace gasket {

struct ChildTemplate {
  /// Side-1 triangle inside the frame O a_1 b_1.
  Triangle triangle;
  Coord entry;
  Coord exit;
  CellKind kind = CellKind::type1;
};

struct RefinementShape {
  std::string shape_id;
  int s1 = 0;
  int s2 = 0;
  std::vector<ChildTemplate> children;
};

struct Kernel {
  std::vector<RefinementShape> shapes;
  std::vector<Rational> exact;
  /// Cumulative probabilities; the last entry is 1.
  std::vector<double> cumulative;

  std::size_t draw(double u) const;
  /// Expected (type1, type2) offspring.
  std::array<Rational, 2> mean_offspring() const;
};

struct RefinementTable {
  Kernel type1;
  Kernel type2;

  const Kernel& for_kind(CellKind k) const;
};

/// Type 1 cells refine by the shapes of L X_1, Type 2 cells by those of L X'_1.
/// Throws error(invalid_argument) if a shape leaves its frame or its skeleton is broken.
RefinementTable refinement_table(const ShapeTable& table);

/// A kernel that always draws the shape with the given id.
Kernel deterministic_kernel(const ShapeTable& table, const std::string& id);

struct LimitCell {
  Triangle triangle;
  Coord entry;
  Coord exit;
  /// Type inherited from the parent's skeleton; a Type 2 cell that draws a
  /// direct shape keeps its recorded type.
  CellKind kind = CellKind::type1;
  std::uint64_t key = 0;
  /// Index of the parent in the previous level (0 for the root).
  std::size_t parent = 0;

  friend bool operator==(const LimitCell&, const LimitCell&) = default;
};

struct LevelCounts {
  std::int64_t type1 = 0;
  std::int64_t type2 = 0;

  std::int64_t cells() const { return type1 + type2; }
  std::int64_t weight() const { return type1 + 2 * type2; }
  friend bool operator==(const LevelCounts&, const LevelCounts&) = default;
};

struct PolylinePoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct RefinedPath {
  int depth = 0;
  double lambda = 0.0;
  /// levels[m] is the skeleton at depth m; only the last level when levels were not kept.
  std::vector<std::vector<LimitCell>> levels;
  /// Type counts at every depth 0..depth.
  std::vector<LevelCounts> counts;

  const std::vector<LimitCell>& cells() const { return levels.back(); }
  bool has_all_levels() const { return static_cast<int>(levels.size()) == depth + 1; }
  /// lambda^{-depth} (S_1 + 2 S_2).
  double scaled_length() const;
  /// Exit time of every cell: cumulative sums of lambda^{-depth} * (1 or 2).
  std::vector<double> exit_times() const;
  /// Start, then per cell the third corner (Type 2 only) and the exit, in the
  /// Euclidean plane with the unit triangle of side 1.
  std::vector<PolylinePoint> polyline() const;
};

struct LimitOptions {
  bool keep_levels = true;
};

RefinedPath sample_limit_path(int depth, std::uint64_t root_key, const RefinementTable& table,
                              const LimitOptions& options = {});
/// Draws the root key from `rng` (one call).
RefinedPath sample_limit_path(int depth, Rng& rng, const RefinementTable& table, const LimitOptions& options = {});

/// Merge consecutive cells of one level into the cells of the level above.
/// Kinds are read from the geometry (Type 2 iff the third corner is visited).
std::vector<LimitCell> coarse_grain_cells(const std::vector<LimitCell>& cells);

/// Same triangles with the same entry and exit corners, in order.
bool same_geometry(const std::vector<LimitCell>& a, const std::vector<LimitCell>& b);

struct LengthStatistics {
  int depth = 0;
  stats::Summary summary;
  double predicted_mean = 0.0;
  double predicted_variance = 0.0;
  /// (observed - predicted) / standard error.
  double mean_z = 0.0;
  double variance_z = 0.0;
  std::vector<double> histogram_edges;
  std::vector<std::uint64_t> histogram_counts;
};

/// Statistics of lambda^{-M}(S_1 + 2 S_2) against the limit (v_1 + 2 v_2) B_1.
/// Throws error(empty_input) on no samples.
LengthStatistics length_statistics(std::span<const double> scaled_lengths, int depth, const MomentTable& moments,
                                   const EigenData& eig, int bins = 20);
LengthStatistics length_statistics(std::span<const RefinedPath> samples, const MomentTable& moments,
                                   const EigenData& eig, int bins = 20);

/// Least-squares slope of log K_m against m log 2 over m = first_level..depth.
/// Throws error(insufficient_depth) unless depth >= 6.
double box_count_dimension(const RefinedPath& path, int first_level = 2);
double box_count_slope(std::span<const std::int64_t> cells_per_level, int first_level = 2);

}  // namespace gasket
