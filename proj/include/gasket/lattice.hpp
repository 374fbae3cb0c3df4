#pragma once

// Integer geometry of the infinite pre-Sierpinski gasket.
//
// A vertex is addressed by (i, j) in the basis b0 = (1, 0), a0 = (1/2, sqrt(3)/2),
// so its Euclidean position is (i + j/2, j*sqrt(3)/2). The right half of the
// lattice is the recursively tripled triangle O a_N b_N; the left half is its
// mirror image across the y-axis, (i, j) -> (-i - j, j). The two halves touch
// only at O.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace gasket {

struct Coord {
  std::int64_t i = 0;
  std::int64_t j = 0;

  friend constexpr auto operator<=>(const Coord&, const Coord&) = default;
  friend constexpr Coord operator+(Coord a, Coord b) { return {a.i + b.i, a.j + b.j}; }
  friend constexpr Coord operator-(Coord a, Coord b) { return {a.i - b.i, a.j - b.j}; }
  friend constexpr Coord operator*(std::int64_t k, Coord a) { return {k * a.i, k * a.j}; }

  double x() const { return static_cast<double>(i) + 0.5 * static_cast<double>(j); }
  double y() const;
};

struct CoordHash {
  std::size_t operator()(const Coord& c) const noexcept {
    auto h = static_cast<std::uint64_t>(c.i) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(c.j) + 0x7F4A7C159E3779B9ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

using Path = std::vector<Coord>;

inline constexpr Coord origin{0, 0};

constexpr std::int64_t side_of(int level) { return std::int64_t{1} << level; }
/// a_N = 2^N a0.
constexpr Coord apex(int level) { return {0, side_of(level)}; }
/// b_N = 2^N b0.
constexpr Coord base_corner(int level) { return {side_of(level), 0}; }

/// Upward triangle of side 2^level whose lower-left corner is `corner`.
struct Triangle {
  Coord corner;
  int level = 0;

  friend constexpr auto operator<=>(const Triangle&, const Triangle&) = default;

  std::int64_t side() const { return side_of(level); }
  std::array<Coord, 3> corners() const {
    return {corner, corner + Coord{side(), 0}, corner + Coord{0, side()}};
  }
  bool has_corner(Coord v) const;
  /// Closed-triangle containment of a lattice point.
  bool contains(Coord v) const;
  /// The corner that is neither `a` nor `b` (both must be corners).
  Coord third_corner(Coord a, Coord b) const;
};

/// True iff the upward triangle of side 2^level at `corner` is filled in the gasket.
/// Throws error(invalid_argument) when corner.j < 0 or the corner is not 2^level-aligned.
bool up_triangle_exists(Coord corner, int level);

/// Number of filled unit upward triangles in the two-sided gasket of span 2^N (equals 2*3^N).
std::int64_t count_up_triangles(int span);

/// Filled unit triangles inside the two-sided gasket of span 2^N, listed by corner.
std::vector<Triangle> unit_triangles(int span);

/// Both coordinates divisible by 2^level. For a gasket vertex this is G_level membership.
constexpr bool on_level_grid(Coord v, int level) {
  const std::int64_t mask = side_of(level) - 1;
  return (v.i & mask) == 0 && (v.j & mask) == 0;
}

/// v is a corner of at least one filled 2^level-triangle.
bool is_vertex(Coord v, int level = 0);

/// v is in G_M: a gasket vertex whose coordinates are divisible by 2^M.
bool in_level(Coord v, int level);

/// The two filled 2^level-triangles incident to a vertex of G_level.
std::array<Triangle, 2> incident_cells(Coord v, int level = 0);

/// The four nearest neighbours of v on F_level.
std::array<Coord, 4> neighbors(Coord v, int level = 0);

/// Largest M with v in G_M, saturating at `cap` (needed for O).
int vertex_level(Coord v, int cap = 62);

/// The unique filled 2^level-triangle having both u and v as corners.
Triangle cell_of_step(Coord u, Coord v, int level);

/// Exact affine map of the lattice sending one triangle of side s onto another of
/// the same side, corner to corner. Both triangles are given as corner triples.
class TriangleMap {
 public:
  TriangleMap(std::int64_t side, const std::array<Coord, 3>& from, const std::array<Coord, 3>& to);

  /// The map from the frame triangle (O, a_s, b_s).
  static TriangleMap from_frame(std::int64_t side, Coord to_origin, Coord to_apex, Coord to_base) {
    return TriangleMap(side, {origin, Coord{0, side}, Coord{side, 0}}, {to_origin, to_apex, to_base});
  }

  Coord operator()(Coord p) const;
  Coord inverse(Coord q) const;

 private:
  // p - from0 = alpha * src_u + beta * src_v  <=>  q - to0 = alpha * dst_u + beta * dst_v
  Coord from0_, src_u_, src_v_;
  Coord to0_, dst_u_, dst_v_;
};

/// Map a path from the frame of the 2^level-triangle crossing (O -> a_level) onto the
/// crossing entry -> exit of `cell`. Points left of the frame (the mirror cell at O)
/// are sent into the other cell incident to `entry`.
Path map_crossing(const Path& frame_path, int level, const Triangle& cell, Coord entry, Coord exit);

Path scaled(const Path& w, std::int64_t factor);

bool is_lattice_path(const Path& w);
bool is_self_avoiding(const Path& w);

}  // namespace gasket
