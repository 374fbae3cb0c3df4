#include "gasket/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "gasket/error.hpp"

namespace gasket {

namespace {

// Membership without argument checks; (ci, cj) in units of the triangle side.
bool filled(std::int64_t ci, std::int64_t cj) {
  if (cj < 0) return false;
  if (ci >= 0) return (ci & cj) == 0;
  const std::int64_t mirrored = -ci - cj - 1;
  return mirrored >= 0 && (mirrored & cj) == 0;
}

bool unit_direction(Coord d) {
  return d == Coord{1, 0} || d == Coord{-1, 0} || d == Coord{0, 1} || d == Coord{0, -1} ||
         d == Coord{1, -1} || d == Coord{-1, 1};
}

Coord divide_exact(Coord d, std::int64_t side) {
  if (d.i % side != 0 || d.j % side != 0) {
    throw error(errc::invalid_argument, "triangle corners are not aligned to the given side");
  }
  return {d.i / side, d.j / side};
}

}  // namespace

double Coord::y() const { return static_cast<double>(j) * std::sqrt(3.0) / 2.0; }

bool Triangle::has_corner(Coord v) const {
  const auto c = corners();
  return v == c[0] || v == c[1] || v == c[2];
}

bool Triangle::contains(Coord v) const {
  const Coord d = v - corner;
  return d.i >= 0 && d.j >= 0 && d.i + d.j <= side();
}

Coord Triangle::third_corner(Coord a, Coord b) const {
  for (const Coord c : corners()) {
    if (c != a && c != b) return c;
  }
  throw error(errc::invalid_argument, "third_corner: a and b must be two distinct corners");
}

bool up_triangle_exists(Coord corner, int level) {
  if (level < 0 || level > 60) throw error(errc::invalid_argument, "level out of range");
  if (corner.j < 0) throw error(errc::invalid_argument, "corner below the base line");
  if (!on_level_grid(corner, level)) throw error(errc::invalid_argument, "corner not aligned to 2^level");
  return filled(corner.i >> level, corner.j >> level);
}

std::vector<Triangle> unit_triangles(int span) {
  if (span < 0 || span > 20) throw error(errc::invalid_argument, "span out of range");
  const std::int64_t n = side_of(span);
  std::vector<Triangle> out;
  for (std::int64_t j = 0; j < n; ++j) {
    // right half: i + j <= n - 1; left half: mirror image, i >= -n
    for (std::int64_t i = -n; i + j < n; ++i) {
      if (filled(i, j)) out.push_back(Triangle{{i, j}, 0});
    }
  }
  return out;
}

std::int64_t count_up_triangles(int span) {
  return static_cast<std::int64_t>(unit_triangles(span).size());
}

bool is_vertex(Coord v, int level) {
  if (v.j < 0 || !on_level_grid(v, level)) return false;
  const std::int64_t ci = v.i >> level;
  const std::int64_t cj = v.j >> level;
  return filled(ci, cj) || filled(ci - 1, cj) || filled(ci, cj - 1);
}

bool in_level(Coord v, int level) { return is_vertex(v, level); }

std::array<Triangle, 2> incident_cells(Coord v, int level) {
  if (v.j < 0 || !on_level_grid(v, level)) {
    throw error(errc::invalid_argument, "not a vertex of the requested level");
  }
  const std::int64_t s = side_of(level);
  const std::array<Coord, 3> candidates{v, v - Coord{s, 0}, v - Coord{0, s}};
  std::array<Triangle, 2> out{};
  int found = 0;
  for (const Coord c : candidates) {
    if (c.j < 0 || !filled(c.i >> level, c.j >> level)) continue;
    if (found == 2) throw error(errc::invalid_argument, "vertex with more than two cells");
    out[found++] = Triangle{c, level};
  }
  if (found != 2) throw error(errc::invalid_argument, "not a gasket vertex");
  return out;
}

std::array<Coord, 4> neighbors(Coord v, int level) {
  std::array<Coord, 4> out{};
  int n = 0;
  for (const Triangle& t : incident_cells(v, level)) {
    for (const Coord c : t.corners()) {
      if (c != v) out[n++] = c;
    }
  }
  return out;
}

int vertex_level(Coord v, int cap) {
  const auto bits = static_cast<std::uint64_t>(v.i | v.j);
  if (bits == 0) return cap;
  return std::min(cap, std::countr_zero(bits));
}

Triangle cell_of_step(Coord u, Coord v, int level) {
  if (u == v) throw error(errc::no_common_cell, "identical endpoints");
  if (!is_vertex(u, level) || !is_vertex(v, level)) {
    throw error(errc::no_common_cell, "endpoint is not a vertex of the requested level");
  }
  for (const Triangle& t : incident_cells(u, level)) {
    if (t.has_corner(v)) return t;
  }
  throw error(errc::no_common_cell, "points share no filled triangle");
}

TriangleMap::TriangleMap(std::int64_t side, const std::array<Coord, 3>& from,
                         const std::array<Coord, 3>& to)
    : from0_(from[0]),
      src_u_(divide_exact(from[1] - from[0], side)),
      src_v_(divide_exact(from[2] - from[0], side)),
      to0_(to[0]),
      dst_u_(divide_exact(to[1] - to[0], side)),
      dst_v_(divide_exact(to[2] - to[0], side)) {
  for (const Coord d : {src_u_, src_v_, src_u_ - src_v_, dst_u_, dst_v_, dst_u_ - dst_v_}) {
    if (!unit_direction(d)) throw error(errc::invalid_argument, "corner triple is not a lattice triangle");
  }
}

Coord TriangleMap::operator()(Coord p) const {
  const Coord d = p - from0_;
  // |det(src_u, src_v)| = 1 for lattice triangles
  const std::int64_t det = src_u_.i * src_v_.j - src_v_.i * src_u_.j;
  const std::int64_t alpha = (d.i * src_v_.j - src_v_.i * d.j) * det;
  const std::int64_t beta = (src_u_.i * d.j - d.i * src_u_.j) * det;
  return to0_ + Coord{alpha * dst_u_.i + beta * dst_v_.i, alpha * dst_u_.j + beta * dst_v_.j};
}

Coord TriangleMap::inverse(Coord q) const {
  const Coord d = q - to0_;
  const std::int64_t det = dst_u_.i * dst_v_.j - dst_v_.i * dst_u_.j;
  const std::int64_t alpha = (d.i * dst_v_.j - dst_v_.i * d.j) * det;
  const std::int64_t beta = (dst_u_.i * d.j - d.i * dst_u_.j) * det;
  return from0_ + Coord{alpha * src_u_.i + beta * src_v_.i, alpha * src_u_.j + beta * src_v_.j};
}

Path map_crossing(const Path& frame_path, int level, const Triangle& cell, Coord entry, Coord exit) {
  const std::int64_t s = side_of(level);
  const Coord third = cell.third_corner(entry, exit);
  const auto inside = TriangleMap::from_frame(s, entry, exit, third);

  const auto cells = incident_cells(entry, level);
  const Triangle& other = cells[0] == cell ? cells[1] : cells[0];
  std::array<Coord, 3> other_corners{entry, {}, {}};
  int k = 1;
  for (const Coord c : other.corners()) {
    if (c != entry) other_corners[k++] = c;
  }
  // the mirror cell of the frame: O, (-s, s), (-s, 0)
  const TriangleMap outside(s, {origin, Coord{-s, s}, Coord{-s, 0}}, other_corners);

  Path out;
  out.reserve(frame_path.size());
  for (const Coord p : frame_path) out.push_back(p.i < 0 ? outside(p) : inside(p));
  return out;
}

Path scaled(const Path& w, std::int64_t factor) {
  Path out;
  out.reserve(w.size());
  for (const Coord c : w) out.push_back(factor * c);
  return out;
}

bool is_lattice_path(const Path& w) {
  if (w.empty() || !is_vertex(w.front())) return false;
  for (std::size_t t = 1; t < w.size(); ++t) {
    if (!is_vertex(w[t])) return false;
    const auto nb = neighbors(w[t - 1]);
    if (std::find(nb.begin(), nb.end(), w[t]) == nb.end()) return false;
  }
  return true;
}

bool is_self_avoiding(const Path& w) {
  std::unordered_set<Coord, CoordHash> seen;
  seen.reserve(w.size() * 2);
  for (const Coord c : w) {
    if (!seen.insert(c).second) return false;
  }
  return true;
}

}  // namespace gasket
