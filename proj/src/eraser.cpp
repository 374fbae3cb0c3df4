#include "gasket/eraser.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "gasket/error.hpp"
#include "gasket/walker.hpp"

namespace gasket {

std::string_view to_string(CellKind k) {
  switch (k) {
    case CellKind::type1: return "type1";
    case CellKind::type2: return "type2";
    case CellKind::other: return "other";
  }
  return "other";
}

int Skeleton::count(CellKind k) const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                        [k](const SkeletonEntry& e) { return e.kind == k; }));
}

bool Skeleton::same_cells(const Skeleton& other) const {
  if (level != other.level || entries.size() != other.entries.size()) return false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& a = entries[i];
    const auto& b = other.entries[i];
    if (a.triangle.corner != b.triangle.corner || a.triangle.level != b.triangle.level || a.entry != b.entry ||
        a.exit != b.exit) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> chronological_indices(std::span<const Coord> w) {
  if (w.empty()) throw error(errc::empty_input, "cannot erase an empty path");
  std::unordered_map<Coord, std::size_t, CoordHash> last;
  last.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) last[w[k]] = k;
  std::vector<std::size_t> s{last.at(w[0])};
  while (s.back() + 1 < w.size()) s.push_back(last.at(w[s.back() + 1]));
  return s;
}

Path chronological_erase(const Path& w) {
  Path out;
  for (const std::size_t k : chronological_indices(w)) out.push_back(w[k]);
  return out;
}

Skeleton skeleton(const Path& w, int level) {
  if (w.empty()) throw error(errc::empty_input, "skeleton of an empty path");
  if (!on_level_grid(w.front(), level) || !on_level_grid(w.back(), level)) {
    throw error(errc::invalid_argument, "skeleton needs a path starting and ending on G_" + std::to_string(level));
  }
  const std::vector<std::size_t> t = hitting_times(w, level).times;
  Skeleton sk{level, {}};
  const std::size_t m = t.size() - 1;
  if (m == 0) return sk;

  std::size_t n = 0;  // position in t of the previous exit
  Triangle cell = cell_of_step(w[t[0]], w[t[1]], level);
  while (true) {
    std::size_t j = n + 1;
    while (j < m && cell.has_corner(w[t[j + 1]])) ++j;
    const int hits = static_cast<int>(j - n);
    const CellKind kind = hits == 1 ? CellKind::type1 : hits == 2 ? CellKind::type2 : CellKind::other;
    sk.entries.push_back({cell, w[t[n]], w[t[j]], kind, hits, t[n], t[j]});
    if (j == m) break;
    cell = cell_of_step(w[t[j]], w[t[j + 1]], level);
    n = j;
  }
  return sk;
}

namespace {

void require_no_large_loops(const Path& w, int level) {
  for (int k = level; k <= 62 && on_level_grid(w.front(), k) && on_level_grid(w.back(), k); ++k) {
    if (!is_self_avoiding(coarse_grain(w, k))) {
      throw error(errc::precondition_violated,
                  "path has a loop at scale 2^" + std::to_string(k) + "; erase larger scales first");
    }
  }
}

}  // namespace

Path erase_scale(const Path& w, int level) {
  if (level < 1) throw error(errc::invalid_argument, "erase_scale needs level >= 1");
  if (w.empty()) throw error(errc::empty_input, "erase_scale of an empty path");
  require_no_large_loops(w, level);
  const Skeleton sk = skeleton(w, level);
  if (sk.entries.empty()) return {w.front()};
  if (sk.entries.back().exit_index + 1 != w.size()) {
    throw error(errc::precondition_violated, "path must end at its last G_" + std::to_string(level) + " hit");
  }

  const std::vector<std::size_t> h = hitting_times(w, level - 1).times;
  const auto position = [&h](std::size_t index) {
    return static_cast<std::size_t>(std::lower_bound(h.begin(), h.end(), index) - h.begin());
  };

  Path out;
  out.reserve(w.size());
  Path coarse;
  for (const SkeletonEntry& e : sk.entries) {
    const std::size_t first = position(e.entry_index);
    const std::size_t last = position(e.exit_index);
    coarse.clear();
    for (std::size_t k = first; k <= last; ++k) coarse.push_back(w[h[k]]);
    const std::vector<std::size_t> s = chronological_indices(coarse);
    // s ends at the exit (visited once within the segment); splice the fine pieces before it
    for (std::size_t r = 0; r + 1 < s.size(); ++r) {
      const std::size_t from = h[first + s[r]];
      const std::size_t to = h[first + s[r] + 1];
      out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(from), w.begin() + static_cast<std::ptrdiff_t>(to));
    }
  }
  out.push_back(w.back());
  return out;
}

int crossing_level(const Path& w) {
  if (w.size() < 2 || w.front() != origin) {
    throw error(errc::precondition_violated, "a crossing starts at O and has at least one step");
  }
  const Coord end = w.back();
  if (end.i != 0 || end.j <= 0 || (end.j & (end.j - 1)) != 0) {
    throw error(errc::precondition_violated, "a crossing ends at a_N");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(end.j));
  if (!is_crossing(w, n, Crossing::direct) && !is_crossing(w, n, Crossing::via_corner)) {
    throw error(errc::precondition_violated, "path is not in W_" + std::to_string(n) + " or V_" + std::to_string(n));
  }
  return n;
}

Path loop_erase(const Path& w) {
  const int n = crossing_level(w);
  Path out = w;
  for (int m = n; m >= 1; --m) out = erase_scale(out, m);
  return out;
}

Path to_shape_frame(const Path& coarse_segment, const Triangle& cell, Coord entry, Coord exit) {
  if (cell.level < 1) throw error(errc::invalid_argument, "shape frame needs a cell of level >= 1");
  const std::int64_t side = cell.side();
  const TriangleMap map = TriangleMap::from_frame(side, entry, exit, cell.third_corner(entry, exit));
  const std::int64_t unit = side / 2;
  Path out;
  out.reserve(coarse_segment.size());
  for (const Coord q : coarse_segment) {
    const Coord p = map.inverse(q);
    if (p.i % unit != 0 || p.j % unit != 0) {
      throw error(errc::invalid_argument, "segment vertex is not on G_" + std::to_string(cell.level - 1));
    }
    out.push_back({p.i / unit, p.j / unit});
  }
  return out;
}

const ShapeRecord* ShapeTable::find(const Path& path) const {
  for (const ShapeRecord& r : shapes) {
    if (r.path == path) return &r;
  }
  return nullptr;
}

const ShapeRecord& ShapeTable::at(const std::string& id) const {
  for (const ShapeRecord& r : shapes) {
    if (r.id == id) return r;
  }
  throw error(errc::unknown_shape, "no shape with id " + id);
}

const ShapeRecord& classify_shape(const Path& frame_path, const ShapeTable& table) {
  if (const ShapeRecord* r = table.find(frame_path)) return *r;
  std::string text;
  for (const Coord c : frame_path) text += "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
  throw error(errc::unknown_shape, "path " + text + " is not an admissible shape");
}

}  // namespace gasket
