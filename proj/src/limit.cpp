#include "gasket/limit.hpp"

#include <algorithm>
#include <cmath>

#include "gasket/error.hpp"

namespace gasket {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform_from_key(std::uint64_t key) {
  return static_cast<double>(splitmix64(key ^ 0xD1B54A32D192ED03ull) >> 11) * 0x1.0p-53;
}

std::uint64_t child_key(std::uint64_t parent, std::size_t index) {
  return splitmix64(parent + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1));
}

Triangle triangle_of(const std::array<Coord, 3>& c) {
  return {{std::min({c[0].i, c[1].i, c[2].i}), std::min({c[0].j, c[1].j, c[2].j})}, 0};
}

RefinementShape make_shape(const ShapeRecord& r) {
  const Skeleton sk = skeleton(r.path, 0);
  RefinementShape shape{r.id, r.s1, r.s2, {}};
  const Triangle frame{origin, 1};
  for (const SkeletonEntry& e : sk.entries) {
    if (e.kind == CellKind::other) throw error(errc::invalid_argument, "shape " + r.id + " has a looping cell");
    for (const Coord c : e.triangle.corners()) {
      if (!frame.contains(c)) throw error(errc::invalid_argument, "shape " + r.id + " leaves its frame");
    }
    shape.children.push_back({e.triangle, e.entry, e.exit, e.kind});
  }
  const auto& ch = shape.children;
  if (ch.empty() || ch.front().entry != origin || ch.back().exit != apex(1) ||
      static_cast<int>(ch.size()) != r.s1 + r.s2) {
    throw error(errc::invalid_argument, "shape " + r.id + " has a broken skeleton");
  }
  for (std::size_t k = 0; k + 1 < ch.size(); ++k) {
    if (ch[k].exit != ch[k + 1].entry || ch[k].triangle == ch[k + 1].triangle) {
      throw error(errc::invalid_argument, "shape " + r.id + " has a broken skeleton");
    }
  }
  return shape;
}

Kernel make_kernel(const ShapeTable& table, bool direct) {
  Kernel k;
  Rational total(0);
  for (const ShapeRecord& r : table.shapes) {
    const Rational& p = direct ? r.p_direct : r.p_via;
    if (p == 0) continue;
    k.shapes.push_back(make_shape(r));
    k.exact.push_back(p);
    total += p;
    k.cumulative.push_back(total.convert_to<double>());
  }
  if (total != 1) throw error(errc::invalid_argument, "kernel masses do not sum to 1");
  k.cumulative.back() = 1.0;
  return k;
}

}  // namespace

std::size_t Kernel::draw(double u) const {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::array<Rational, 2> Kernel::mean_offspring() const {
  std::array<Rational, 2> m{Rational(0), Rational(0)};
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    m[0] += exact[k] * shapes[k].s1;
    m[1] += exact[k] * shapes[k].s2;
  }
  return m;
}

const Kernel& RefinementTable::for_kind(CellKind k) const {
  if (k == CellKind::type1) return type1;
  if (k == CellKind::type2) return type2;
  throw error(errc::invalid_argument, "no refinement kernel for looping cells");
}

RefinementTable refinement_table(const ShapeTable& table) {
  return {make_kernel(table, true), make_kernel(table, false)};
}

Kernel deterministic_kernel(const ShapeTable& table, const std::string& id) {
  Kernel k;
  k.shapes.push_back(make_shape(table.at(id)));
  k.exact.push_back(Rational(1));
  k.cumulative.push_back(1.0);
  return k;
}

RefinedPath sample_limit_path(int depth, std::uint64_t root_key, const RefinementTable& table,
                              const LimitOptions& options) {
  if (depth < 0) throw error(errc::invalid_argument, "depth must be non-negative");
  static const double lambda = eigen_data(mean_matrix(reference_offspring_laws())).lambda.convert_to<double>();
  RefinedPath out;
  out.depth = depth;
  out.lambda = lambda;

  std::vector<LimitCell> current{{Triangle{origin, 0}, origin, apex(0), CellKind::type1, root_key, 0}};
  out.counts.push_back({1, 0});
  for (int m = 0; m < depth; ++m) {
    std::vector<LimitCell> next;
    next.reserve(current.size() * 3);
    LevelCounts counts;
    for (std::size_t p = 0; p < current.size(); ++p) {
      const LimitCell& cell = current[p];
      const Kernel& kernel = table.for_kind(cell.kind);
      const RefinementShape& shape = kernel.shapes[kernel.draw(uniform_from_key(cell.key))];
      const Coord entry = 2 * cell.entry;
      const Coord exit = 2 * cell.exit;
      const Coord third = 2 * cell.triangle.third_corner(cell.entry, cell.exit);
      const TriangleMap map = TriangleMap::from_frame(2, entry, exit, third);
      for (std::size_t r = 0; r < shape.children.size(); ++r) {
        const ChildTemplate& c = shape.children[r];
        const auto corners = c.triangle.corners();
        const Triangle t = triangle_of({map(corners[0]), map(corners[1]), map(corners[2])});
        next.push_back({t, map(c.entry), map(c.exit), c.kind, child_key(cell.key, r), p});
        (c.kind == CellKind::type1 ? counts.type1 : counts.type2) += 1;
      }
    }
    out.counts.push_back(counts);
    if (options.keep_levels) out.levels.push_back(std::move(current));
    current = std::move(next);
  }
  out.levels.push_back(std::move(current));
  return out;
}

RefinedPath sample_limit_path(int depth, Rng& rng, const RefinementTable& table, const LimitOptions& options) {
  return sample_limit_path(depth, rng(), table, options);
}

double RefinedPath::scaled_length() const {
  return static_cast<double>(counts.back().weight()) * std::pow(lambda, -depth);
}

std::vector<double> RefinedPath::exit_times() const {
  const double unit = std::pow(lambda, -depth);
  std::vector<double> out;
  out.reserve(cells().size());
  double t = 0.0;
  std::int64_t weight = 0;
  for (const LimitCell& c : cells()) {
    weight += c.kind == CellKind::type2 ? 2 : 1;
    t = static_cast<double>(weight) * unit;
    out.push_back(t);
  }
  return out;
}

std::vector<PolylinePoint> RefinedPath::polyline() const {
  const double unit = std::pow(lambda, -depth);
  const double scale = std::ldexp(1.0, -depth);
  std::vector<PolylinePoint> out{{0.0, 0.0, 0.0}};
  std::int64_t steps = 0;
  const auto emit = [&](Coord v) {
    ++steps;
    out.push_back({static_cast<double>(steps) * unit, v.x() * scale, v.y() * scale});
  };
  for (const LimitCell& c : cells()) {
    if (c.kind == CellKind::type2) emit(c.triangle.third_corner(c.entry, c.exit));
    emit(c.exit);
  }
  return out;
}

std::vector<LimitCell> coarse_grain_cells(const std::vector<LimitCell>& cells) {
  const auto halve = [](Coord v) {
    if (v.i % 2 != 0 || v.j % 2 != 0) throw error(errc::invalid_argument, "cell sequence leaves a parent off its corners");
    return Coord{v.i / 2, v.j / 2};
  };
  std::vector<LimitCell> out;
  std::size_t k = 0;
  while (k < cells.size()) {
    const Coord corner = cells[k].triangle.corner;
    const Triangle parent{{(corner.i & ~std::int64_t{1}) / 2, (corner.j & ~std::int64_t{1}) / 2}, 0};
    std::size_t end = k;
    while (end < cells.size() && cells[end].triangle.corner.i / 2 == parent.corner.i &&
           cells[end].triangle.corner.j / 2 == parent.corner.j) {
      ++end;
    }
    const Coord entry = halve(cells[k].entry);
    const Coord exit = halve(cells[end - 1].exit);
    const Coord third = 2 * parent.third_corner(entry, exit);
    bool via = false;
    for (std::size_t c = k; c + 1 < end; ++c) via = via || cells[c].exit == third;
    out.push_back({parent, entry, exit, via ? CellKind::type2 : CellKind::type1, 0, 0});
    k = end;
  }
  return out;
}

bool same_geometry(const std::vector<LimitCell>& a, const std::vector<LimitCell>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].triangle != b[k].triangle || a[k].entry != b[k].entry || a[k].exit != b[k].exit) return false;
  }
  return true;
}

LengthStatistics length_statistics(std::span<const double> scaled_lengths, int depth, const MomentTable& moments,
                                   const EigenData& eig, int bins) {
  if (scaled_lengths.empty()) throw error(errc::empty_input, "length_statistics needs samples");
  if (moments.order() < 2) throw error(errc::invalid_argument, "length_statistics needs two moments");
  if (bins < 1) throw error(errc::invalid_argument, "bins must be positive");
  LengthStatistics out;
  out.depth = depth;
  out.summary = stats::summarize(scaled_lengths);
  const double weight = (eig.v[0] + 2 * eig.v[1]).convert_to<double>();
  const double m1 = moments.moments[1][0].convert_to<double>();
  const double m2 = moments.moments[2][0].convert_to<double>();
  out.predicted_mean = weight * m1;
  out.predicted_variance = weight * weight * (m2 - m1 * m1);
  if (out.summary.std_error > 0) out.mean_z = (out.summary.mean - out.predicted_mean) / out.summary.std_error;
  if (out.summary.variance_std_error > 0) {
    out.variance_z = (out.summary.variance - out.predicted_variance) / out.summary.variance_std_error;
  }
  const double lo = out.summary.min;
  const double hi = out.summary.max > lo ? out.summary.max : lo + 1.0;
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) out.histogram_edges.push_back(lo + b * width);
  out.histogram_counts.assign(static_cast<std::size_t>(bins), 0);
  for (const double v : scaled_lengths) {
    const auto b = std::min<std::size_t>(static_cast<std::size_t>((v - lo) / width), static_cast<std::size_t>(bins - 1));
    ++out.histogram_counts[b];
  }
  return out;
}

LengthStatistics length_statistics(std::span<const RefinedPath> samples, const MomentTable& moments,
                                   const EigenData& eig, int bins) {
  if (samples.empty()) throw error(errc::empty_input, "length_statistics needs samples");
  std::vector<double> values;
  for (const RefinedPath& s : samples) {
    if (s.depth != samples.front().depth) throw error(errc::invalid_argument, "samples differ in depth");
    values.push_back(s.scaled_length());
  }
  return length_statistics(values, samples.front().depth, moments, eig, bins);
}

double box_count_slope(std::span<const std::int64_t> cells_per_level, int first_level) {
  const int depth = static_cast<int>(cells_per_level.size()) - 1;
  if (depth < 6) throw error(errc::insufficient_depth, "box counting needs depth >= 6");
  if (first_level < 0 || first_level >= depth) throw error(errc::invalid_argument, "first level out of range");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int m = first_level; m <= depth; ++m) {
    const double x = m * std::log(2.0);
    const double y = std::log(static_cast<double>(cells_per_level[static_cast<std::size_t>(m)]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double box_count_dimension(const RefinedPath& path, int first_level) {
  std::vector<std::int64_t> k;
  for (const LevelCounts& c : path.counts) k.push_back(c.cells());
  return box_count_slope(k, first_level);
}

}  // namespace gasket
