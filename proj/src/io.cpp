#include "gasket/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gasket/error.hpp"

namespace gasket::io {

json to_json(Coord c) { return json::array({c.i, c.j}); }

json to_json(const Path& w) {
  json out = json::array();
  for (const Coord c : w) out.push_back(to_json(c));
  return out;
}

json to_json(const Skeleton& s) {
  json out = json::array();
  for (const SkeletonEntry& e : s.entries) {
    out.push_back({{"corner", to_json(e.triangle.corner)},
                   {"level", e.triangle.level},
                   {"entry", to_json(e.entry)},
                   {"exit", to_json(e.exit)},
                   {"kind", std::string(to_string(e.kind))},
                   {"exit_index", e.exit_index}});
  }
  return out;
}

json skeleton_json(const std::vector<LimitCell>& cells, int depth) {
  json out = json::array();
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const LimitCell& c = cells[k];
    out.push_back({{"corner", to_json(c.triangle.corner)},
                   {"level", -depth},
                   {"entry", to_json(c.entry)},
                   {"exit", to_json(c.exit)},
                   {"kind", std::string(to_string(c.kind))},
                   {"exit_index", k + 1}});
  }
  return out;
}

std::string rational_string(const Rational& q) { return to_string(q); }

std::string real_string(const Real& x, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

json coefficient_map(const BivariatePoly& p) {
  json out = json::object();
  for (const auto& [m, c] : p.terms()) out[std::to_string(m.first) + "," + std::to_string(m.second)] = to_string(c);
  return out;
}

json exact_report(const ShapeTable& table, const OffspringLaws& laws, const EigenData& eig,
                  const MomentTable& moments) {
  json shapes = json::array();
  json type1 = json::array();
  json type2 = json::array();
  for (const ShapeRecord& r : table.shapes) {
    shapes.push_back({{"id", r.id},
                      {"path", to_json(r.path)},
                      {"s1", r.s1},
                      {"s2", r.s2},
                      {"p_direct", to_string(r.p_direct)},
                      {"p_via", to_string(r.p_via)}});
    if (r.p_direct != 0) type1.push_back({{"id", r.id}, {"p", to_string(r.p_direct)}});
    if (r.p_via != 0) type2.push_back({{"id", r.id}, {"p", to_string(r.p_via)}});
  }
  const Matrix2 m = mean_matrix(laws);
  json matrix = json::array();
  for (const auto& row : m.a) matrix.push_back(json::array({to_string(row[0]), to_string(row[1])}));
  const Real c = eig.v[0] * eig.u[0] + eig.v[1] * eig.u[1];
  json mom = json::array();
  for (const auto& mk : moments.moments) mom.push_back(json::array({real_string(mk[0]), real_string(mk[1])}));
  return {{"shapes", shapes},
          {"kernels", {{"type1", type1}, {"type2", type2}}},
          {"phi", coefficient_map(laws.phi)},
          {"theta", coefficient_map(laws.theta)},
          {"mean_matrix", matrix},
          {"lambda", real_string(eig.lambda)},
          {"lambda_prime", real_string(eig.lambda_minor)},
          {"u", json::array({real_string(eig.u[0]), real_string(eig.u[1])})},
          {"v", json::array({real_string(eig.v[0]), real_string(eig.v[1])})},
          {"c", real_string(c)},
          {"dim", real_string(eig.dimension)},
          {"moments", mom}};
}

std::string path_csv(const Path& w) {
  std::string out = "step,i,j\n";
  for (std::size_t k = 0; k < w.size(); ++k) {
    out += std::to_string(k) + "," + std::to_string(w[k].i) + "," + std::to_string(w[k].j) + "\n";
  }
  return out;
}

std::string polyline_csv(const std::vector<PolylinePoint>& line) {
  std::string out = "t,x,y\n";
  char buf[128];
  for (const PolylinePoint& p : line) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g\n", p.t, p.x, p.y);
    out += buf;
  }
  return out;
}

namespace {

struct Point {
  double x;
  double y;
};

class SvgCanvas {
 public:
  SvgCanvas(double min_x, double min_y, double max_x, double max_y, double size) {
    const double w = std::max(max_x - min_x, 1e-9);
    const double h = std::max(max_y - min_y, 1e-9);
    scale_ = size / std::max(w, h);
    min_x_ = min_x;
    max_y_ = max_y;
    width_ = w * scale_ + 2 * margin_;
    height_ = h * scale_ + 2 * margin_;
  }

  std::string header() const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_) << "\" height=\"" << fmt(height_)
       << "\" viewBox=\"0 0 " << fmt(width_) << " " << fmt(height_) << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
  }

  std::string polyline(const std::vector<Point>& pts, const std::string& stroke, double width) const {
    std::string s = "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(width) +
                    "\" stroke-linejoin=\"round\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k > 0) s += ' ';
      s += fmt(sx(pts[k].x)) + "," + fmt(sy(pts[k].y));
    }
    return s + "\"/>\n";
  }

  std::string polygon(const std::array<Point, 3>& pts, const std::string& stroke) const {
    std::string s = "<polygon fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"0.5\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k > 0) s += ' ';
      s += fmt(sx(pts[k].x)) + "," + fmt(sy(pts[k].y));
    }
    return s + "\"/>\n";
  }

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
  }
  double sx(double x) const { return margin_ + (x - min_x_) * scale_; }
  double sy(double y) const { return margin_ + (max_y_ - y) * scale_; }

  double margin_ = 10.0;
  double scale_ = 1.0;
  double min_x_ = 0.0;
  double max_y_ = 0.0;
  double width_ = 0.0;
  double height_ = 0.0;
};

Point to_point(Coord c, double scale) { return {c.x() * scale, c.y() * scale}; }

const std::array<const char*, 8> palette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                         "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string backdrop(const SvgCanvas& canvas, int level, double scale) {
  std::string out;
  for (const Triangle& t : unit_triangles(level)) {
    const auto c = t.corners();
    out += canvas.polygon({to_point(c[0], scale), to_point(c[1], scale), to_point(c[2], scale)}, "#cccccc");
  }
  return out;
}

}  // namespace

std::string lattice_path_svg(const Path& w, const SvgStyle& style) {
  if (w.empty()) throw error(errc::empty_input, "cannot draw an empty path");
  double min_x = std::numeric_limits<double>::max();
  double min_y = min_x;
  double max_x = std::numeric_limits<double>::lowest();
  double max_y = max_x;
  const auto extend = [&](Point p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const Coord c : w) extend(to_point(c, 1.0));
  if (style.backdrop_level >= 0) {
    const double s = static_cast<double>(side_of(style.backdrop_level));
    extend({-s, 0.0});
    extend({s, 0.0});
    extend(to_point(apex(style.backdrop_level), 1.0));
  }
  const SvgCanvas canvas(min_x, min_y, max_x, max_y, style.size);
  std::string out = canvas.header();
  if (style.backdrop_level >= 0) out += backdrop(canvas, style.backdrop_level, 1.0);
  std::vector<Point> pts;
  for (const Coord c : w) pts.push_back(to_point(c, 1.0));
  out += canvas.polyline(pts, palette[0], 2.0);
  return out + "</svg>\n";
}

std::string limit_path_svg(const RefinedPath& p, const SvgStyle& style) {
  if (p.levels.empty() || p.cells().empty()) throw error(errc::empty_input, "cannot draw an empty limit path");
  const SvgCanvas canvas(0.0, 0.0, 1.0, std::sqrt(3.0) / 2, style.size);
  std::string out = canvas.header();
  if (style.backdrop_level >= 0) {
    out += backdrop(canvas, style.backdrop_level, std::ldexp(1.0, -style.backdrop_level));
  }
  const int first = p.depth + 1 - static_cast<int>(p.levels.size());
  for (std::size_t k = 0; k < p.levels.size(); ++k) {
    const int m = first + static_cast<int>(k);
    const double scale = std::ldexp(1.0, -m);
    std::vector<Point> pts{{0.0, 0.0}};
    for (const LimitCell& c : p.levels[k]) {
      if (c.kind == CellKind::type2) pts.push_back(to_point(c.triangle.third_corner(c.entry, c.exit), scale));
      pts.push_back(to_point(c.exit, scale));
    }
    const bool last = k + 1 == p.levels.size();
    out += canvas.polyline(pts, palette[static_cast<std::size_t>(m) % palette.size()], last ? 1.5 : 0.75);
  }
  return out + "</svg>\n";
}

void write_file(const std::string& filename, const std::string& content) {
  std::ofstream f(filename, std::ios::binary);
  if (!f) throw error(errc::io_error, "cannot open " + filename + " for writing");
  f << content;
  if (!f) throw error(errc::io_error, "failed writing " + filename);
}

}  // namespace gasket::io
