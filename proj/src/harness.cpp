#include "gasket/harness.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "gasket/eraser.hpp"
#include "gasket/error.hpp"
#include "gasket/exact.hpp"
#include "gasket/io.hpp"
#include "gasket/limit.hpp"
#include "gasket/stats.hpp"

#ifndef GASKET_BUILD_ID
#define GASKET_BUILD_ID "unknown"
#endif

namespace gasket {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 6> command_names{{
    {Command::exact, "exact"},
    {Command::mc_shapes, "mc-shapes"},
    {Command::mc_length, "mc-length"},
    {Command::limit_path, "limit-path"},
    {Command::dimension, "dimension"},
    {Command::moments, "moments"},
}};

constexpr std::array<std::pair<OutputFormat, std::string_view>, 3> format_names{{
    {OutputFormat::json, "json"},
    {OutputFormat::csv, "csv"},
    {OutputFormat::svg, "svg"},
}};

bool supports(Command c, OutputFormat f) {
  if (f != OutputFormat::svg) return true;
  return c == Command::mc_shapes || c == Command::mc_length || c == Command::limit_path;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

struct Laws {
  const ShapeTable& table;
  OffspringLaws laws;
  Matrix2 mean;
  EigenData eig;
};

const Laws& laws() {
  static const Laws l = [] {
    const ShapeTable& t = standard_shape_table();
    OffspringLaws o = build_phi_theta(t);
    const Matrix2 m = mean_matrix(o);
    return Laws{t, o, m, eigen_data(m)};
  }();
  return l;
}

// Expected (s1, s2) of the unit skeleton of L X_N (row 0) or L X'_N (row 1).
std::array<double, 2> expected_type_counts(Crossing variant, int level) {
  const Matrix2 p = laws().mean.pow(level);
  const std::size_t row = variant == Crossing::direct ? 0 : 1;
  return {p.a[row][0].convert_to<double>(), p.a[row][1].convert_to<double>()};
}

struct CrossingDraw {
  Path path;
  std::uint64_t attempts = 1;
};

CrossingDraw draw_crossing(const RunConfig& c, Rng& rng) {
  if (c.method == SampleMethod::hierarchical) return {sample_crossing(c.level, c.variant, c.method, rng), 0};
  std::uint64_t budget = WalkOptions{}.step_budget;
  for (std::uint64_t attempts = 1;; ++attempts) {
    if (auto w = attempt_crossing(c.level, c.variant, rng, budget)) return {std::move(*w), attempts};
  }
}

json summary_json(const stats::Summary& s) {
  return {{"n", s.n},           {"mean", s.mean}, {"variance", s.variance}, {"std_error", s.std_error},
          {"variance_std_error", s.variance_std_error}, {"min", s.min},   {"max", s.max}};
}

RunResult run_exact(const RunConfig& c) {
  const Laws& l = laws();
  RunResult r;
  r.report = io::exact_report(l.table, l.laws, l.eig, moment_table(8, l.laws, l.eig));
  if (c.format == OutputFormat::csv) {
    r.document = "id,s1,s2,p_direct,p_via,path\n";
    for (const ShapeRecord& s : l.table.shapes) {
      std::string path;
      for (const Coord v : s.path) path += (path.empty() ? "" : " ") + std::to_string(v.i) + ":" + std::to_string(v.j);
      r.document += s.id + "," + std::to_string(s.s1) + "," + std::to_string(s.s2) + "," + to_string(s.p_direct) +
                    "," + to_string(s.p_via) + "," + path + "\n";
    }
  }
  return r;
}

RunResult run_mc_shapes(const RunConfig& c) {
  const ShapeTable& table = laws().table;
  struct Outcome {
    std::size_t shape = 0;
    std::uint64_t attempts = 0;
    int s1 = 0;
    int s2 = 0;
  };
  const std::function<Outcome(Rng&, int)> one = [&](Rng& rng, int) {
    const CrossingDraw d = draw_crossing(c, rng);
    const Path le = loop_erase(d.path);
    // The coarse shape is read right after the largest-scale stage. Later stages keep
    // its triangles but may cut a third-corner visit, turning a Type 2 cell into Type 1.
    const Path top = c.level == 1 ? le : erase_scale(d.path, c.level);
    const Path frame = c.level == 1
                           ? le
                           : to_shape_frame(coarse_grain(top, c.level - 1), Triangle{origin, c.level}, origin,
                                            apex(c.level));
    const Skeleton sk = skeleton(le, 0);
    return Outcome{table.index_of(classify_shape(frame, table)), d.attempts, sk.count(CellKind::type1),
                   sk.count(CellKind::type2)};
  };
  const std::vector<Outcome> outcomes = replicate(c.samples, c.seed, c.threads, one);

  std::vector<std::uint64_t> counts(table.shapes.size(), 0);
  std::uint64_t attempts = 0;
  std::vector<double> s1, s2;
  for (const Outcome& o : outcomes) {
    ++counts[o.shape];
    attempts += o.attempts;
    s1.push_back(o.s1);
    s2.push_back(o.s2);
  }
  std::vector<std::uint64_t> observed;
  std::vector<double> expected;
  bool impossible_seen = false;
  json cells = json::array();
  for (std::size_t k = 0; k < table.shapes.size(); ++k) {
    const Rational& p = c.variant == Crossing::direct ? table.shapes[k].p_direct : table.shapes[k].p_via;
    cells.push_back({{"shape", table.shapes[k].id}, {"count", counts[k]}, {"expected", to_string(p)}});
    if (p == 0) {
      impossible_seen = impossible_seen || counts[k] > 0;
      continue;
    }
    observed.push_back(counts[k]);
    expected.push_back(p.convert_to<double>());
  }
  RunResult r;
  const stats::ChiSquareResult chi = stats::chi_square(observed, expected);
  r.passed = chi.p_value > 0.001 && !impossible_seen;
  r.report["cells"] = cells;
  r.report["chi_square"] = {{"statistic", chi.statistic},
                            {"degrees_of_freedom", chi.degrees_of_freedom},
                            {"p_value", chi.p_value},
                            {"pooled_cells", chi.cells}};

  if (c.method == SampleMethod::rejection) {
    const double p = c.variant == Crossing::direct ? 0.25 : 1.0 / 16.0;
    const double rate = static_cast<double>(c.samples) / static_cast<double>(attempts);
    // the number of attempts per success is geometric with mean 1/p and variance (1-p)/p^2
    const double se_attempts = std::sqrt((1 - p) / (p * p) / c.samples);
    const double z = (static_cast<double>(attempts) / c.samples - 1 / p) / se_attempts;
    r.passed = r.passed && std::abs(z) <= 3;
    r.report["acceptance"] = {{"attempts", attempts}, {"rate", rate}, {"expected", p}, {"z", z}};
  }

  const auto predicted = expected_type_counts(c.variant, c.level);
  const stats::Summary a = stats::summarize(s1);
  const stats::Summary b = stats::summarize(s2);
  const double z1 = a.std_error > 0 ? (a.mean - predicted[0]) / a.std_error : 0.0;
  const double z2 = b.std_error > 0 ? (b.mean - predicted[1]) / b.std_error : 0.0;
  r.passed = r.passed && std::abs(z1) <= 3 && std::abs(z2) <= 3;
  r.report["type_counts"] = {{"s1", summary_json(a)}, {"s2", summary_json(b)},
                             {"predicted", json::array({predicted[0], predicted[1]})},
                             {"z", json::array({z1, z2})}};

  if (c.format == OutputFormat::csv) {
    r.document = "shape,count,expected\n";
    for (std::size_t k = 0; k < table.shapes.size(); ++k) {
      const Rational& p = c.variant == Crossing::direct ? table.shapes[k].p_direct : table.shapes[k].p_via;
      r.document += table.shapes[k].id + "," + std::to_string(counts[k]) + "," + to_string(p) + "\n";
    }
  } else if (c.format == OutputFormat::svg) {
    Rng rng = make_stream(c.seed, 0);
    r.document = io::lattice_path_svg(loop_erase(draw_crossing(c, rng).path), io::SvgStyle{c.level});
  }
  return r;
}

RunResult run_mc_length(const RunConfig& c) {
  struct Outcome {
    double walk = 0;
    double erased = 0;
  };
  const std::function<Outcome(Rng&, int)> one = [&](Rng& rng, int) {
    const Path w = draw_crossing(c, rng).path;
    return Outcome{static_cast<double>(w.size() - 1), static_cast<double>(loop_erase(w).size() - 1)};
  };
  const std::vector<Outcome> outcomes = replicate(c.samples, c.seed, c.threads, one);
  std::vector<double> walk, erased, scaled;
  const double lambda = laws().eig.lambda.convert_to<double>();
  for (const Outcome& o : outcomes) {
    walk.push_back(o.walk);
    erased.push_back(o.erased);
    scaled.push_back(o.erased * std::pow(lambda, -c.level));
  }
  const auto counts = expected_type_counts(c.variant, c.level);
  const double predicted = counts[0] + 2 * counts[1];
  const stats::Summary e = stats::summarize(erased);
  const double z = e.std_error > 0 ? (e.mean - predicted) / e.std_error : 0.0;
  RunResult r;
  r.passed = std::abs(z) <= 3;
  r.report["walk_length"] = summary_json(stats::summarize(walk));
  r.report["erased_length"] = summary_json(e);
  r.report["erased_length_predicted_mean"] = predicted;
  r.report["erased_length_z"] = z;
  r.report["scaled_erased_length"] = summary_json(stats::summarize(scaled));
  r.report["lambda"] = lambda;
  if (c.format == OutputFormat::csv) {
    r.document = "sample,walk_length,erased_length,scaled_length\n";
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      r.document += std::to_string(k) + "," + format_double(walk[k]) + "," + format_double(erased[k]) + "," +
                    format_double(scaled[k]) + "\n";
    }
  } else if (c.format == OutputFormat::svg) {
    Rng rng = make_stream(c.seed, 0);
    r.document = io::lattice_path_svg(loop_erase(draw_crossing(c, rng).path), io::SvgStyle{c.level});
  }
  return r;
}

const RefinementTable& kernels() {
  static const RefinementTable t = refinement_table(laws().table);
  return t;
}

RunResult run_limit_path(const RunConfig& c) {
  Rng rng = make_stream(c.seed, 0);
  const RefinedPath p = sample_limit_path(c.depth, rng, kernels());
  RunResult r;
  json counts = json::array();
  for (const LevelCounts& k : p.counts) counts.push_back({{"type1", k.type1}, {"type2", k.type2}});
  r.report["depth"] = p.depth;
  r.report["lambda"] = p.lambda;
  r.report["counts"] = counts;
  r.report["scaled_length"] = p.scaled_length();
  if (p.depth >= 6) r.report["box_count_dimension"] = box_count_dimension(p);
  r.report["skeleton"] = io::skeleton_json(p.cells(), p.depth);
  if (c.format == OutputFormat::csv) r.document = io::polyline_csv(p.polyline());
  if (c.format == OutputFormat::svg) r.document = io::limit_path_svg(p);
  return r;
}

RunResult run_dimension(const RunConfig& c) {
  const std::function<double(Rng&, int)> one = [&](Rng& rng, int) {
    return box_count_dimension(sample_limit_path(c.depth, rng, kernels(), LimitOptions{false}));
  };
  const std::vector<double> slopes = replicate(c.samples, c.seed, c.threads, one);
  const stats::Summary s = stats::summarize(slopes);
  const double dim = laws().eig.dimension.convert_to<double>();
  RunResult r;
  r.passed = std::abs(s.mean - dim) < 0.05;
  r.report["slopes"] = summary_json(s);
  r.report["predicted"] = dim;
  r.report["tolerance"] = 0.05;
  if (c.format == OutputFormat::csv) {
    r.document = "sample,slope\n";
    for (std::size_t k = 0; k < slopes.size(); ++k) r.document += std::to_string(k) + "," + format_double(slopes[k]) + "\n";
  }
  return r;
}

RunResult run_moments(const RunConfig& c) {
  const Laws& l = laws();
  const MomentTable t = moment_table(c.level, l.laws, l.eig);
  RunResult r;
  json moments = json::array();
  for (const auto& m : t.moments) moments.push_back(json::array({io::real_string(m[0]), io::real_string(m[1])}));
  json residuals = json::array();
  for (const char* tv : {"-0.5", "-0.1", "0.1"}) {
    residuals.push_back({{"t", tv},
                         {"residual", json::array({io::real_string(t.functional_residual(0, Real(tv), l.laws), 6),
                                                   io::real_string(t.functional_residual(1, Real(tv), l.laws), 6)})}});
  }
  r.report["order"] = c.level;
  r.report["moments"] = moments;
  r.report["functional_residuals"] = residuals;
  if (c.format == OutputFormat::csv) {
    r.document = "k,m1,m2\n";
    for (std::size_t k = 0; k < t.moments.size(); ++k) {
      r.document += std::to_string(k) + "," + io::real_string(t.moments[k][0], 20) + "," +
                    io::real_string(t.moments[k][1], 20) + "\n";
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [k, n] : command_names) {
    if (k == c) return n;
  }
  return "unknown";
}

std::string_view to_string(OutputFormat f) {
  for (const auto& [k, n] : format_names) {
    if (k == f) return n;
  }
  return "unknown";
}

Command parse_command(std::string_view s) {
  for (const auto& [k, n] : command_names) {
    if (n == s) return k;
  }
  throw error(errc::config_invalid, "unknown command '" + std::string(s) + "'");
}

OutputFormat parse_format(std::string_view s) {
  for (const auto& [k, n] : format_names) {
    if (n == s) return k;
  }
  throw error(errc::config_invalid, "unknown format '" + std::string(s) + "'");
}

void validate(const RunConfig& c) {
  const auto fail = [](const std::string& what) { throw error(errc::config_invalid, what); };
  if (c.samples < 1) fail("samples must be at least 1");
  if (c.threads < 1) fail("threads must be at least 1");
  if (!supports(c.command, c.format)) {
    fail("format " + std::string(to_string(c.format)) + " does not apply to " + std::string(to_string(c.command)));
  }
  switch (c.command) {
    case Command::mc_shapes:
    case Command::mc_length:
      if (c.level < 1 || c.level > 12) fail("level must be in 1..12");
      break;
    case Command::moments:
      if (c.level < 2 || c.level > 60) fail("moment order must be in 2..60");
      break;
    case Command::limit_path:
      if (c.depth < 0 || c.depth > 16) fail("depth must be in 0..16");
      break;
    case Command::dimension:
      if (c.depth < 6 || c.depth > 16) fail("depth must be in 6..16");
      break;
    case Command::exact: break;
  }
}

json to_json(const RunConfig& c) {
  return {{"command", std::string(to_string(c.command))},
          {"level", c.level},
          {"depth", c.depth},
          {"samples", c.samples},
          {"seed", c.seed},
          {"threads", c.threads},
          {"variant", std::string(to_string(c.variant))},
          {"method", std::string(to_string(c.method))},
          {"output", c.output},
          {"format", std::string(to_string(c.format))}};
}

std::string build_id() { return GASKET_BUILD_ID; }

RunResult run(const RunConfig& config) {
  validate(config);
  RunResult r;
  switch (config.command) {
    case Command::exact: r = run_exact(config); break;
    case Command::mc_shapes: r = run_mc_shapes(config); break;
    case Command::mc_length: r = run_mc_length(config); break;
    case Command::limit_path: r = run_limit_path(config); break;
    case Command::dimension: r = run_dimension(config); break;
    case Command::moments: r = run_moments(config); break;
  }
  r.report["build"] = build_id();
  json cfg = to_json(config);
  // the report must not depend on how the work was split
  cfg.erase("threads");
  r.report["config"] = cfg;
  r.report["passed"] = r.passed;
  if (config.format == OutputFormat::json) r.document = r.report.dump(2) + "\n";
  return r;
}

std::string output_filename(const RunConfig& config) {
  return config.output + "." + std::string(to_string(config.format));
}

}  // namespace gasket
