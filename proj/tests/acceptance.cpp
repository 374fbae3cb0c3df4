// Acceptance checks A1..A10. Usage: acceptance <A1..A10 | all>
// Each criterion prints one line "Ak PASS|FAIL <measurements>"; the exit status is
// non-zero if any requested criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "gasket/eraser.hpp"
#include "gasket/exact.hpp"
#include "gasket/harness.hpp"
#include "gasket/limit.hpp"
#include "gasket/stats.hpp"

using namespace gasket;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

// Published masses, located by vertex sequence so that the check does not depend on
// how shapes are numbered.
const std::vector<std::tuple<Path, Rational, Rational>>& published_table() {
  static const std::vector<std::tuple<Path, Rational, Rational>> t{
      {{{0, 0}, {0, 1}, {0, 2}}, Rational(1, 2), Rational(1, 9)},
      {{{0, 0}, {1, 0}, {0, 1}, {0, 2}}, Rational(2, 15), Rational(11, 90)},
      {{{0, 0}, {0, 1}, {1, 1}, {0, 2}}, Rational(2, 15), Rational(11, 90)},
      {{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 2}}, Rational(1, 30), Rational(2, 45)},
      {{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}}, Rational(1, 30), Rational(2, 45)},
      {{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}}, Rational(1, 30), Rational(2, 45)},
      {{{0, 0}, {1, 0}, {1, 1}, {0, 2}}, Rational(2, 15), Rational(8, 45)},
      {{{0, 0}, {1, 0}, {2, 0}, {1, 1}, {0, 2}}, Rational(0), Rational(2, 9)},
      {{{0, 0}, {1, 0}, {2, 0}, {1, 1}, {0, 1}, {0, 2}}, Rational(0), Rational(1, 18)},
      {{{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}}, Rational(0), Rational(1, 18)},
  };
  return t;
}

Outcome a1() {
  const auto start = Clock::now();
  const ShapeLaw direct = solve_shape_distribution(Crossing::direct);
  const ShapeLaw via = solve_shape_distribution(Crossing::via_corner);
  const double elapsed = seconds_since(start);
  int matched_direct = 0;
  int matched_via = 0;
  bool exact = direct.mass.size() == 7 && via.mass.size() == 10;
  for (const auto& [path, pd, pv] : published_table()) {
    const auto d = direct.mass.find(path);
    const auto v = via.mass.find(path);
    if (pd != 0) {
      const bool ok = d != direct.mass.end() && d->second == pd;
      matched_direct += ok;
      exact = exact && ok;
    } else {
      exact = exact && d == direct.mass.end();
    }
    const bool ok = v != via.mass.end() && v->second == pv;
    matched_via += ok;
    exact = exact && ok;
  }
  return {exact && elapsed < 1.0, "direct " + std::to_string(matched_direct) + "/7, via " +
                                      std::to_string(matched_via) + "/10 exact; solve " + fmt("%.3f s", elapsed)};
}

Outcome a2() {
  const auto start = Clock::now();
  const OffspringLaws laws = build_phi_theta(standard_shape_table(), false);
  const OffspringLaws ref = reference_offspring_laws();
  bool ok = laws.phi == ref.phi && laws.theta == ref.theta;
  ok = ok && laws.phi.evaluate(Rational(1), Rational(1)) == 1 && laws.theta.evaluate(Rational(1), Rational(1)) == 1;
  std::string normalised;
  for (int n = 1; n <= 4; ++n) {
    const OffspringLaws it = compose_level(laws, n);
    const bool one = it.phi.evaluate(Rational(1), Rational(1)) == 1 && it.theta.evaluate(Rational(1), Rational(1)) == 1;
    ok = ok && one;
    normalised += one ? "1" : "x";
  }
  const double elapsed = seconds_since(start);
  return {ok && elapsed < 1.0, std::string("phi/theta equal reference: ") +
                                   (laws.phi == ref.phi && laws.theta == ref.theta ? "yes" : "no") +
                                   "; Phi_N(1,1)=1 for N=1..4: " + normalised + "; " + fmt("%.3f s", elapsed)};
}

Outcome a3() {
  const auto start = Clock::now();
  const Matrix2 m = mean_matrix(reference_offspring_laws());
  const Matrix2 stated{{{{Rational(9, 5), Rational(2, 15)}, {Rational(26, 15), Rational(13, 15)}}}};
  const EigenData eig = eigen_data(m);
  const Real root = boost::multiprecision::sqrt(Real(205));
  const Real err_major = boost::multiprecision::abs(eig.lambda - (20 + root) / 15);
  const Real err_minor = boost::multiprecision::abs(eig.lambda_minor - (20 - root) / 15);
  const double dim_err = std::abs(eig.dimension.convert_to<double>() - 1.1939);
  const bool matrix_ok = m == stated;
  const bool lambda_ok = err_major < Real("1e-30") && err_minor < Real("1e-30");
  const bool dim_ok = dim_err < 2e-4;
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "mean matrix [[" << to_string(m.a[0][0]) << "," << to_string(m.a[0][1]) << "],[" << to_string(m.a[1][0])
     << "," << to_string(m.a[1][1]) << "]] " << (matrix_ok ? "equals" : "differs from") << " [[9/5,2/15],[26/15,13/15]]"
     << "; |lambda-(20+sqrt205)/15|=" << fmt("%.1e", err_major.convert_to<double>())
     << " |lambda'-(20-sqrt205)/15|=" << fmt("%.1e", err_minor.convert_to<double>())
     << "; |dim-1.1939|=" << fmt("%.1e", dim_err) << "; " << fmt("%.3f s", elapsed);
  return {matrix_ok && lambda_ok && dim_ok && elapsed < 1.0, os.str()};
}

Outcome shape_run(int level, Crossing variant, int samples, std::uint64_t seed, bool check_acceptance,
                  bool check_counts) {
  RunConfig c;
  c.command = Command::mc_shapes;
  c.level = level;
  c.variant = variant;
  c.samples = samples;
  c.seed = seed;
  c.threads = worker_count();
  const RunResult r = run(c);
  const double p = r.report["chi_square"]["p_value"];
  bool ok = p > 0.001;
  std::ostringstream os;
  os << "N=" << level << " " << to_string(variant) << ": chi2=" << fmt("%.2f", r.report["chi_square"]["statistic"])
     << " df=" << r.report["chi_square"]["degrees_of_freedom"].get<int>() << " p=" << fmt("%.3f", p);
  for (const auto& cell : r.report["cells"]) {
    if (cell["count"].get<std::uint64_t>() > 0 && cell["expected"] == "0") ok = false;
  }
  if (check_acceptance) {
    const double z = r.report["acceptance"]["z"];
    ok = ok && std::abs(z) <= 3;
    os << " acceptance=" << fmt("%.5f", r.report["acceptance"]["rate"]) << " (z=" << fmt("%.2f", z) << ")";
  }
  if (check_counts) {
    const auto& tc = r.report["type_counts"];
    const double z1 = tc["z"][0];
    const double z2 = tc["z"][1];
    ok = ok && std::abs(z1) <= 3 && std::abs(z2) <= 3;
    os << " mean(s1,s2)=(" << fmt("%.4f", tc["s1"]["mean"]) << "," << fmt("%.4f", tc["s2"]["mean"]) << ") vs ("
       << fmt("%.4f", tc["predicted"][0]) << "," << fmt("%.4f", tc["predicted"][1]) << ") z=(" << fmt("%.2f", z1)
       << "," << fmt("%.2f", z2) << ")";
  }
  return {ok, os.str()};
}

Outcome a4() {
  const Outcome d = shape_run(1, Crossing::direct, 100000, 4001, true, false);
  const Outcome v = shape_run(1, Crossing::via_corner, 100000, 4002, true, false);
  return {d.passed && v.passed, d.detail + "; " + v.detail};
}

Outcome a5() { return shape_run(2, Crossing::direct, 10000, 5001, false, true); }

Outcome a6() {
  const double lambda = eigen_data(mean_matrix(reference_offspring_laws())).lambda.convert_to<double>();
  std::map<int, double> means;
  for (int n = 3; n <= 6; ++n) {
    const std::function<double(Rng&, int)> one = [n](Rng& rng, int) {
      const Path w = sample_crossing(n, Crossing::direct, SampleMethod::hierarchical, rng);
      return static_cast<double>(loop_erase(w).size() - 1);
    };
    const std::vector<double> lengths = replicate(1000, 6000 + static_cast<std::uint64_t>(n), worker_count(), one);
    means[n] = stats::summarize(lengths).mean;
  }
  bool ok = true;
  std::ostringstream os;
  os << "lambda=" << fmt("%.5f", lambda) << "; mean l:";
  for (const auto& [n, m] : means) os << " N" << n << "=" << fmt("%.2f", m);
  os << "; ratios:";
  for (int n = 4; n <= 6; ++n) {
    const double ratio = means[n] / means[n - 1];
    ok = ok && std::abs(ratio / lambda - 1) < 0.05;
    os << " " << fmt("%.4f", ratio);
  }
  return {ok, os.str()};
}

Outcome a7() {
  const OffspringLaws laws = reference_offspring_laws();
  const EigenData eig = eigen_data(mean_matrix(laws));
  const MomentTable moments = moment_table(4, laws, eig);
  const RefinementTable table = refinement_table(standard_shape_table());
  const int depth = 12;
  const std::function<double(Rng&, int)> one = [&](Rng& rng, int) {
    return sample_limit_path(depth, rng, table, LimitOptions{false}).scaled_length();
  };
  const std::vector<double> scaled = replicate(10000, 7001, worker_count(), one);
  const LengthStatistics s = length_statistics(scaled, depth, moments, eig);
  std::ostringstream os;
  os << "mean=" << fmt("%.5f", s.summary.mean) << " vs " << fmt("%.5f", s.predicted_mean)
     << " (z=" << fmt("%.2f", s.mean_z) << "); variance=" << fmt("%.5f", s.summary.variance) << " vs "
     << fmt("%.5f", s.predicted_variance) << " (z=" << fmt("%.2f", s.variance_z) << ")";
  return {std::abs(s.mean_z) <= 3 && std::abs(s.variance_z) <= 3, os.str()};
}

Outcome a8() {
  const OffspringLaws laws = reference_offspring_laws();
  const EigenData eig = eigen_data(mean_matrix(laws));
  const int order = 8;
  const MomentTable table = moment_table(order, laws, eig);
  const MomentTable longer = moment_table(order + 8, laws, eig);
  double worst = 0.0;
  std::ostringstream os;
  os << "K=" << order << ":";
  for (const char* tv : {"-0.5", "-0.1", "0.1"}) {
    const Real t(tv);
    for (int i = 0; i < 2; ++i) {
      const double r = table.functional_residual(i, t, laws).convert_to<double>();
      worst = std::max(worst, r);
      os << " t=" << tv << ",i=" << i + 1 << ":" << fmt("%.2e", r);
    }
    // size of the first omitted series terms at the largest argument lambda t
    Real tail(0);
    Real power = boost::multiprecision::pow(boost::multiprecision::abs(eig.lambda * t), order + 1);
    Real factorial(1);
    for (int k = 2; k <= order + 1; ++k) factorial *= k;
    for (int k = order + 1; k <= longer.order(); ++k) {
      tail += longer.moments[static_cast<std::size_t>(k)][1] * power / factorial;
      power *= boost::multiprecision::abs(eig.lambda * t);
      factorial *= k + 1;
    }
    os << " [omitted tail " << fmt("%.1e", tail.convert_to<double>()) << "]";
  }
  os << "; max residual " << fmt("%.2e", worst) << " (bound 1e-9)";
  return {worst < 1e-9, os.str()};
}

Outcome a9() {
  const RefinementTable table = refinement_table(standard_shape_table());
  const double dim = eigen_data(mean_matrix(reference_offspring_laws())).dimension.convert_to<double>();
  const int depth = 10;
  int projective_failures = 0;
  int repeated_triangles = 0;
  std::vector<double> slopes;
  for (int s = 0; s < 100; ++s) {
    const std::uint64_t key = 9000 + static_cast<std::uint64_t>(s);
    const RefinedPath deep = sample_limit_path(depth, key, table);
    for (int m = 0; m <= depth; ++m) {
      const auto& level = deep.levels[static_cast<std::size_t>(m)];
      const RefinedPath shallow = sample_limit_path(m, key, table);
      if (!std::equal(shallow.levels.begin(), shallow.levels.end(), deep.levels.begin())) ++projective_failures;
      if (m < depth && !same_geometry(coarse_grain_cells(deep.levels[static_cast<std::size_t>(m) + 1]), level)) {
        ++projective_failures;
      }
      std::set<Triangle> seen;
      for (const LimitCell& c : level) repeated_triangles += !seen.insert(c.triangle).second;
    }
    slopes.push_back(box_count_dimension(deep));
  }
  const stats::Summary s = stats::summarize(slopes);
  std::ostringstream os;
  os << "projective failures " << projective_failures << ", repeated triangles " << repeated_triangles
     << ", mean box-count slope " << fmt("%.4f", s.mean) << " (se " << fmt("%.4f", s.std_error) << ") vs dim "
     << fmt("%.4f", dim);
  return {projective_failures == 0 && repeated_triangles == 0 && std::abs(s.mean - dim) < 0.05, os.str()};
}

Outcome a10() {
  int checked = 0;
  int idempotence = 0;
  int self_avoidance = 0;
  int invariance = 0;
  int length = 0;
  Rng rng = make_stream(10001, 0);
  for (const int n : {2, 3}) {
    for (int k = 0; k < 1000; ++k) {
      const Path w = sample_crossing(n, Crossing::direct, SampleMethod::rejection, rng);
      // stages[j] is the path after erasing the loops of scales n .. n - j + 1
      std::vector<Path> stages{w};
      for (int m = n; m >= 1; --m) stages.push_back(erase_scale(stages.back(), m));
      const Path& le = stages.back();
      ++checked;
      idempotence += loop_erase(le) != le || loop_erase(w) != le;
      self_avoidance += !is_self_avoiding(le);
      // erasing scale m leaves every coarser skeleton sigma_K, K >= m, unchanged
      bool invariant = true;
      for (int m = n; m >= 1; --m) {
        const Path& before = stages[static_cast<std::size_t>(n - m)];
        const Path& after = stages[static_cast<std::size_t>(n - m + 1)];
        for (int level = m; level < n; ++level) {
          invariant = invariant && skeleton(after, level).same_cells(skeleton(before, level));
        }
      }
      invariance += !invariant;
      const Skeleton unit = skeleton(le, 0);
      length += static_cast<int>(le.size()) - 1 != unit.count(CellKind::type1) + 2 * unit.count(CellKind::type2);
    }
  }
  std::ostringstream os;
  os << checked << " paths; violations: L(L w) " << idempotence << ", self-avoidance " << self_avoidance
     << ", sigma_K invariance " << invariance << ", l = s1 + 2 s2 " << length;
  return {idempotence + self_avoidance + invariance + length == 0, os.str()};
}

const std::map<std::string, std::function<Outcome()>>& criteria() {
  static const std::map<std::string, std::function<Outcome()>> c{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}, {"A10", a10},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> wanted;
  for (int k = 1; k < argc; ++k) wanted.emplace_back(argv[k]);
  if (wanted.empty() || (wanted.size() == 1 && wanted[0] == "all")) {
    wanted.clear();
    for (int k = 1; k <= 10; ++k) wanted.push_back("A" + std::to_string(k));
  }
  bool all_passed = true;
  for (const std::string& name : wanted) {
    const auto it = criteria().find(name);
    if (it == criteria().end()) {
      std::cerr << "unknown criterion " << name << "\n";
      return 1;
    }
    Outcome o;
    const auto start = Clock::now();
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << name << " " << (o.passed ? "PASS" : "FAIL") << " " << o.detail << " ["
              << fmt("%.1f s", seconds_since(start)) << "]" << std::endl;
    all_passed = all_passed && o.passed;
  }
  return all_passed ? 0 : 1;
}
