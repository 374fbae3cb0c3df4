#include "gasket/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "gasket/error.hpp"

namespace gasket::stats {

double chi_square_tail(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom < 1) throw error(errc::invalid_argument, "chi-square needs dof >= 1");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * degrees_of_freedom, 0.5 * statistic);
}

ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected,
                           double min_expected) {
  if (observed.size() != expected.size()) {
    throw error(errc::invalid_argument, "observed and expected differ in length");
  }
  const double total_p = std::accumulate(expected.begin(), expected.end(), 0.0);
  if (std::abs(total_p - 1.0) > 1e-9) throw error(errc::invalid_argument, "expected probabilities must sum to 1");
  const double n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n < 1) throw error(errc::invalid_argument, "no observations");

  struct Cell {
    double observed;
    double expected;
  };
  std::vector<Cell> kept;
  Cell pooled{0.0, 0.0};
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const Cell c{static_cast<double>(observed[k]), n * expected[k]};
    if (c.expected < min_expected) {
      pooled.observed += c.observed;
      pooled.expected += c.expected;
    } else {
      kept.push_back(c);
    }
  }
  if (pooled.expected > 0.0) {
    if (pooled.expected < min_expected && !kept.empty()) {
      auto smallest = std::min_element(kept.begin(), kept.end(),
                                       [](const Cell& a, const Cell& b) { return a.expected < b.expected; });
      smallest->observed += pooled.observed;
      smallest->expected += pooled.expected;
    } else {
      kept.push_back(pooled);
    }
  }
  if (kept.size() < 2) throw error(errc::degenerate_cells, "fewer than two cells after pooling");

  ChiSquareResult out;
  for (const Cell& c : kept) {
    const double d = c.observed - c.expected;
    out.statistic += d * d / c.expected;
  }
  out.cells = static_cast<int>(kept.size());
  out.degrees_of_freedom = out.cells - 1;
  out.p_value = chi_square_tail(out.statistic, out.degrees_of_freedom);
  return out;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  // the alternating series converges slowly for small x; the tail is 1 to double precision there
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw error(errc::empty_input, "ks_two_sample needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0;
  std::size_t ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] == x) ++ia;
    while (ib < b.size() && b[ib] == x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d)};
}

KsResult ks_uniform(std::vector<double> values) {
  if (values.empty()) throw error(errc::empty_input, "ks_uniform needs a non-empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = std::clamp(values[k], 0.0, 1.0);
    d = std::max({d, static_cast<double>(k + 1) / n - x, x - static_cast<double>(k) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d)};
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw error(errc::empty_input, "summarize needs a non-empty sample");
  Summary s;
  s.n = values.size();
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (const double v : values) {
    const double d = v - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m4 /= n;
  s.variance = s.n > 1 ? m2 * n / (n - 1.0) : 0.0;
  s.std_error = std::sqrt(s.variance / n);
  s.variance_std_error = s.n > 1 ? std::sqrt(std::max(0.0, m4 - m2 * m2) / n) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

}  // namespace gasket::stats
