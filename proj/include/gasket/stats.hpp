#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gasket::stats {

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  /// Number of cells left after pooling low-expectation cells.
  int cells = 0;
};

/// Pearson goodness-of-fit. Cells whose expected count is below `min_expected`
/// are pooled into one cell before the statistic is formed.
/// Throws error(degenerate_cells) if fewer than two cells remain.
ChiSquareResult chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected,
                           double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi_square_tail(double statistic, int degrees_of_freedom);

/// Asymptotic Kolmogorov tail Q(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_tail(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
/// One-sample test against the uniform law on [0, 1].
KsResult ks_uniform(std::vector<double> values);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  /// Unbiased sample variance.
  double variance = 0.0;
  double std_error = 0.0;
  /// Standard error of the sample variance, from the fourth central moment.
  double variance_std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace gasket::stats
