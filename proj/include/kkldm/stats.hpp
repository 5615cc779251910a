#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kkldm {

/// Density histogram of x / mean(x) over [0, max]; sum(density * width) == 1.
struct Histogram {
  double bin_width = 0.0;
  std::vector<double> center;
  std::vector<double> density;
};

Histogram unit_mean_histogram(std::span<const double> samples, std::size_t bins);

double sample_mean(std::span<const double> samples);
/// Standard error of the mean.
double standard_error(std::span<const double> samples);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// One-sample KS statistic against a continuous cdf.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail probability P(D > d) for effective sample
/// size n_eff, with the Stephens small-sample correction.
double ks_p_value(double d, double n_eff);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit. Adjacent cells with expected count below 5 are pooled.
ChiSquareResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probability);

}  // namespace kkldm
