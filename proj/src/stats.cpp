#include "kkldm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "kkldm/errors.hpp"

namespace kkldm {

double sample_mean(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double standard_error(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  const double m = sample_mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

Histogram unit_mean_histogram(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw ValidationError("histogram of an empty sample");
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  const double mean = sample_mean(samples);
  if (!(mean > 0.0)) throw ValidationError("histogram normalization needs a positive mean");

  double hi = 0.0;
  for (double x : samples) hi = std::max(hi, x / mean);
  if (hi <= 0.0) hi = 1.0;

  Histogram h;
  h.bin_width = hi / static_cast<double>(bins);
  h.center.resize(bins);
  h.density.assign(bins, 0.0);
  std::vector<std::size_t> count(bins, 0);
  for (double x : samples) {
    auto b = static_cast<std::size_t>((x / mean) / h.bin_width);
    ++count[std::min(b, bins - 1)];
  }
  const double norm = 1.0 / (static_cast<double>(samples.size()) * h.bin_width);
  for (std::size_t b = 0; b < bins; ++b) {
    h.center[b] = (static_cast<double>(b) + 0.5) * h.bin_width;
    h.density[b] = static_cast<double>(count[b]) * norm;
  }
  return h;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ValidationError("KS distance of an empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ValidationError("KS statistic of an empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double d, double n_eff) {
  const double root = std::sqrt(n_eff);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ChiSquareResult chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probability) {
  if (observed.size() != probability.size() || observed.empty()) {
    throw ValidationError("chi-square needs matching, non-empty observed and probability vectors");
  }
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::size_t{0}));

  std::vector<double> obs;
  std::vector<double> expct;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += probability[i] * total;
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (expct.empty()) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      expct.back() += e_acc;
    }
  }

  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expct[i] > 0.0) r.statistic += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  }
  r.dof = static_cast<int>(obs.size()) - 1;
  if (r.dof >= 1) {
    boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  }
  return r;
}

}  // namespace kkldm
