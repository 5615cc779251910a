#include "kkldm/analysis_fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "kkldm/errors.hpp"

namespace kkldm {

namespace {
const double kLn2 = std::log(2.0);
const double kLnLn2 = std::log(std::log(2.0));
constexpr double kMaxCondition = 1e12;
}  // namespace

double scaling_constant() { return 1.0 / (2.0 * kLn2); }

double fixed_coefficient_inv_ln() { return (kLnLn2 + 1.0) / kLn2 + 1.5; }

double fixed_coefficient_inv_ln2() { return (kLn2 + 4.0 * kLnLn2) / 8.0 - kLnLn2 * kLnLn2 / (2.0 * kLn2); }

double fixed_scaling_terms(double ln_n) {
  return scaling_constant() + fixed_coefficient_inv_ln() / ln_n + fixed_coefficient_inv_ln2() / (ln_n * ln_n);
}

double scaling_form(double ln_n, double c1, double c2, double c3) {
  const double ll = std::log(ln_n);
  const double l2 = ln_n * ln_n;
  return fixed_scaling_terms(ln_n) + c1 * ll / ln_n + c2 * ll / l2 + c3 * ll * ll / l2;
}

std::string to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::simulation: return "simulation";
    case ModelTag::rate: return "rate";
    case ModelTag::fibonacci: return "fibonacci";
    case ModelTag::series: return "series";
  }
  return "series";
}

ModelTag model_tag_from_string(const std::string& name) {
  if (name == "simulation") return ModelTag::simulation;
  if (name == "rate") return ModelTag::rate;
  if (name == "fibonacci") return ModelTag::fibonacci;
  if (name == "series") return ModelTag::series;
  throw ValidationError("unknown model tag '" + name + "'");
}

ScalingPoint ScalingPoint::from_raw(double n, double z, ModelTag model) {
  if (!(n > 0.0) || !(z > 0.0)) throw ValidationError("scaling point needs positive n and Z");
  return {std::log(n), std::log(z), model};
}

ScalingPoint ScalingPoint::from_log(double ln_n, double ln_z, ModelTag model) { return {ln_n, ln_z, model}; }

double scaled_value(const ScalingPoint& point) {
  if (point.ln_n < std::log(3.0) - 1e-12) throw ValidationError("scaled value needs n >= 3");
  if (!std::isfinite(point.ln_z)) throw ValidationError("scaled value needs a finite ln Z");
  // ln(n+1) = ln n + log1p(1/n)
  const double ln_n_plus_1 = point.ln_n + std::log1p(std::exp(-point.ln_n));
  return (point.ln_z + ln_n_plus_1) / (point.ln_n * point.ln_n);
}

FitResult fit_loglog(const std::vector<ScaledSample>& samples) {
  if (samples.size() < 6) throw ValidationError("fit needs at least 6 points");
  double lo = samples.front().ln_n;
  double hi = lo;
  for (const auto& s : samples) {
    lo = std::min(lo, s.ln_n);
    hi = std::max(hi, s.ln_n);
  }
  if ((hi - lo) / kLn2 < 3.0) throw ValidationError("fit points must span at least three dyadic steps in n");

  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd a(rows, 3);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& s = samples[static_cast<std::size_t>(r)];
    const double ll = std::log(s.ln_n);
    const double l2 = s.ln_n * s.ln_n;
    a(r, 0) = ll / s.ln_n;
    a(r, 1) = ll / l2;
    a(r, 2) = ll * ll / l2;
    b(r) = s.value - fixed_scaling_terms(s.ln_n);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(condition < kMaxCondition)) {
    throw ValidationError("fit design matrix is rank deficient (condition number " + std::to_string(condition) + ")");
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);

  FitResult r;
  r.c1 = c(0);
  r.c2 = c(1);
  r.c3 = c(2);
  r.residual_norm = (a * c - b).norm();
  r.condition_number = condition;
  r.points = samples.size();
  return r;
}

NaiveFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("line fit needs at least two (x, y) pairs");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("line fit needs at least two distinct x values");
  NaiveFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

NaiveFit naive_fit(const std::vector<MeanSample>& samples) {
  if (samples.size() < 3) throw ValidationError("naive fit needs at least 3 points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& s : samples) {
    if (!(s.mean > 0.0) || !(s.n > 0.0)) throw ValidationError("naive fit needs positive n and <L_n>");
    const double ln_n = std::log(s.n);
    x.push_back(ln_n * ln_n);
    y.push_back(-std::log(s.mean));
  }
  return line_fit(x, y);
}

}  // namespace kkldm
