#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kkldm {

/// 1 / (2 ln 2) = 0.7213...: the conjectured exponent c in <L_n> ~ n^{-c ln n},
/// and the lower bound on both exponents a, b of the known corridor
/// n^{-b ln n} <= <L_n> <= n^{-a ln n}.
double scaling_constant();

/// The fixed (non-fitted) part of the scaling form:
/// 1/(2 ln 2) + A / ln n + B / ln^2 n.
double fixed_scaling_terms(double ln_n);
/// A = (ln ln 2 + 1) / ln 2 + 3/2
double fixed_coefficient_inv_ln();
/// B = (ln 2 + 4 ln ln 2) / 8 - ln^2 ln 2 / (2 ln 2)
double fixed_coefficient_inv_ln2();

enum class ModelTag { simulation, rate, fibonacci, series };

std::string to_string(ModelTag tag);
ModelTag model_tag_from_string(const std::string& name);

/// A model value Z(n) kept in log form. For the simulation model Z = 1 / <n L_n>.
struct ScalingPoint {
  double ln_n = 0.0;
  double ln_z = 0.0;
  ModelTag model = ModelTag::series;

  static ScalingPoint from_raw(double n, double z, ModelTag model);
  static ScalingPoint from_log(double ln_n, double ln_z, ModelTag model);
};

/// (ln Z + ln(n+1)) / ln^2 n. Throws ValidationError for n < 3.
double scaled_value(const ScalingPoint& point);

/// Fitted log-log corrections c1 ln ln n / ln n + c2 ln ln n / ln^2 n + c3 ln^2 ln n / ln^2 n.
struct FitResult {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double residual_norm = 0.0;
  double condition_number = 0.0;
  std::size_t points = 0;
};

/// (ln n, scaled value) pairs.
struct ScaledSample {
  double ln_n = 0.0;
  double value = 0.0;
};

/// Unweighted least squares on the three log-log basis functions after
/// subtracting the fixed terms. Needs >= 6 points spanning at least a factor
/// 2^3 in n; throws ValidationError otherwise, and when the design matrix is
/// numerically rank deficient.
FitResult fit_loglog(const std::vector<ScaledSample>& samples);

/// Scaling form evaluated with given corrections.
double scaling_form(double ln_n, double c1, double c2, double c3);

struct NaiveFit {
  double intercept = 0.0;
  double slope = 0.0;
};

/// (n, <L_n>) pairs.
struct MeanSample {
  double n = 0.0;
  double mean = 0.0;
};

/// Ordinary least squares of -ln <L_n> against ln^2 n. Needs >= 3 points.
NaiveFit naive_fit(const std::vector<MeanSample>& samples);
/// Same regression on raw (x, y) pairs with x = ln^2 n, y = -ln <L_n>; needs >= 2 points.
NaiveFit line_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kkldm
