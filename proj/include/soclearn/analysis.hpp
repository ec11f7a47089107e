#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "soclearn/errors.hpp"

namespace soclearn {

enum class FitKind { power_law, exponential };

/// Least-squares fit in the model's linearizing space:
///   power_law:    y = a * x^b      (fit of log y on log x)
///   exponential:  y = a * exp(b x) (fit of log y on x)
/// r_squared is the coefficient of determination of that linear regression.
struct FitResult {
  FitKind kind;
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
  bool constant_data = false;  // zero variance in y; r_squared pinned to 1
};

struct Aggregate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t count = 0;
  bool se_defined = false;  // false for a single sample
};

/// Sample mean with standard error (sample stdev / sqrt(n)).
inline Aggregate aggregate(const std::vector<double>& samples) {
  if (samples.empty())
    throw InsufficientDataError("aggregate needs at least one sample");
  Aggregate out;
  out.count = static_cast<std::int64_t>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / static_cast<double>(out.count);
  if (out.count == 1) return out;
  double ss = 0.0;
  for (double v : samples) ss += (v - out.mean) * (v - out.mean);
  const double variance = ss / static_cast<double>(out.count - 1);
  out.se = std::sqrt(variance / static_cast<double>(out.count));
  out.se_defined = true;
  return out;
}

namespace detail {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  bool zero_variance = false;
};

inline LinearFit linear_least_squares(const std::vector<double>& x,
                                      const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw InsufficientDataError("regression needs at least two distinct x");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    // Constant y: the flat line fits perfectly; 0/0 pinned to 1.
    fit.slope = 0.0;
    fit.intercept = my;
    fit.r_squared = 1.0;
    fit.zero_variance = true;
  } else {
    fit.r_squared = (sxy * sxy) / (sxx * syy);
  }
  return fit;
}

inline void check_fit_points(const std::vector<double>& x,
                             const std::vector<double>& y,
                             bool require_positive_x) {
  if (x.size() != y.size())
    throw ConfigError("fit requires equally many x and y values");
  if (x.size() < 3)
    throw InsufficientDataError("fit needs at least 3 points, got " +
                                std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (require_positive_x && !(x[i] > 0.0))
      throw DomainError("power-law fit requires x > 0");
    if (!(y[i] > 0.0)) throw DomainError("fit requires y > 0");
  }
}

}  // namespace detail

inline FitResult fit_power_law(const std::vector<double>& x,
                               const std::vector<double>& y) {
  detail::check_fit_points(x, y, true);
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const auto fit = detail::linear_least_squares(lx, ly);
  return FitResult{FitKind::power_law, std::exp(fit.intercept), fit.slope,
                   fit.r_squared, fit.zero_variance};
}

inline FitResult fit_exponential(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  detail::check_fit_points(x, y, false);
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = std::log(y[i]);
  const auto fit = detail::linear_least_squares(x, ly);
  return FitResult{FitKind::exponential, std::exp(fit.intercept), fit.slope,
                   fit.r_squared, fit.zero_variance};
}

/// Exponential moving average: out[0] = in[0],
/// out[i] = alpha * in[i] + (1 - alpha) * out[i-1].
inline std::vector<double> ema(const std::vector<double>& series,
                               double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("smoothing factor must lie in (0, 1]");
  if (series.empty())
    throw InsufficientDataError("ema needs a nonempty series");
  std::vector<double> out(series.size());
  out[0] = series[0];
  for (std::size_t i = 1; i < series.size(); ++i)
    out[i] = alpha * series[i] + (1.0 - alpha) * out[i - 1];
  return out;
}

/// Two-sided exponential-kernel smoother (zero-phase EMA):
///   out[i] = sum_j (1-alpha)^|i-j| in[j] / sum_j (1-alpha)^|i-j|.
/// Unlike the one-pass EMA it has no lag and no cold-start transient, so
/// locating the maximum of a noisy series through it is unbiased; used by
/// the best-response estimator.
inline std::vector<double> symmetric_ema(const std::vector<double>& series,
                                         double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw ConfigError("smoothing factor must lie in (0, 1]");
  if (series.empty())
    throw InsufficientDataError("symmetric_ema needs a nonempty series");
  const std::size_t n = series.size();
  const double keep = 1.0 - alpha;
  std::vector<double> forward_num(n), forward_den(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num = num * keep + series[i];
    den = den * keep + 1.0;
    forward_num[i] = num;
    forward_den[i] = den;
  }
  std::vector<double> out(n);
  num = 0.0;
  den = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    num = num * keep + series[i];
    den = den * keep + 1.0;
    // forward and backward both count series[i]; subtract one copy
    out[i] = (forward_num[i] + num - series[i]) / (forward_den[i] + den - 1.0);
  }
  return out;
}

}  // namespace soclearn
