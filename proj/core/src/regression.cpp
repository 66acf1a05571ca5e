#include "snts/regression.hpp"

#include <cmath>

#include "snts/error.hpp"
#include "snts/normal.hpp"

namespace snts {

TrendFit fit_trend(const TimeSeries& x) {
  x.require_length(2, "trend fit");
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);
  double sum_i = 0.0, sum_ii = 0.0, sum_x = 0.0, sum_ix = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double v = x.values()[i - 1];
    sum_i += di;
    sum_ii += di * di;
    sum_x += v;
    sum_ix += di * v;
  }
  // the numerator carries the extra factor n that rescales the slope to the
  // i/n regressor
  const double denom = sum_ii - sum_i * sum_i / dn;
  TrendFit fit;
  fit.beta1_hat = (dn * sum_ix - sum_i * sum_x) / denom;
  fit.beta0_hat = sum_x / dn - fit.beta1_hat * (dn + 1.0) / (2.0 * dn);

  fit.residuals.resize(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double r = x.values()[i - 1] - fit.beta0_hat - fit.beta1_hat * di / dn;
    fit.residuals[i - 1] = r;
    const double w0 = 2.0 * dn - 3.0 * di + 1.0;
    const double w1 = 2.0 * di - dn - 1.0;
    fit.v_n0_sq += w0 * w0 * r * r;
    fit.v_n1_sq += w1 * w1 * r * r;
  }
  fit.data_css = css_of(x.values());
  return fit;
}

LongRunEstimate regression_lrv(std::span<const double> residuals, std::size_t block_length) {
  const BlockPartition part = partition(residuals.size(), block_length);
  LongRunEstimate est;
  est.method = LongRunEstimate::Method::Regression;
  est.block_length = block_length;
  est.block_count = part.block_count;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < part.block_count; ++j) {
    double s = 0.0, ss = 0.0;
    for (std::size_t i = j * block_length; i < (j + 1) * block_length; ++i) {
      s += residuals[i];
      ss += residuals[i] * residuals[i];
    }
    if (!(ss > 0.0)) {
      throw DegenerateData("degenerate block " + std::to_string(j + 1) + ": residuals are all zero");
    }
    const double d = s / std::sqrt(ss);
    est.d_values.push_back(d);
    sum_sq += d * d;
  }
  est.tau_sq_hat = sum_sq / static_cast<double>(part.block_count);
  return est;
}

LongRunEstimate regression_lrv(const TrendFit& fit, std::size_t block_length) {
  return regression_lrv(fit.residuals, block_length);
}

ConfidenceInterval trend_ci(const TrendFit& fit, TrendCoefficient which, double alpha, std::size_t block_length) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1]");
  double rss = 0.0;
  for (double r : fit.residuals) rss += r * r;
  if (fit.data_css == 0.0 || rss <= 1e-12 * fit.data_css) {
    throw DegenerateData("trend fits the data exactly; interval width is undefined");
  }
  const double n = static_cast<double>(fit.residuals.size());
  const double tau = regression_lrv(fit, block_length).tau_hat();
  ConfidenceInterval ci;
  ci.level = 1.0 - alpha;
  ci.method = IntervalMethod::SN;
  ci.tau_hat = tau;
  ci.block_length = block_length;
  double scale;
  if (which == TrendCoefficient::Intercept) {
    ci.point = fit.beta0_hat;
    scale = 2.0 * std::sqrt(fit.v_n0_sq) / (n * n);
  } else {
    ci.point = fit.beta1_hat;
    scale = 6.0 * std::sqrt(fit.v_n1_sq) / (n * n);
  }
  const double half = two_sided_critical(alpha) * tau * scale;
  ci.lower = ci.point - half;
  ci.upper = ci.point + half;
  return ci;
}

}  // namespace snts
