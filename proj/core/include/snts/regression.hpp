#pragma once

#include <cstddef>
#include <vector>

#include "snts/inference.hpp"
#include "snts/lrv.hpp"
#include "snts/series.hpp"

namespace snts {

/// Least-squares fit of X_i = b0 + b1 (i/n) + sigma_i e_i.
///
/// The coefficient errors are linear in the errors with weights (2n-3i+1)
/// for b0 and (2i-n-1) for b1, so each has a self-normalized CLT:
///   n^2 (b0_hat - b0) / (2 V_{n,0}) ~ N(0, tau^2)
///   n^2 (b1_hat - b1) / (6 V_{n,1}) ~ N(0, tau^2)
/// with V_{n,0}^2 = sum (2n-3i+1)^2 r_i^2 and V_{n,1}^2 = sum (2i-n-1)^2 r_i^2.
/// These hold under conditions on the weighted sigma_i that cannot be checked
/// from data; they are assumed.
struct TrendFit {
  double beta0_hat = 0.0;
  double beta1_hat = 0.0;
  std::vector<double> residuals;
  double v_n0_sq = 0.0;
  double v_n1_sq = 0.0;
  /// Centered sum of squares of the data, for the exact-fit check.
  double data_css = 0.0;
};

enum class TrendCoefficient { Intercept, Slope };

[[nodiscard]] TrendFit fit_trend(const TimeSeries& x);

/// tau^2 from blocks of residuals, D_j = sum_{I_j} r_i / sqrt(sum_{I_j} r_i^2)
/// (raw, not block-centered, sum of squares).
[[nodiscard]] LongRunEstimate regression_lrv(const TrendFit& fit, std::size_t block_length);
[[nodiscard]] LongRunEstimate regression_lrv(std::span<const double> residuals, std::size_t block_length);

/// b_hat +- z_{alpha/2} tau_hat 2 V_{n,0} / n^2 (intercept) or 6 V_{n,1} / n^2
/// (slope). Throws DegenerateData when the fit is exact.
[[nodiscard]] ConfidenceInterval trend_ci(const TrendFit& fit, TrendCoefficient which, double alpha,
                                          std::size_t block_length);

}  // namespace snts
