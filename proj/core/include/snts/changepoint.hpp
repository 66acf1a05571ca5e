#pragma once

// CUSUM change-point tests for a single mean change.
//
//   S_X(j) = (1 - j/n) sum_{i<=j} X_i - (j/n) sum_{i>j} X_i
//   T1     = max_j |S_X(j)| / (tau sqrt(j (1 - j/n)))
//   T2     = max_j |S_X(j)| / tau
//   T_SN   = max_j |T_n(j)| / tau,
//            T_n(j) = S_X(j) / sqrt((1-j/n)^2 Vpre_j^2 + (j/n)^2 Vpost_j^2)
//
// with j over the trimmed range [ceil(c n), floor((1-c) n)]. T_SN is
// calibrated by the wild bootstrap, T1/T2 by the block bootstrap.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snts/inference.hpp"
#include "snts/series.hpp"

namespace snts {

inline constexpr double kDefaultTrim = 0.1;

enum class CusumTest { SN, T1, T2 };

[[nodiscard]] const char* to_string(CusumTest t) noexcept;
[[nodiscard]] CusumTest parse_cusum_test(const std::string& text);

/// [ceil(c n), floor((1-c) n)] clipped to 1..n-1. Throws InvalidArgument for c
/// outside (0, 1/2) and InfeasibleParameters when the range is empty.
[[nodiscard]] IndexRange trimmed_range(std::size_t n, double c);

struct CusumScan {
  double trim = kDefaultTrim;
  IndexRange range;
  /// values[j - range.first] for j in range. Signed T_n(j) for the
  /// self-normalized scan, nonnegative scaled |S_X(j)| for T1/T2.
  std::vector<double> values;
  double max_value = 0.0;  // max |value|
  std::size_t j_hat = 0;   // smallest argmax

  [[nodiscard]] double at(std::size_t j) const;
};

/// S_X(j) for 1 <= j <= n-1.
[[nodiscard]] double sx(const TimeSeries& x, std::size_t j);

[[nodiscard]] CusumScan classical_scan(const TimeSeries& x, double c, double tau_hat, CusumTest variant);
[[nodiscard]] CusumScan classical_scan(std::span<const double> x, double c, double tau_hat, CusumTest variant);

/// Unscaled T_n(j). Throws DegenerateData("degenerate scan at j") on a zero
/// denominator.
[[nodiscard]] CusumScan sn_scan(const TimeSeries& x, double c);

struct ChangePointReport {
  CusumTest test = CusumTest::SN;
  double statistic = 0.0;
  std::size_t j_hat = 0;
  double p_value = 1.0;
  double tau_hat = 0.0;
  std::size_t block_length = 0;
  double trim = kDefaultTrim;
  CusumScan scan;
  BootstrapDistribution bootstrap;
};

/// Observed self-normalized statistic without calibration: split at the scan
/// argmax, center both sides, estimate tau from the pooled residuals.
struct SnStatistic {
  double statistic = 0.0;
  std::size_t j_hat = 0;
  double tau_hat = 0.0;
  std::vector<double> residuals;
};
[[nodiscard]] SnStatistic sn_statistic(const TimeSeries& x, double c, std::size_t block_length);

/// Allocation-light T_SN for simulation loops; nullopt when degenerate.
[[nodiscard]] std::optional<double> sn_statistic_value(std::span<const double> x, double c, std::size_t block_length);

/// T1 or T2 with tau from lrv_stationary of the centered data; 0 for a
/// constant series; nullopt when tau is zero on a non-constant series.
[[nodiscard]] std::optional<double> classical_statistic_value(std::span<const double> x, double c,
                                                              std::size_t block_length, CusumTest variant);

struct ChangePointOptions {
  double trim = kDefaultTrim;
  std::size_t block_length = 10;
  MultiplierLaw law{};
  BootstrapOptions bootstrap{};
};

/// Self-normalized CUSUM test calibrated by the wild bootstrap; each
/// replicate reruns split, centering and tau estimation on xi = eps * alpha.
[[nodiscard]] ChangePointReport sn_test(const TimeSeries& x, const ChangePointOptions& opts);

/// T1/T2 calibrated by the block bootstrap of the globally centered series.
[[nodiscard]] ChangePointReport classical_test(const TimeSeries& x, CusumTest variant, const ChangePointOptions& opts);

/// Tests for a change in variance by running sn_test on (X_i - mean)^2.
[[nodiscard]] ChangePointReport variance_change_test(const TimeSeries& x, const ChangePointOptions& opts);

[[nodiscard]] ChangePointReport run_changepoint_test(CusumTest test, const TimeSeries& x, const ChangePointOptions& opts);

}  // namespace snts
