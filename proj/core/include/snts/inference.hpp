#pragma once

// Confidence intervals for the mean of X_i = mu + sigma_i e_i.
//
//   SN   self-normalized CLT: n (mean - mu) / V_n ~ N(0, tau^2)
//   WB   wild bootstrap of the self-normalized pivot
//   ST   stationary CLT with the non-normalized block estimate of tau^2
//   BB   non-overlapping block bootstrap of sqrt(n) (mean - mu)
//   SBB  studentized block bootstrap
//
// Bootstrap replicate b draws from its own stream derive_seed(seed, b), so
// every distribution is identical for any worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snts/random.hpp"
#include "snts/series.hpp"

namespace snts {

enum class IntervalMethod { SN, WB, ST, BB, SBB };

[[nodiscard]] const char* to_string(IntervalMethod m) noexcept;
[[nodiscard]] IntervalMethod parse_interval_method(const std::string& text);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  double point = 0.0;
  IntervalMethod method = IntervalMethod::SN;
  double tau_hat = 0.0;
  std::size_t block_length = 0;

  [[nodiscard]] bool covers(double value) const noexcept { return lower <= value && value <= upper; }
  [[nodiscard]] double width() const noexcept { return upper - lower; }
};

struct MultiplierLaw {
  enum class Kind { Rademacher, StandardGaussian };
  Kind kind = Kind::Rademacher;

  void fill(Engine& eng, std::span<double> out) const;
  [[nodiscard]] static MultiplierLaw parse(const std::string& text);
  [[nodiscard]] const char* name() const noexcept;
};

/// Writes one replicate's multipliers. Lets tests plug in degenerate laws.
using MultiplierSource = std::function<void(Engine&, std::span<double>)>;

struct BootstrapDistribution {
  std::vector<double> values;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  /// Replicates that were rejected as degenerate and redrawn.
  std::size_t redraws = 0;
};

struct BootstrapOptions {
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Linear interpolation between order statistics (R type 7). p in [0,1].
[[nodiscard]] double empirical_quantile(std::vector<double> values, double p);

// --- asymptotic intervals ---------------------------------------------------

/// mean +- z_{alpha/2} tau_hat V_n / n; alpha in (0,1], alpha = 1 collapses to
/// the point.
[[nodiscard]] ConfidenceInterval sn_ci(const TimeSeries& x, double alpha, std::size_t block_length);

/// mean +- z_{alpha/2} tau_st / sqrt(n), with tau_st^2 from lrv_stationary.
[[nodiscard]] ConfidenceInterval st_ci(const TimeSeries& x, double alpha, std::size_t block_length);

// --- linear combinations over periods ---------------------------------------

struct CombinationSpec {
  std::vector<TimeSeries> segments;
  std::vector<double> weights;

  void validate(std::size_t block_length) const;
  [[nodiscard]] double point() const;
  /// Lambda_n^2 = sum_j beta_j^2 / n_j^2 * css_j.
  [[nodiscard]] double lambda() const;
  /// Per-segment centered residuals, concatenated in segment order.
  [[nodiscard]] std::vector<double> pooled_residuals() const;
};

/// point +- z_{alpha/2} tau_hat Lambda_n with tau_hat from the pooled residuals.
[[nodiscard]] ConfidenceInterval combo_ci(const CombinationSpec& spec, double alpha, std::size_t block_length);
/// Same with a caller-supplied tau_hat.
[[nodiscard]] ConfidenceInterval combo_interval(const CombinationSpec& spec, double alpha, double tau_hat);
/// Wild-bootstrap version: quantiles of sum_j beta_j mean_j(xi) / (tau^b Lambda^b)
/// replace the normal quantiles. With one segment and unit weight this
/// agrees with wb_ci up to rounding.
[[nodiscard]] ConfidenceInterval combo_wb_ci(const CombinationSpec& spec, double alpha, std::size_t block_length,
                                             const MultiplierLaw& law, const BootstrapOptions& opts);

// --- wild bootstrap ----------------------------------------------------------

/// xi_i = residual_i * alpha_i.
[[nodiscard]] std::vector<double> wild_resample(std::span<const double> residuals, std::span<const double> multipliers);

/// sum(xi) / (tau^b sqrt(sum (xi - mean xi)^2)); nullopt when xi is degenerate
/// for the block estimator.
[[nodiscard]] std::optional<double> wild_statistic(std::span<const double> xi, std::size_t block_length);

/// Bootstrap distribution of n (mean - mu) / (tau V_n) from residuals
/// X_i - mean. Degenerate replicates are redrawn; more than 10 B total draws
/// throws DegenerateData.
[[nodiscard]] BootstrapDistribution wild_bootstrap_mean(const TimeSeries& x, std::size_t block_length,
                                                        const MultiplierLaw& law, const BootstrapOptions& opts);
[[nodiscard]] BootstrapDistribution wild_bootstrap_mean(const TimeSeries& x, std::size_t block_length,
                                                        const MultiplierSource& source, const BootstrapOptions& opts);

/// [mean - q_{1-a/2} tau V_n / n, mean - q_{a/2} tau V_n / n] with q from
/// wild_bootstrap_mean and tau from the original series.
[[nodiscard]] ConfidenceInterval wb_ci(const TimeSeries& x, double alpha, std::size_t block_length,
                                       const MultiplierLaw& law, const BootstrapOptions& opts);

// --- block bootstrap ---------------------------------------------------------

/// Concatenates the chosen blocks (0-based block numbers) of `x`.
[[nodiscard]] std::vector<double> block_resample(std::span<const double> x, const BlockPartition& part,
                                                 std::span<const std::size_t> choices);

/// Distribution of Xi = sqrt(n') (mean^b - E* mean^b), n' = k l, E* the mean of
/// the block-covered data; studentized divides by sqrt(lrv_stationary) of the
/// resample and redraws when that is zero. The plain version also accepts a
/// single block (l = 1).
[[nodiscard]] BootstrapDistribution block_bootstrap_mean(const TimeSeries& x, std::size_t block_length,
                                                         bool studentized, const BootstrapOptions& opts);

/// Plain: [mean - q_{1-a/2}/sqrt(n), mean - q_{a/2}/sqrt(n)].
/// Studentized: the same scaled by tau_st of the original series.
[[nodiscard]] ConfidenceInterval bb_ci(const TimeSeries& x, double alpha, std::size_t block_length, bool studentized,
                                       const BootstrapOptions& opts);

/// Dispatches on method; bootstrap methods use `law` (WB) and `opts`.
[[nodiscard]] ConfidenceInterval mean_ci(IntervalMethod method, const TimeSeries& x, double alpha,
                                         std::size_t block_length, const MultiplierLaw& law,
                                         const BootstrapOptions& opts);

}  // namespace snts
