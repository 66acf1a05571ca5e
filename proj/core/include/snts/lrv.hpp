#pragma once

// Blockwise long-run variance estimation.
//
// The self-normalized estimator studentizes each block's deviation from the
// overall mean by the block's own spread,
//
//     D_j = k [mean(I_j) - mean(X)] / V(j),   V(j)^2 = sum_{i in I_j} (X_i - mean(I_j))^2,
//
// so the unknown local scale sigma_i cancels inside every block and
// mean(D_j^2) estimates the long-run variance of the unscaled errors. The
// stationary variant uses D_j = sqrt(k) [mean(I_j) - mean(X)] and therefore
// estimates the long-run variance of sigma_i e_i as if it were stationary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snts/series.hpp"

namespace snts {

struct LongRunEstimate {
  enum class Method { SelfNormalized, Stationary, Regression };

  double tau_sq_hat = 0.0;
  std::size_t block_length = 0;
  std::size_t block_count = 0;
  std::vector<double> d_values;
  Method method = Method::SelfNormalized;

  [[nodiscard]] double tau_hat() const noexcept;
};

[[nodiscard]] const char* to_string(LongRunEstimate::Method m) noexcept;

/// Throws DegenerateData naming the first block with V(j) = 0.
[[nodiscard]] LongRunEstimate lrv_selfnorm(const TimeSeries& x, std::size_t block_length);
[[nodiscard]] LongRunEstimate lrv_selfnorm(std::span<const double> x, std::size_t block_length);

/// Allocation-free tau^2 only; returns nullopt on a degenerate block. Used in
/// bootstrap inner loops.
[[nodiscard]] std::optional<double> lrv_selfnorm_value(std::span<const double> x, std::size_t block_length);

[[nodiscard]] LongRunEstimate lrv_stationary(const TimeSeries& x, std::size_t block_length);
[[nodiscard]] LongRunEstimate lrv_stationary(std::span<const double> x, std::size_t block_length);
[[nodiscard]] double lrv_stationary_value(std::span<const double> x, std::size_t block_length);

/// Default search grid {4, ..., floor(n/4)}; every entry leaves >= 4 blocks.
[[nodiscard]] std::vector<std::size_t> default_block_grid(std::size_t n);

struct BlockLengthSelection {
  struct Entry {
    std::size_t block_length = 0;
    bool feasible = true;
    double mse = 0.0;
    std::string note;
  };

  std::size_t best = 0;
  std::vector<Entry> table;
  std::size_t replications = 0;
};

/// Simulates `reps` i.i.d. N(0,1) samples of length n and picks the block
/// length minimizing the empirical mean of (tau_hat - 1)^2 over `grid` (ties
/// go to the smaller k). Replicate r uses the same sample for every k.
/// Infeasible grid entries are reported, not fatal, unless all are.
[[nodiscard]] BlockLengthSelection select_block_length(std::size_t n, std::vector<std::size_t> grid,
                                                       std::size_t reps, std::uint64_t seed,
                                                       unsigned threads = 1);

}  // namespace snts
