#include "snts/lrv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snts/error.hpp"
#include "snts/parallel.hpp"
#include "snts/random.hpp"

namespace snts {

namespace {

double block_mean(const double* p, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += p[i];
  return s / static_cast<double>(k);
}

double block_css(const double* p, std::size_t k, double m) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += (p[i] - m) * (p[i] - m);
  return s;
}

}  // namespace

double LongRunEstimate::tau_hat() const noexcept { return std::sqrt(tau_sq_hat); }

const char* to_string(LongRunEstimate::Method m) noexcept {
  switch (m) {
    case LongRunEstimate::Method::SelfNormalized: return "self-normalized";
    case LongRunEstimate::Method::Stationary: return "stationary";
    case LongRunEstimate::Method::Regression: return "regression";
  }
  return "?";
}

LongRunEstimate lrv_selfnorm(std::span<const double> x, std::size_t block_length) {
  const BlockPartition part = partition(x.size(), block_length);
  const double overall = mean_of(x);
  const double k = static_cast<double>(block_length);
  LongRunEstimate est;
  est.method = LongRunEstimate::Method::SelfNormalized;
  est.block_length = block_length;
  est.block_count = part.block_count;
  est.d_values.reserve(part.block_count);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < part.block_count; ++j) {
    const double* p = x.data() + j * block_length;
    const double m = block_mean(p, block_length);
    const double v = std::sqrt(block_css(p, block_length, m));
    if (!(v > 0.0)) {
      throw DegenerateData("degenerate block " + std::to_string(j + 1) + " (indices " +
                           std::to_string(j * block_length + 1) + ".." + std::to_string((j + 1) * block_length) +
                           "): zero within-block variation");
    }
    const double d = k * (m - overall) / v;
    est.d_values.push_back(d);
    sum_sq += d * d;
  }
  est.tau_sq_hat = sum_sq / static_cast<double>(part.block_count);
  return est;
}

LongRunEstimate lrv_selfnorm(const TimeSeries& x, std::size_t block_length) {
  return lrv_selfnorm(x.values(), block_length);
}

std::optional<double> lrv_selfnorm_value(std::span<const double> x, std::size_t block_length) {
  const BlockPartition part = partition(x.size(), block_length);
  const double overall = mean_of(x);
  const double k = static_cast<double>(block_length);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < part.block_count; ++j) {
    const double* p = x.data() + j * block_length;
    const double m = block_mean(p, block_length);
    const double css = block_css(p, block_length, m);
    if (!(css > 0.0)) return std::nullopt;
    const double dev = m - overall;
    sum_sq += k * k * dev * dev / css;
  }
  return sum_sq / static_cast<double>(part.block_count);
}

LongRunEstimate lrv_stationary(std::span<const double> x, std::size_t block_length) {
  const BlockPartition part = partition(x.size(), block_length);
  const double overall = mean_of(x);
  const double root_k = std::sqrt(static_cast<double>(block_length));
  LongRunEstimate est;
  est.method = LongRunEstimate::Method::Stationary;
  est.block_length = block_length;
  est.block_count = part.block_count;
  est.d_values.reserve(part.block_count);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < part.block_count; ++j) {
    const double d = root_k * (block_mean(x.data() + j * block_length, block_length) - overall);
    est.d_values.push_back(d);
    sum_sq += d * d;
  }
  est.tau_sq_hat = sum_sq / static_cast<double>(part.block_count);
  return est;
}

LongRunEstimate lrv_stationary(const TimeSeries& x, std::size_t block_length) {
  return lrv_stationary(x.values(), block_length);
}

double lrv_stationary_value(std::span<const double> x, std::size_t block_length) {
  const BlockPartition part = partition(x.size(), block_length);
  const double overall = mean_of(x);
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < part.block_count; ++j) {
    const double dev = block_mean(x.data() + j * block_length, block_length) - overall;
    sum_sq += dev * dev;
  }
  return static_cast<double>(block_length) * sum_sq / static_cast<double>(part.block_count);
}

std::vector<std::size_t> default_block_grid(std::size_t n) {
  std::vector<std::size_t> grid;
  for (std::size_t k = 4; k <= n / 4; ++k) {
    if (n / k >= 4) grid.push_back(k);
  }
  return grid;
}

BlockLengthSelection select_block_length(std::size_t n, std::vector<std::size_t> grid, std::size_t reps,
                                         std::uint64_t seed, unsigned threads) {
  if (grid.empty()) throw InvalidArgument("block-length grid is empty");
  if (reps < 1) throw InvalidArgument("block-length selection needs reps >= 1");

  BlockLengthSelection sel;
  sel.replications = reps;
  std::vector<std::size_t> feasible;
  for (std::size_t k : grid) {
    BlockLengthSelection::Entry entry;
    entry.block_length = k;
    if (k < 2 || n / k < 2) {
      entry.feasible = false;
      entry.mse = std::numeric_limits<double>::quiet_NaN();
      entry.note = k < 2 ? "block length below 2 has no within-block variation" : "insufficient blocks";
    } else {
      feasible.push_back(k);
    }
    sel.table.push_back(entry);
  }
  if (feasible.empty()) throw InfeasibleParameters("no feasible block length in grid for n=" + std::to_string(n));

  // squared errors per (replicate, feasible k); summed in replicate order afterwards
  std::vector<double> sq_err(reps * feasible.size());
  parallel_for(reps, threads, [&](std::size_t r) {
    auto eng = make_engine(derive_seed(seed, r));
    std::vector<double> z(n);
    fill_standard_normal(eng, z);
    for (std::size_t c = 0; c < feasible.size(); ++c) {
      const auto tau_sq = lrv_selfnorm_value(z, feasible[c]);
      // continuous data: a zero-variance block has probability zero
      const double tau = tau_sq ? std::sqrt(*tau_sq) : 0.0;
      sq_err[r * feasible.size() + c] = (tau - 1.0) * (tau - 1.0);
    }
  });

  double best_mse = std::numeric_limits<double>::infinity();
  std::size_t c = 0;
  for (auto& entry : sel.table) {
    if (!entry.feasible) continue;
    double s = 0.0;
    for (std::size_t r = 0; r < reps; ++r) s += sq_err[r * feasible.size() + c];
    entry.mse = s / static_cast<double>(reps);
    if (entry.mse < best_mse || (entry.mse == best_mse && entry.block_length < sel.best)) {
      best_mse = entry.mse;
      sel.best = entry.block_length;
    }
    ++c;
  }
  return sel;
}

}  // namespace snts
