#pragma once

#include <atomic>
#include <optional>
#include <string>

#include "snts/error.hpp"
#include "snts/inference.hpp"
#include "snts/parallel.hpp"
#include "snts/random.hpp"

namespace snts::detail {

/// Runs B replicates of `draw(engine) -> optional<double>`. A nullopt draw is
/// a degenerate replicate and is redrawn from the next attempt stream of the
/// same replicate; the total number of draws may not exceed 10 B.
template <typename Draw>
BootstrapDistribution collect_bootstrap(const BootstrapOptions& opts, const char* what, Draw&& draw) {
  if (opts.replicates < 1) throw InvalidArgument(std::string(what) + ": bootstrap needs B >= 1");
  const std::size_t B = opts.replicates;
  const std::size_t cap = 10 * B;
  BootstrapDistribution dist;
  dist.replicates = B;
  dist.seed = opts.seed;
  dist.values.assign(B, 0.0);
  std::atomic<std::size_t> total_draws{0};

  parallel_for(B, opts.threads, [&](std::size_t b) {
    const std::uint64_t rep_seed = derive_seed(opts.seed, b);
    for (std::size_t attempt = 0;; ++attempt) {
      if (total_draws.fetch_add(1, std::memory_order_relaxed) + 1 > cap) {
        throw DegenerateData(std::string(what) + ": more than " + std::to_string(cap) +
                             " bootstrap draws needed; resamples are degenerate");
      }
      auto eng = make_engine(attempt == 0 ? rep_seed : derive_seed(rep_seed, attempt));
      if (const auto v = draw(eng)) {
        dist.values[b] = *v;
        return;
      }
    }
  });
  dist.redraws = total_draws.load() - B;
  return dist;
}

/// p-value with the add-one convention: (1 + #{T^b >= observed}) / (B + 1).
inline double upper_tail_p_value(const BootstrapDistribution& dist, double observed) {
  std::size_t count = 0;
  for (double v : dist.values) count += v >= observed ? 1 : 0;
  return (1.0 + static_cast<double>(count)) / (static_cast<double>(dist.values.size()) + 1.0);
}

}  // namespace snts::detail
