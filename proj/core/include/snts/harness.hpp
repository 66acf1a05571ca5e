#pragma once

// Monte Carlo experiments over a grid of variance profiles x error models x
// block lengths:
//
//   coverage  fraction of intervals (SN, WB, ST, BB, SBB) covering mu = 0
//   size      rejection rate of the bootstrap-calibrated tests under the null
//   power     size-adjusted power: critical values from simulated null
//             statistics, then rejection rates along a grid of mean shifts
//
// Seeds: a data cell (profile, error) gets derive_seed(master, label);
// replicate r gets derive_seed(cell, r) and every method / block length
// sees the same replicate data. Bootstrap streams hang off the replicate
// seed. Results are identical for any thread count.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snts/keyvalue.hpp"
#include "snts/simgen.hpp"

namespace snts {

struct ExperimentSpec {
  enum class Kind { Coverage, Size, Power };

  Kind kind = Kind::Coverage;
  std::size_t n = 120;
  std::vector<SigmaProfile> sigma_profiles;
  std::vector<ErrorModel> error_models;
  std::vector<std::size_t> block_lengths;
  /// Coverage: sn, wb, st, bb, sbb. Size/power: sn, t1, t2.
  std::vector<std::string> methods;
  std::size_t replications = 500;
  std::size_t bootstrap_samples = 500;
  /// Significance level; coverage uses intervals of level 1 - alpha.
  double alpha = 0.05;
  double trim = 0.1;
  std::vector<double> lambda_grid;
  std::size_t change_after = 40;
  std::size_t calibration_reps = 2000;
  std::string multiplier = "rademacher";
  std::uint64_t master_seed = 1;
  unsigned threads = 1;

  /// Throws InvalidArgument when the spec is inconsistent.
  void validate() const;
  [[nodiscard]] KeyValueConfig to_config() const;
  /// Keys: kind, n, profiles, errors, k, methods, reps, boot, alpha, trim,
  /// lambda, change_after, calibration_reps, multiplier, seed, threads.
  [[nodiscard]] static ExperimentSpec from_config(const KeyValueConfig& cfg);
};

[[nodiscard]] const char* to_string(ExperimentSpec::Kind k) noexcept;
[[nodiscard]] ExperimentSpec::Kind parse_experiment_kind(const std::string& text);

struct ExperimentCell {
  std::string profile;
  std::string error;
  std::size_t block_length = 0;
  std::string method;
  std::optional<double> lambda;
  double rate = 0.0;
  /// sqrt(rate (1 - rate) / R).
  double standard_error = 0.0;
  std::size_t replications = 0;
  /// Replicates where the method threw (degenerate data); counted as
  /// non-coverage / non-rejection.
  std::size_t failures = 0;
  /// Power only: calibrated critical value.
  std::optional<double> critical_value;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ExperimentCell> cells;
  double wall_seconds = 0.0;

  [[nodiscard]] const ExperimentCell* find(const std::string& profile, const std::string& error,
                                           std::size_t block_length, const std::string& method,
                                           std::optional<double> lambda = std::nullopt) const;
  /// Long-form CSV, one row per cell.
  [[nodiscard]] std::string to_csv() const;
  /// Percentages pivoted with methods as columns.
  [[nodiscard]] std::string to_table() const;
};

[[nodiscard]] ExperimentResult run_coverage(const ExperimentSpec& spec);
[[nodiscard]] ExperimentResult run_size(const ExperimentSpec& spec);
[[nodiscard]] ExperimentResult run_power(const ExperimentSpec& spec);
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec);

[[nodiscard]] double binomial_se(double rate, std::size_t replications) noexcept;

}  // namespace snts
