#pragma once

// Synthetic data for the modulated model X_i = mu_i + sigma_i * e_i: the A1-A4
// variance profiles, the B1 (nonlinear AR) and B2 (long linear filter) error
// processes, and their composition. All generators are pure functions of
// their parameters and seed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "snts/keyvalue.hpp"
#include "snts/series.hpp"

namespace snts {

struct SigmaProfile {
  enum class Kind { A1, A2, A3, A4, Constant, Custom };

  Kind kind = Kind::Constant;
  double value = 1.0;          // Constant
  std::vector<double> custom;  // Custom, length must equal n

  static SigmaProfile a1() { return {Kind::A1, 0.0, {}}; }
  static SigmaProfile a2() { return {Kind::A2, 0.0, {}}; }
  static SigmaProfile a3() { return {Kind::A3, 0.0, {}}; }
  static SigmaProfile a4() { return {Kind::A4, 0.0, {}}; }
  static SigmaProfile constant(double v) { return {Kind::Constant, v, {}}; }
  static SigmaProfile from_values(std::vector<double> v) { return {Kind::Custom, 0.0, std::move(v)}; }

  [[nodiscard]] std::string name() const;
  /// Accepts A1..A4, "constant:<v>".
  [[nodiscard]] static SigmaProfile parse(const std::string& text);
};

/// sigma_1..sigma_n for the profile.
///   A1: 0.2 for i <= floor(n/2), 0.6 after
///   A2: 0.2 (1 + cos^2(i / n^{4/5}))
///   A3: 0.2 + 0.1 log(1 + |i - n/2|)
///   A4: 0.3 + phi(i / 60)
[[nodiscard]] std::vector<double> sigma_values(const SigmaProfile& profile, std::size_t n);

struct ErrorModel {
  enum class Kind { IIDGaussian, B1, B2 };

  static constexpr std::size_t kDefaultBurnIn = 1000;

  Kind kind = Kind::IIDGaussian;
  double theta = 0.0;  // B1
  std::size_t burn_in = kDefaultBurnIn;
  double beta = 3.0;                        // B2
  std::optional<std::size_t> truncation{};  // B2; default_truncation(beta) when empty

  static ErrorModel iid() { return {}; }
  static ErrorModel b1(double theta) { return {Kind::B1, theta, kDefaultBurnIn, 3.0, std::nullopt}; }
  static ErrorModel b2(double beta) { return {Kind::B2, 0.0, kDefaultBurnIn, beta, std::nullopt}; }

  [[nodiscard]] std::string name() const;
  /// Accepts "iid", "B1:<theta>", "B2:<beta>".
  [[nodiscard]] static ErrorModel parse(const std::string& text);
};

/// Raw innovation stream epsilon_1, epsilon_2, ... for `seed`; the first
/// `count` values. Every error generator draws its in-sample innovations from
/// the head of this stream.
[[nodiscard]] std::vector<double> innovations(std::uint64_t seed, std::size_t count);

/// eta_i = theta |eta_{i-1}| + sqrt(1-theta^2) eps_i, standardized with
/// E eta = theta sqrt(2/pi) and Var eta = 1 - 2 theta^2 / pi. eta_0 = 0 and
/// `burn_in` steps run on a separate substream before collection.
[[nodiscard]] std::vector<double> gen_b1(std::size_t n, double theta, std::uint64_t seed,
                                         std::size_t burn_in = ErrorModel::kDefaultBurnIn);

/// Smallest J with (J+1)^{-beta} < 1e-10, capped at 1e5.
[[nodiscard]] std::size_t default_truncation(double beta);

/// a_0..a_J proportional to (j+1)^{-beta}, renormalized to unit sum of squares.
[[nodiscard]] std::vector<double> b2_coefficients(double beta, std::size_t truncation);

/// e_i = sum_{j=0..J} a_j eps_{i-j}. In-sample innovations eps_1..eps_n come
/// first in the stream, followed by eps_0, eps_{-1}, ..., eps_{1-J}, so raising
/// J only appends draws.
[[nodiscard]] std::vector<double> gen_b2(std::size_t n, double beta, std::uint64_t seed,
                                         std::optional<std::size_t> truncation = std::nullopt);

[[nodiscard]] std::vector<double> gen_errors(const ErrorModel& model, std::size_t n, std::uint64_t seed);

struct SimModel {
  std::size_t n = 120;
  double mu = 0.0;
  /// Step mean mu_i = mu + lambda 1{i > change_after}.
  double lambda = 0.0;
  std::size_t change_after = 0;
  SigmaProfile sigma = SigmaProfile::constant(1.0);
  ErrorModel error = ErrorModel::iid();
  std::uint64_t seed = 0;

  [[nodiscard]] KeyValueConfig to_config() const;
  [[nodiscard]] static SimModel from_config(const KeyValueConfig& cfg);
};

/// X_i = mu_i + sigma_i e_i.
[[nodiscard]] TimeSeries generate(const SimModel& model);
/// Same as generate() but with precomputed sigma values, for hot loops.
[[nodiscard]] std::vector<double> generate_values(const SimModel& model, const std::vector<double>& sigma);

}  // namespace snts
