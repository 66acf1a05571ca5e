#include "snts/inference.hpp"

#include <algorithm>
#include <cmath>

#include "bootstrap_detail.hpp"
#include "snts/error.hpp"
#include "snts/lrv.hpp"
#include "snts/normal.hpp"

namespace snts {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0,1], got " + std::to_string(alpha));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

double full_scale(const TimeSeries& x) {
  const double v = std::sqrt(css_of(x.values()));
  if (!(v > 0.0)) throw DegenerateData("series is constant: V_n = 0");
  return v;
}

/// Interval from the quantiles of a bootstrap root R ~ (point - theta) / scale.
ConfidenceInterval invert_root(const BootstrapDistribution& dist, double alpha, double point, double scale) {
  ConfidenceInterval ci;
  ci.level = 1.0 - alpha;
  ci.point = point;
  const double q_hi = empirical_quantile(dist.values, 1.0 - alpha / 2.0);
  const double q_lo = empirical_quantile(dist.values, alpha / 2.0);
  ci.lower = point - q_hi * scale;
  ci.upper = point - q_lo * scale;
  return ci;
}

}  // namespace

const char* to_string(IntervalMethod m) noexcept {
  switch (m) {
    case IntervalMethod::SN: return "sn";
    case IntervalMethod::WB: return "wb";
    case IntervalMethod::ST: return "st";
    case IntervalMethod::BB: return "bb";
    case IntervalMethod::SBB: return "sbb";
  }
  return "?";
}

IntervalMethod parse_interval_method(const std::string& text) {
  const std::string t = lower(text);
  if (t == "sn") return IntervalMethod::SN;
  if (t == "wb") return IntervalMethod::WB;
  if (t == "st") return IntervalMethod::ST;
  if (t == "bb") return IntervalMethod::BB;
  if (t == "sbb") return IntervalMethod::SBB;
  throw InvalidArgument("unknown interval method '" + text + "' (expected sn|wb|st|bb|sbb)");
}

void MultiplierLaw::fill(Engine& eng, std::span<double> out) const {
  if (kind == Kind::Rademacher) {
    fill_rademacher(eng, out);
  } else {
    fill_standard_normal(eng, out);
  }
}

MultiplierLaw MultiplierLaw::parse(const std::string& text) {
  const std::string t = lower(text);
  if (t == "rademacher") return {Kind::Rademacher};
  if (t == "gaussian" || t == "normal") return {Kind::StandardGaussian};
  throw InvalidArgument("unknown multiplier law '" + text + "' (expected rademacher|gaussian)");
}

const char* MultiplierLaw::name() const noexcept {
  return kind == Kind::Rademacher ? "rademacher" : "gaussian";
}

double empirical_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0,1]");
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(lo), values.end());
  const double v_lo = values[lo];
  if (hi == lo) return v_lo;
  const double v_hi = *std::min_element(values.begin() + static_cast<std::ptrdiff_t>(lo) + 1, values.end());
  return v_lo + (h - static_cast<double>(lo)) * (v_hi - v_lo);
}

ConfidenceInterval sn_ci(const TimeSeries& x, double alpha, std::size_t block_length) {
  check_alpha(alpha);
  const double v_n = full_scale(x);
  const double tau = lrv_selfnorm(x, block_length).tau_hat();
  const double n = static_cast<double>(x.size());
  const double half = two_sided_critical(alpha) * tau * v_n / n;
  ConfidenceInterval ci;
  ci.point = x.mean();
  ci.lower = ci.point - half;
  ci.upper = ci.point + half;
  ci.level = 1.0 - alpha;
  ci.method = IntervalMethod::SN;
  ci.tau_hat = tau;
  ci.block_length = block_length;
  return ci;
}

ConfidenceInterval st_ci(const TimeSeries& x, double alpha, std::size_t block_length) {
  check_alpha(alpha);
  const double tau = lrv_stationary(x, block_length).tau_hat();
  const double half = two_sided_critical(alpha) * tau / std::sqrt(static_cast<double>(x.size()));
  ConfidenceInterval ci;
  ci.point = x.mean();
  ci.lower = ci.point - half;
  ci.upper = ci.point + half;
  ci.level = 1.0 - alpha;
  ci.method = IntervalMethod::ST;
  ci.tau_hat = tau;
  ci.block_length = block_length;
  return ci;
}

// --- combinations ------------------------------------------------------------

void CombinationSpec::validate(std::size_t block_length) const {
  if (segments.empty()) throw InvalidArgument("combination needs at least one segment");
  if (segments.size() != weights.size()) {
    throw InvalidArgument("combination has " + std::to_string(segments.size()) + " segments but " +
                          std::to_string(weights.size()) + " weights");
  }
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) {
    throw InvalidArgument("combination weights are all zero");
  }
  for (std::size_t j = 0; j < segments.size(); ++j) {
    if (!std::isfinite(weights[j])) throw InvalidArgument("combination weight is not finite");
    if (segments[j].size() < std::max<std::size_t>(2, 2 * block_length)) {
      throw InfeasibleParameters("segment " + std::to_string(j + 1) + " has " + std::to_string(segments[j].size()) +
                                 " observations, need at least 2 k_n = " + std::to_string(2 * block_length));
    }
    if (!(css_of(segments[j].values()) > 0.0)) {
      throw DegenerateData("segment " + std::to_string(j + 1) + " is constant");
    }
  }
}

double CombinationSpec::point() const {
  double p = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) p += weights[j] * segments[j].mean();
  return p;
}

double CombinationSpec::lambda() const {
  double l2 = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const double nj = static_cast<double>(segments[j].size());
    l2 += weights[j] * weights[j] / (nj * nj) * css_of(segments[j].values());
  }
  return std::sqrt(l2);
}

std::vector<double> CombinationSpec::pooled_residuals() const {
  std::vector<double> out;
  for (const auto& seg : segments) {
    const double m = seg.mean();
    for (double v : seg) out.push_back(v - m);
  }
  return out;
}

ConfidenceInterval combo_interval(const CombinationSpec& spec, double alpha, double tau_hat) {
  check_alpha(alpha);
  if (!(tau_hat >= 0.0)) throw InvalidArgument("tau_hat must be nonnegative");
  spec.validate(1);
  ConfidenceInterval ci;
  ci.point = spec.point();
  const double half = two_sided_critical(alpha) * tau_hat * spec.lambda();
  ci.lower = ci.point - half;
  ci.upper = ci.point + half;
  ci.level = 1.0 - alpha;
  ci.method = IntervalMethod::SN;
  ci.tau_hat = tau_hat;
  return ci;
}

ConfidenceInterval combo_ci(const CombinationSpec& spec, double alpha, std::size_t block_length) {
  spec.validate(block_length);
  const auto residuals = spec.pooled_residuals();
  const double tau = lrv_selfnorm(residuals, block_length).tau_hat();
  auto ci = combo_interval(spec, alpha, tau);
  ci.block_length = block_length;
  return ci;
}

ConfidenceInterval combo_wb_ci(const CombinationSpec& spec, double alpha, std::size_t block_length,
                               const MultiplierLaw& law, const BootstrapOptions& opts) {
  check_alpha(alpha);
  spec.validate(block_length);
  const std::vector<double> eps = spec.pooled_residuals();
  const double tau = lrv_selfnorm(eps, block_length).tau_hat();

  std::vector<std::size_t> offsets{0};
  for (const auto& seg : spec.segments) offsets.push_back(offsets.back() + seg.size());

  auto dist = detail::collect_bootstrap(opts, "combination wild bootstrap", [&](Engine& eng) -> std::optional<double> {
    std::vector<double> xi(eps.size());
    law.fill(eng, xi);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= eps[i];
    double num = 0.0, lambda_sq = 0.0;
    std::vector<double> centered(xi.size());
    for (std::size_t j = 0; j + 1 < offsets.size(); ++j) {
      const std::span<const double> seg(xi.data() + offsets[j], offsets[j + 1] - offsets[j]);
      const double nj = static_cast<double>(seg.size());
      const double m = mean_of(seg);
      double css = 0.0;
      for (std::size_t i = 0; i < seg.size(); ++i) {
        centered[offsets[j] + i] = seg[i] - m;
        css += (seg[i] - m) * (seg[i] - m);
      }
      num += spec.weights[j] * m;
      lambda_sq += spec.weights[j] * spec.weights[j] / (nj * nj) * css;
    }
    const auto tau_sq = lrv_selfnorm_value(centered, block_length);
    if (!tau_sq || !(*tau_sq > 0.0) || !(lambda_sq > 0.0)) return std::nullopt;
    return num / (std::sqrt(*tau_sq) * std::sqrt(lambda_sq));
  });

  auto ci = invert_root(dist, alpha, spec.point(), tau * spec.lambda());
  ci.method = IntervalMethod::WB;
  ci.tau_hat = tau;
  ci.block_length = block_length;
  return ci;
}

// --- wild bootstrap ------------------------------------------------------------

std::vector<double> wild_resample(std::span<const double> residuals, std::span<const double> multipliers) {
  if (residuals.size() != multipliers.size()) throw InvalidArgument("residual and multiplier lengths differ");
  std::vector<double> xi(residuals.size());
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] = residuals[i] * multipliers[i];
  return xi;
}

std::optional<double> wild_statistic(std::span<const double> xi, std::size_t block_length) {
  const auto tau_sq = lrv_selfnorm_value(xi, block_length);
  if (!tau_sq || !(*tau_sq > 0.0)) return std::nullopt;
  double sum = 0.0;
  for (double v : xi) sum += v;
  const double css = css_of(xi);
  if (!(css > 0.0)) return std::nullopt;
  return sum / (std::sqrt(*tau_sq) * std::sqrt(css));
}

BootstrapDistribution wild_bootstrap_mean(const TimeSeries& x, std::size_t block_length, const MultiplierSource& source,
                                          const BootstrapOptions& opts) {
  x.require_length(2, "wild bootstrap");
  (void)partition(x.size(), block_length);
  const double m = x.mean();
  std::vector<double> eps(x.begin(), x.end());
  for (double& v : eps) v -= m;
  return detail::collect_bootstrap(opts, "wild bootstrap", [&](Engine& eng) -> std::optional<double> {
    std::vector<double> xi(eps.size());
    source(eng, xi);
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= eps[i];
    return wild_statistic(xi, block_length);
  });
}

BootstrapDistribution wild_bootstrap_mean(const TimeSeries& x, std::size_t block_length, const MultiplierLaw& law,
                                          const BootstrapOptions& opts) {
  return wild_bootstrap_mean(
      x, block_length, [&law](Engine& eng, std::span<double> out) { law.fill(eng, out); }, opts);
}

ConfidenceInterval wb_ci(const TimeSeries& x, double alpha, std::size_t block_length, const MultiplierLaw& law,
                         const BootstrapOptions& opts) {
  check_alpha(alpha);
  const double v_n = full_scale(x);
  const double tau = lrv_selfnorm(x, block_length).tau_hat();
  const auto dist = wild_bootstrap_mean(x, block_length, law, opts);
  auto ci = invert_root(dist, alpha, x.mean(), tau * v_n / static_cast<double>(x.size()));
  ci.method = IntervalMethod::WB;
  ci.tau_hat = tau;
  ci.block_length = block_length;
  return ci;
}

// --- block bootstrap -------------------------------------------------------------

std::vector<double> block_resample(std::span<const double> x, const BlockPartition& part,
                                   std::span<const std::size_t> choices) {
  std::vector<double> out;
  out.reserve(choices.size() * part.block_length);
  for (std::size_t c : choices) {
    if (c >= part.block_count) throw InvalidArgument("block choice " + std::to_string(c) + " out of range");
    const auto first = x.begin() + static_cast<std::ptrdiff_t>(c * part.block_length);
    out.insert(out.end(), first, first + static_cast<std::ptrdiff_t>(part.block_length));
  }
  return out;
}

BootstrapDistribution block_bootstrap_mean(const TimeSeries& x, std::size_t block_length, bool studentized,
                                           const BootstrapOptions& opts) {
  // The plain root is well defined with a single block (every resample is
  // that block, so Xi = 0); the studentized one needs a variance estimate.
  const bool single = !studentized && block_length >= 1 && x.size() / block_length == 1;
  const BlockPartition part = single ? BlockPartition{x.size(), block_length, 1} : partition(x.size(), block_length);
  const std::span<const double> covered = x.values().first(part.covered());
  const double e_star = mean_of(covered);
  const double root_n = std::sqrt(static_cast<double>(part.covered()));
  return detail::collect_bootstrap(
      opts, studentized ? "studentized block bootstrap" : "block bootstrap", [&](Engine& eng) -> std::optional<double> {
        std::uniform_int_distribution<std::size_t> pick(0, part.block_count - 1);
        std::vector<std::size_t> choices(part.block_count);
        for (auto& c : choices) c = pick(eng);
        const auto sample = block_resample(x.values(), part, choices);
        const double root = root_n * (mean_of(sample) - e_star);
        if (!studentized) return root;
        const double tau_sq = lrv_stationary_value(sample, block_length);
        if (!(tau_sq > 0.0)) return std::nullopt;
        return root / std::sqrt(tau_sq);
      });
}

ConfidenceInterval bb_ci(const TimeSeries& x, double alpha, std::size_t block_length, bool studentized,
                         const BootstrapOptions& opts) {
  check_alpha(alpha);
  const auto dist = block_bootstrap_mean(x, block_length, studentized, opts);
  const double root_n = std::sqrt(static_cast<double>(x.size()));
  double tau = 1.0;
  if (studentized) {
    tau = lrv_stationary(x, block_length).tau_hat();
    if (!(tau > 0.0)) throw DegenerateData("stationary long-run variance estimate is zero");
  }
  auto ci = invert_root(dist, alpha, x.mean(), tau / root_n);
  ci.method = studentized ? IntervalMethod::SBB : IntervalMethod::BB;
  ci.tau_hat = studentized ? tau : lrv_stationary(x, block_length).tau_hat();
  ci.block_length = block_length;
  return ci;
}

ConfidenceInterval mean_ci(IntervalMethod method, const TimeSeries& x, double alpha, std::size_t block_length,
                           const MultiplierLaw& law, const BootstrapOptions& opts) {
  switch (method) {
    case IntervalMethod::SN: return sn_ci(x, alpha, block_length);
    case IntervalMethod::WB: return wb_ci(x, alpha, block_length, law, opts);
    case IntervalMethod::ST: return st_ci(x, alpha, block_length);
    case IntervalMethod::BB: return bb_ci(x, alpha, block_length, false, opts);
    case IntervalMethod::SBB: return bb_ci(x, alpha, block_length, true, opts);
  }
  throw InvalidArgument("unknown interval method");
}

}  // namespace snts
