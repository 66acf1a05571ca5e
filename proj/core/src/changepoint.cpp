#include "snts/changepoint.hpp"

#include <cmath>

#include "bootstrap_detail.hpp"
#include "snts/error.hpp"
#include "snts/lrv.hpp"

namespace snts {

namespace {

struct ScanOutcome {
  bool ok = true;
  std::size_t bad_j = 0;
  double max_abs = 0.0;
  std::size_t j_hat = 0;
};

/// Self-normalized scan over `range`; writes signed T_n(j) into `out` when given.
ScanOutcome sn_scan_core(std::span<const double> x, IndexRange range, std::vector<double>* out) {
  const std::size_t n = x.size();
  const double dn = static_cast<double>(n);
  // suffix css for the split at j covers zero-based [j, n)
  std::vector<double> suffix_css(n + 1, 0.0);
  {
    RunningStats bwd;
    for (std::size_t i = n; i-- > range.first;) {
      bwd.push(x[i]);
      suffix_css[i] = bwd.css();
    }
  }
  double total = 0.0;
  for (double v : x) total += v;

  ScanOutcome res;
  if (out) out->assign(range.size(), 0.0);
  RunningStats fwd;
  double prefix = 0.0;
  std::size_t i = 0;
  for (std::size_t j = range.first; j <= range.last; ++j) {
    for (; i < j; ++i) {
      fwd.push(x[i]);
      prefix += x[i];
    }
    const double w = static_cast<double>(j) / dn;
    const double s = prefix - w * total;
    const double denom_sq = (1.0 - w) * (1.0 - w) * fwd.css() + w * w * suffix_css[j];
    if (!(denom_sq > 0.0)) {
      res.ok = false;
      res.bad_j = j;
      return res;
    }
    const double t = s / std::sqrt(denom_sq);
    if (out) (*out)[j - range.first] = t;
    if (std::abs(t) > res.max_abs || res.j_hat == 0) {
      res.max_abs = std::abs(t);
      res.j_hat = j;
    }
  }
  return res;
}

/// Two segments [1, j_hat] and [j_hat+1, n], each centered by its own mean.
std::vector<double> split_center(std::span<const double> x, std::size_t j_hat) {
  std::vector<double> eps(x.begin(), x.end());
  const double m1 = mean_of(x.first(j_hat));
  const double m2 = mean_of(x.subspan(j_hat));
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] -= i < j_hat ? m1 : m2;
  return eps;
}

struct PipelineResult {
  double statistic;
  std::size_t j_hat;
  double tau;
};

/// Steps (i)-(iv) of the self-normalized test on arbitrary data.
std::optional<PipelineResult> sn_pipeline(std::span<const double> x, IndexRange range, std::size_t block_length,
                                          std::vector<double>* residuals_out = nullptr) {
  const auto scan = sn_scan_core(x, range, nullptr);
  if (!scan.ok) return std::nullopt;
  auto eps = split_center(x, scan.j_hat);
  const auto tau_sq = lrv_selfnorm_value(eps, block_length);
  if (!tau_sq || !(*tau_sq > 0.0)) return std::nullopt;
  const double tau = std::sqrt(*tau_sq);
  if (residuals_out) *residuals_out = std::move(eps);
  return PipelineResult{scan.max_abs / tau, scan.j_hat, tau};
}

double classical_weight(std::size_t j, std::size_t n, CusumTest variant) {
  if (variant == CusumTest::T2) return 1.0;
  const double dj = static_cast<double>(j);
  return std::sqrt(dj * (1.0 - dj / static_cast<double>(n)));
}

void check_classical(CusumTest variant) {
  if (variant == CusumTest::SN) throw InvalidArgument("classical scan needs variant T1 or T2");
}

/// max_j |S_X(j)| / w_j over the range, unscaled by tau.
std::pair<double, std::size_t> classical_max(std::span<const double> x, IndexRange range, CusumTest variant) {
  const std::size_t n = x.size();
  double total = 0.0;
  for (double v : x) total += v;
  double prefix = 0.0;
  std::size_t i = 0;
  double best = 0.0;
  std::size_t arg = range.first;
  for (std::size_t j = range.first; j <= range.last; ++j) {
    for (; i < j; ++i) prefix += x[i];
    const double s = prefix - static_cast<double>(j) / static_cast<double>(n) * total;
    const double v = std::abs(s) / classical_weight(j, n, variant);
    if (v > best) {
      best = v;
      arg = j;
    }
  }
  return {best, arg};
}

}  // namespace

const char* to_string(CusumTest t) noexcept {
  switch (t) {
    case CusumTest::SN: return "sn";
    case CusumTest::T1: return "t1";
    case CusumTest::T2: return "t2";
  }
  return "?";
}

CusumTest parse_cusum_test(const std::string& text) {
  if (text == "sn" || text == "SN") return CusumTest::SN;
  if (text == "t1" || text == "T1") return CusumTest::T1;
  if (text == "t2" || text == "T2") return CusumTest::T2;
  throw InvalidArgument("unknown change-point test '" + text + "' (expected sn|t1|t2)");
}

IndexRange trimmed_range(std::size_t n, double c) {
  if (!(c > 0.0 && c < 0.5)) throw InvalidArgument("trimming fraction c must lie in (0, 1/2), got " + std::to_string(c));
  const double dn = static_cast<double>(n);
  // tolerance absorbs representation error in c * n (e.g. 0.1 * 120)
  const double lo = std::ceil(c * dn - 1e-9);
  const double hi = std::floor((1.0 - c) * dn + 1e-9);
  IndexRange r{static_cast<std::size_t>(std::max(lo, 1.0)),
               static_cast<std::size_t>(std::max(std::min(hi, dn - 1.0), 0.0))};
  if (r.empty()) {
    throw InfeasibleParameters("trimmed range is empty for n=" + std::to_string(n) + ", c=" + std::to_string(c));
  }
  return r;
}

double CusumScan::at(std::size_t j) const {
  if (j < range.first || j > range.last) throw InvalidArgument("index " + std::to_string(j) + " outside scan range");
  return values[j - range.first];
}

double sx(const TimeSeries& x, std::size_t j) {
  const std::size_t n = x.size();
  if (j < 1 || j + 1 > n) throw InvalidArgument("S_X(j) needs 1 <= j <= n-1, got j=" + std::to_string(j));
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < n; ++i) (i < j ? head : tail) += x.values()[i];
  const double w = static_cast<double>(j) / static_cast<double>(n);
  return (1.0 - w) * head - w * tail;
}

CusumScan classical_scan(std::span<const double> x, double c, double tau_hat, CusumTest variant) {
  check_classical(variant);
  if (!(tau_hat > 0.0)) throw InvalidArgument("classical scan needs tau_hat > 0");
  CusumScan scan;
  scan.trim = c;
  scan.range = trimmed_range(x.size(), c);
  const std::size_t n = x.size();
  double total = 0.0;
  for (double v : x) total += v;
  double prefix = 0.0;
  std::size_t i = 0;
  scan.values.reserve(scan.range.size());
  for (std::size_t j = scan.range.first; j <= scan.range.last; ++j) {
    for (; i < j; ++i) prefix += x[i];
    const double s = prefix - static_cast<double>(j) / static_cast<double>(n) * total;
    const double v = std::abs(s) / (tau_hat * classical_weight(j, n, variant));
    scan.values.push_back(v);
    if (v > scan.max_value || scan.j_hat == 0) {
      scan.max_value = v;
      scan.j_hat = j;
    }
  }
  return scan;
}

CusumScan classical_scan(const TimeSeries& x, double c, double tau_hat, CusumTest variant) {
  return classical_scan(x.values(), c, tau_hat, variant);
}

CusumScan sn_scan(const TimeSeries& x, double c) {
  x.require_length(2, "self-normalized scan");
  CusumScan scan;
  scan.trim = c;
  scan.range = trimmed_range(x.size(), c);
  const auto res = sn_scan_core(x.values(), scan.range, &scan.values);
  if (!res.ok) {
    throw DegenerateData("degenerate scan at j=" + std::to_string(res.bad_j) + ": zero self-normalizer");
  }
  scan.max_value = res.max_abs;
  scan.j_hat = res.j_hat;
  return scan;
}

SnStatistic sn_statistic(const TimeSeries& x, double c, std::size_t block_length) {
  const CusumScan scan = sn_scan(x, c);
  SnStatistic out;
  out.j_hat = scan.j_hat;
  out.residuals = split_center(x.values(), scan.j_hat);
  const auto est = lrv_selfnorm(out.residuals, block_length);
  if (!(est.tau_sq_hat > 0.0)) throw DegenerateData("long-run variance of split-centered residuals is zero");
  out.tau_hat = est.tau_hat();
  out.statistic = scan.max_value / out.tau_hat;
  return out;
}

std::optional<double> sn_statistic_value(std::span<const double> x, double c, std::size_t block_length) {
  const auto r = sn_pipeline(x, trimmed_range(x.size(), c), block_length);
  if (!r) return std::nullopt;
  return r->statistic;
}

std::optional<double> classical_statistic_value(std::span<const double> x, double c, std::size_t block_length,
                                                CusumTest variant) {
  check_classical(variant);
  const IndexRange range = trimmed_range(x.size(), c);
  const auto [raw, arg] = classical_max(x, range, variant);
  (void)arg;
  if (raw == 0.0) return 0.0;
  const double tau_sq = lrv_stationary_value(x, block_length);
  if (!(tau_sq > 0.0)) return std::nullopt;
  return raw / std::sqrt(tau_sq);
}

ChangePointReport sn_test(const TimeSeries& x, const ChangePointOptions& opts) {
  ChangePointReport rep;
  rep.test = CusumTest::SN;
  rep.trim = opts.trim;
  rep.block_length = opts.block_length;
  rep.scan = sn_scan(x, opts.trim);
  const SnStatistic obs = sn_statistic(x, opts.trim, opts.block_length);
  rep.statistic = obs.statistic;
  rep.j_hat = obs.j_hat;
  rep.tau_hat = obs.tau_hat;

  const IndexRange range = rep.scan.range;
  const std::vector<double>& eps = obs.residuals;
  rep.bootstrap = detail::collect_bootstrap(opts.bootstrap, "self-normalized CUSUM bootstrap",
                                            [&](Engine& eng) -> std::optional<double> {
                                              std::vector<double> xi(eps.size());
                                              opts.law.fill(eng, xi);
                                              for (std::size_t i = 0; i < xi.size(); ++i) xi[i] *= eps[i];
                                              const auto r = sn_pipeline(xi, range, opts.block_length);
                                              if (!r) return std::nullopt;
                                              return r->statistic;
                                            });
  rep.p_value = detail::upper_tail_p_value(rep.bootstrap, rep.statistic);
  return rep;
}

ChangePointReport classical_test(const TimeSeries& x, CusumTest variant, const ChangePointOptions& opts) {
  check_classical(variant);
  const BlockPartition part = partition(x.size(), opts.block_length);
  ChangePointReport rep;
  rep.test = variant;
  rep.trim = opts.trim;
  rep.block_length = opts.block_length;

  const double m = x.mean();
  std::vector<double> centered(x.begin(), x.end());
  for (double& v : centered) v -= m;
  const IndexRange range = trimmed_range(x.size(), opts.trim);
  const double raw_max = classical_max(centered, range, variant).first;

  if (raw_max == 0.0) {
    // no variation to test: statistic 0, every replicate ties, p = 1
    rep.scan.trim = opts.trim;
    rep.scan.range = range;
    rep.scan.values.assign(range.size(), 0.0);
    rep.scan.j_hat = range.first;
    rep.bootstrap.replicates = opts.bootstrap.replicates;
    rep.bootstrap.seed = opts.bootstrap.seed;
    rep.bootstrap.values.assign(opts.bootstrap.replicates, 0.0);
    rep.p_value = 1.0;
    return rep;
  }

  const double tau_sq = lrv_stationary_value(centered, opts.block_length);
  if (!(tau_sq > 0.0)) throw DegenerateData("stationary long-run variance estimate is zero (all block means equal)");
  rep.tau_hat = std::sqrt(tau_sq);
  rep.scan = classical_scan(centered, opts.trim, rep.tau_hat, variant);
  rep.statistic = rep.scan.max_value;
  rep.j_hat = rep.scan.j_hat;

  rep.bootstrap = detail::collect_bootstrap(
      opts.bootstrap, "classical CUSUM block bootstrap", [&](Engine& eng) -> std::optional<double> {
        std::uniform_int_distribution<std::size_t> pick(0, part.block_count - 1);
        std::vector<std::size_t> choices(part.block_count);
        for (auto& c : choices) c = pick(eng);
        const auto sample = block_resample(centered, part, choices);
        const auto v = classical_statistic_value(sample, opts.trim, opts.block_length, variant);
        if (!v) return std::nullopt;
        return *v;
      });
  rep.p_value = detail::upper_tail_p_value(rep.bootstrap, rep.statistic);
  return rep;
}

ChangePointReport variance_change_test(const TimeSeries& x, const ChangePointOptions& opts) {
  const double m = x.mean();
  std::vector<double> sq(x.begin(), x.end());
  for (double& v : sq) v = (v - m) * (v - m);
  if (!(css_of(sq) > 0.0)) throw DegenerateData("squared deviations are constant; no variance change is testable");
  return sn_test(TimeSeries(std::move(sq)), opts);
}

ChangePointReport run_changepoint_test(CusumTest test, const TimeSeries& x, const ChangePointOptions& opts) {
  return test == CusumTest::SN ? sn_test(x, opts) : classical_test(x, test, opts);
}

}  // namespace snts
