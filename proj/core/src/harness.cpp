#include "snts/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "snts/changepoint.hpp"
#include "snts/error.hpp"
#include "snts/inference.hpp"
#include "snts/parallel.hpp"
#include "snts/random.hpp"

namespace snts {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(double v, int precision) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

std::uint64_t data_cell_seed(const ExperimentSpec& spec, const SigmaProfile& p, const ErrorModel& e) {
  return derive_seed(spec.master_seed, p.name() + "|" + e.name() + "|n=" + std::to_string(spec.n));
}

std::uint64_t boot_seed(std::uint64_t replicate_seed, const std::string& method, std::size_t k) {
  return derive_seed(derive_seed(replicate_seed, "boot"), method + "|k=" + std::to_string(k));
}

SimModel null_model(const ExperimentSpec& spec, const SigmaProfile& p, const ErrorModel& e) {
  SimModel m;
  m.n = spec.n;
  m.sigma = p;
  m.error = e;
  m.change_after = spec.change_after;
  return m;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Per-replicate 0/1 outcomes for `slots` (k x method) combinations.
struct OutcomeGrid {
  std::size_t slots;
  std::vector<unsigned char> hit, failed;
  OutcomeGrid(std::size_t reps, std::size_t s) : slots(s), hit(reps * s, 0), failed(reps * s, 0) {}
};

void append_cells(ExperimentResult& res, const OutcomeGrid& grid, std::size_t reps, const SigmaProfile& p,
                  const ErrorModel& e, std::optional<double> lambda) {
  const auto& spec = res.spec;
  for (std::size_t ki = 0; ki < spec.block_lengths.size(); ++ki) {
    for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
      const std::size_t slot = ki * spec.methods.size() + mi;
      std::size_t hits = 0, fails = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        hits += grid.hit[r * grid.slots + slot];
        fails += grid.failed[r * grid.slots + slot];
      }
      ExperimentCell cell;
      cell.profile = p.name();
      cell.error = e.name();
      cell.block_length = spec.block_lengths[ki];
      cell.method = spec.methods[mi];
      cell.lambda = lambda;
      cell.replications = reps;
      cell.failures = fails;
      cell.rate = static_cast<double>(hits) / static_cast<double>(reps);
      cell.standard_error = binomial_se(cell.rate, reps);
      res.cells.push_back(cell);
    }
  }
}

}  // namespace

double binomial_se(double rate, std::size_t replications) noexcept {
  if (replications == 0) return 0.0;
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(replications));
}

const char* to_string(ExperimentSpec::Kind k) noexcept {
  switch (k) {
    case ExperimentSpec::Kind::Coverage: return "coverage";
    case ExperimentSpec::Kind::Size: return "size";
    case ExperimentSpec::Kind::Power: return "power";
  }
  return "?";
}

ExperimentSpec::Kind parse_experiment_kind(const std::string& text) {
  const std::string t = lower(text);
  if (t == "coverage") return ExperimentSpec::Kind::Coverage;
  if (t == "size") return ExperimentSpec::Kind::Size;
  if (t == "power") return ExperimentSpec::Kind::Power;
  throw InvalidArgument("unknown experiment kind '" + text + "' (expected coverage|size|power)");
}

void ExperimentSpec::validate() const {
  if (replications < 1) throw InvalidArgument("experiment needs reps >= 1");
  if (bootstrap_samples < 1) throw InvalidArgument("experiment needs boot >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  if (sigma_profiles.empty() || error_models.empty() || block_lengths.empty() || methods.empty()) {
    throw InvalidArgument("experiment grid has an empty dimension (profiles, errors, k or methods)");
  }
  for (std::size_t k : block_lengths) (void)partition(n, k);
  for (const auto& m : methods) {
    if (kind == Kind::Coverage) {
      (void)parse_interval_method(m);
    } else {
      (void)parse_cusum_test(m);
    }
  }
  (void)MultiplierLaw::parse(multiplier);
  if (kind != Kind::Coverage) (void)trimmed_range(n, trim);
  if (kind == Kind::Power) {
    if (lambda_grid.empty() || std::find(lambda_grid.begin(), lambda_grid.end(), 0.0) == lambda_grid.end()) {
      throw InvalidArgument("power experiment needs a lambda grid containing 0");
    }
    if (calibration_reps < 1) throw InvalidArgument("power experiment needs calibration_reps >= 1");
  }
}

KeyValueConfig ExperimentSpec::to_config() const {
  KeyValueConfig cfg;
  std::vector<std::string> profiles, errors, ks, lambdas;
  for (const auto& p : sigma_profiles) profiles.push_back(p.name());
  for (const auto& e : error_models) errors.push_back(e.name());
  for (auto k : block_lengths) ks.push_back(std::to_string(k));
  for (double l : lambda_grid) lambdas.push_back(fmt(l));
  cfg.set("kind", to_string(kind));
  cfg.set("n", std::to_string(n));
  cfg.set("profiles", join(profiles));
  cfg.set("errors", join(errors));
  cfg.set("k", join(ks));
  cfg.set("methods", join(methods));
  cfg.set("reps", std::to_string(replications));
  cfg.set("boot", std::to_string(bootstrap_samples));
  cfg.set("alpha", fmt(alpha));
  cfg.set("trim", fmt(trim));
  cfg.set("multiplier", multiplier);
  cfg.set("seed", std::to_string(master_seed));
  if (kind == Kind::Power) {
    cfg.set("lambda", join(lambdas));
    cfg.set("change_after", std::to_string(change_after));
    cfg.set("calibration_reps", std::to_string(calibration_reps));
  }
  return cfg;
}

ExperimentSpec ExperimentSpec::from_config(const KeyValueConfig& cfg) {
  ExperimentSpec s;
  s.kind = parse_experiment_kind(cfg.get_string("kind", "coverage"));
  const auto n = cfg.get_int("n", 120);
  if (n < 4) throw InvalidArgument("n must be at least 4");
  s.n = static_cast<std::size_t>(n);
  for (const auto& p : cfg.get_list("profiles")) s.sigma_profiles.push_back(SigmaProfile::parse(p));
  if (s.sigma_profiles.empty()) s.sigma_profiles = {SigmaProfile::a1(), SigmaProfile::a2(), SigmaProfile::a3(), SigmaProfile::a4()};
  for (const auto& e : cfg.get_list("errors")) s.error_models.push_back(ErrorModel::parse(e));
  if (s.error_models.empty()) s.error_models = {ErrorModel::b1(0.0)};
  for (const auto& k : cfg.get_list("k")) {
    const auto v = parse_int(k);
    if (v < 1) throw InvalidArgument("block lengths must be positive");
    s.block_lengths.push_back(static_cast<std::size_t>(v));
  }
  if (s.block_lengths.empty()) s.block_lengths = {10};
  for (const auto& m : cfg.get_list("methods")) s.methods.push_back(lower(m));
  if (s.methods.empty()) {
    s.methods = s.kind == Kind::Coverage ? std::vector<std::string>{"sn", "wb", "st", "bb", "sbb"}
                                         : std::vector<std::string>{"sn", "t1", "t2"};
  }
  const auto positive = [&](const char* key, std::int64_t fallback) {
    const auto v = cfg.get_int(key, fallback);
    if (v < 1) throw InvalidArgument(std::string(key) + " must be positive");
    return static_cast<std::size_t>(v);
  };
  s.replications = positive("reps", 500);
  s.bootstrap_samples = positive("boot", 500);
  s.calibration_reps = positive("calibration_reps", 2000);
  s.alpha = cfg.get_double("alpha", 0.05);
  s.trim = cfg.get_double("trim", 0.1);
  s.lambda_grid = cfg.get_doubles("lambda");
  if (s.kind == Kind::Power && s.lambda_grid.empty()) s.lambda_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  const auto j0 = cfg.get_int("change_after", 40);
  if (j0 < 0) throw InvalidArgument("change_after must be nonnegative");
  s.change_after = static_cast<std::size_t>(j0);
  s.multiplier = lower(cfg.get_string("multiplier", "rademacher"));
  s.master_seed = cfg.get_uint("seed", 1);
  s.threads = static_cast<unsigned>(cfg.get_int("threads", 1));
  return s;
}

const ExperimentCell* ExperimentResult::find(const std::string& profile, const std::string& error,
                                             std::size_t block_length, const std::string& method,
                                             std::optional<double> lambda) const {
  for (const auto& c : cells) {
    if (c.profile == profile && c.error == error && c.block_length == block_length && c.method == method &&
        c.lambda == lambda) {
      return &c;
    }
  }
  return nullptr;
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream os;
  os << "kind,profile,error,k,method,lambda,rate,se,replications,failures,critical_value\n";
  for (const auto& c : cells) {
    os << to_string(spec.kind) << ',' << c.profile << ',' << c.error << ',' << c.block_length << ',' << c.method << ','
       << (c.lambda ? fmt(*c.lambda) : "") << ',' << fmt(c.rate) << ',' << fmt(c.standard_error) << ','
       << c.replications << ',' << c.failures << ',' << (c.critical_value ? fmt(*c.critical_value) : "") << '\n';
  }
  return os.str();
}

std::string ExperimentResult::to_table() const {
  std::ostringstream os;
  os << to_string(spec.kind) << " (in percentage), n=" << spec.n << ", R=" << spec.replications;
  if (spec.kind != ExperimentSpec::Kind::Power) os << ", B=" << spec.bootstrap_samples;
  os << "\n";
  os << std::left << std::setw(12) << "error" << std::setw(6) << "k" << std::setw(12) << "sigma";
  if (spec.kind == ExperimentSpec::Kind::Power) os << std::setw(9) << "lambda";
  for (const auto& m : spec.methods) os << std::right << std::setw(8) << m;
  os << "\n";
  // rows keyed in first-appearance order
  std::vector<std::string> row_keys;
  std::map<std::string, std::map<std::string, double>> rows;
  std::map<std::string, std::vector<std::string>> row_labels;
  for (const auto& c : cells) {
    const std::string key = c.error + "|" + std::to_string(c.block_length) + "|" + c.profile + "|" +
                            (c.lambda ? fmt(*c.lambda, 6) : "");
    if (!rows.count(key)) {
      row_keys.push_back(key);
      row_labels[key] = {c.error, std::to_string(c.block_length), c.profile, c.lambda ? fmt(*c.lambda, 6) : ""};
    }
    rows[key][c.method] = c.rate;
  }
  os << std::fixed;
  for (const auto& key : row_keys) {
    const auto& lab = row_labels[key];
    os << std::left << std::setw(12) << lab[0] << std::setw(6) << lab[1] << std::setw(12) << lab[2];
    if (spec.kind == ExperimentSpec::Kind::Power) os << std::setw(9) << lab[3];
    for (const auto& m : spec.methods) {
      os << std::right << std::setw(8) << std::setprecision(1) << 100.0 * rows[key][m];
    }
    os << "\n";
  }
  return os.str();
}

ExperimentResult run_coverage(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentSpec::Kind::Coverage) throw InvalidArgument("run_coverage needs kind=coverage");
  spec.validate();
  const auto t0 = Clock::now();
  ExperimentResult res;
  res.spec = spec;
  std::vector<IntervalMethod> methods;
  for (const auto& m : spec.methods) methods.push_back(parse_interval_method(m));
  const MultiplierLaw law = MultiplierLaw::parse(spec.multiplier);
  const std::size_t slots = spec.block_lengths.size() * methods.size();

  for (const auto& profile : spec.sigma_profiles) {
    const auto sigma = sigma_values(profile, spec.n);
    for (const auto& error : spec.error_models) {
      const std::uint64_t cell = data_cell_seed(spec, profile, error);
      OutcomeGrid grid(spec.replications, slots);
      parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
        SimModel model = null_model(spec, profile, error);
        model.seed = derive_seed(cell, r);
        const TimeSeries x(generate_values(model, sigma));
        for (std::size_t ki = 0; ki < spec.block_lengths.size(); ++ki) {
          const std::size_t k = spec.block_lengths[ki];
          for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            const std::size_t slot = r * slots + ki * methods.size() + mi;
            BootstrapOptions opts{spec.bootstrap_samples, boot_seed(model.seed, spec.methods[mi], k), 1};
            try {
              const auto ci = mean_ci(methods[mi], x, spec.alpha, k, law, opts);
              grid.hit[slot] = ci.covers(model.mu) ? 1 : 0;
            } catch (const DegenerateData&) {
              grid.failed[slot] = 1;
            }
          }
        }
      });
      append_cells(res, grid, spec.replications, profile, error, std::nullopt);
    }
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

ExperimentResult run_size(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentSpec::Kind::Size) throw InvalidArgument("run_size needs kind=size");
  spec.validate();
  const auto t0 = Clock::now();
  ExperimentResult res;
  res.spec = spec;
  std::vector<CusumTest> tests;
  for (const auto& m : spec.methods) tests.push_back(parse_cusum_test(m));
  const MultiplierLaw law = MultiplierLaw::parse(spec.multiplier);
  const std::size_t slots = spec.block_lengths.size() * tests.size();

  for (const auto& profile : spec.sigma_profiles) {
    const auto sigma = sigma_values(profile, spec.n);
    for (const auto& error : spec.error_models) {
      const std::uint64_t cell = data_cell_seed(spec, profile, error);
      OutcomeGrid grid(spec.replications, slots);
      parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
        SimModel model = null_model(spec, profile, error);
        model.seed = derive_seed(cell, r);
        const TimeSeries x(generate_values(model, sigma));
        for (std::size_t ki = 0; ki < spec.block_lengths.size(); ++ki) {
          const std::size_t k = spec.block_lengths[ki];
          for (std::size_t ti = 0; ti < tests.size(); ++ti) {
            const std::size_t slot = r * slots + ki * tests.size() + ti;
            ChangePointOptions opts;
            opts.trim = spec.trim;
            opts.block_length = k;
            opts.law = law;
            opts.bootstrap = {spec.bootstrap_samples, boot_seed(model.seed, spec.methods[ti], k), 1};
            try {
              const auto rep = run_changepoint_test(tests[ti], x, opts);
              grid.hit[slot] = rep.p_value <= spec.alpha ? 1 : 0;
            } catch (const DegenerateData&) {
              grid.failed[slot] = 1;
            }
          }
        }
      });
      append_cells(res, grid, spec.replications, profile, error, std::nullopt);
    }
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

ExperimentResult run_power(const ExperimentSpec& spec) {
  if (spec.kind != ExperimentSpec::Kind::Power) throw InvalidArgument("run_power needs kind=power");
  spec.validate();
  const auto t0 = Clock::now();
  ExperimentResult res;
  res.spec = spec;
  std::vector<CusumTest> tests;
  for (const auto& m : spec.methods) tests.push_back(parse_cusum_test(m));
  const std::size_t slots = spec.block_lengths.size() * tests.size();

  // nullopt statistics (degenerate data) never reject and are left out of calibration
  const auto statistic = [&](std::span<const double> x, std::size_t k, CusumTest t) -> std::optional<double> {
    return t == CusumTest::SN ? sn_statistic_value(x, spec.trim, k) : classical_statistic_value(x, spec.trim, k, t);
  };

  for (const auto& profile : spec.sigma_profiles) {
    const auto sigma = sigma_values(profile, spec.n);
    for (const auto& error : spec.error_models) {
      const std::uint64_t cell = data_cell_seed(spec, profile, error);

      // phase 1: null calibration
      const std::uint64_t calib = derive_seed(cell, "calibration");
      std::vector<std::optional<double>> null_stats(spec.calibration_reps * slots);
      parallel_for(spec.calibration_reps, spec.threads, [&](std::size_t r) {
        SimModel model = null_model(spec, profile, error);
        model.seed = derive_seed(calib, r);
        const auto x = generate_values(model, sigma);
        for (std::size_t ki = 0; ki < spec.block_lengths.size(); ++ki) {
          for (std::size_t ti = 0; ti < tests.size(); ++ti) {
            null_stats[r * slots + ki * tests.size() + ti] = statistic(x, spec.block_lengths[ki], tests[ti]);
          }
        }
      });
      std::vector<double> critical(slots);
      for (std::size_t s = 0; s < slots; ++s) {
        std::vector<double> vals;
        for (std::size_t r = 0; r < spec.calibration_reps; ++r) {
          if (const auto& v = null_stats[r * slots + s]) vals.push_back(*v);
        }
        if (vals.empty()) throw DegenerateData("null calibration produced no usable statistics");
        critical[s] = empirical_quantile(std::move(vals), 1.0 - spec.alpha);
      }

      // phase 2: rejection rates along the lambda grid, same noise path per replicate
      for (double lambda : spec.lambda_grid) {
        OutcomeGrid grid(spec.replications, slots);
        parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
          SimModel model = null_model(spec, profile, error);
          model.seed = derive_seed(cell, r);
          model.lambda = lambda;
          const auto x = generate_values(model, sigma);
          for (std::size_t ki = 0; ki < spec.block_lengths.size(); ++ki) {
            for (std::size_t ti = 0; ti < tests.size(); ++ti) {
              const std::size_t s = ki * tests.size() + ti;
              const auto v = statistic(x, spec.block_lengths[ki], tests[ti]);
              grid.hit[r * slots + s] = v && *v > critical[s] ? 1 : 0;
              grid.failed[r * slots + s] = v ? 0 : 1;
            }
          }
        });
        const std::size_t first = res.cells.size();
        append_cells(res, grid, spec.replications, profile, error, lambda);
        for (std::size_t s = 0; s < slots; ++s) res.cells[first + s].critical_value = critical[s];
      }
    }
  }
  res.wall_seconds = seconds_since(t0);
  return res;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentSpec::Kind::Coverage: return run_coverage(spec);
    case ExperimentSpec::Kind::Size: return run_size(spec);
    case ExperimentSpec::Kind::Power: return run_power(spec);
  }
  throw InvalidArgument("unknown experiment kind");
}

}  // namespace snts
