#include "app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "snts/changepoint.hpp"
#include "snts/error.hpp"
#include "snts/harness.hpp"
#include "snts/inference.hpp"
#include "snts/keyvalue.hpp"
#include "snts/lrv.hpp"
#include "snts/random.hpp"
#include "snts/regression.hpp"
#include "snts/simgen.hpp"

#ifndef SNTS_VERSION
#define SNTS_VERSION "0.0.0"
#endif

namespace snts::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kDefaultAutoReps = 2000;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] bool empty() const { return columns.empty(); }
};

struct Report {
  Json inputs = Json::array();
  Json results = Json::object();
  std::optional<std::uint64_t> seed;
  /// Plot-ready rows for --format csv.
  Table data;
  /// Human-oriented rows for --format table; `data` when empty.
  Table summary;
  /// Preformatted text that replaces the generic renderings.
  std::optional<std::string> csv_text, table_text;
};

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool quote = row[c].find_first_of(",\"\n") != std::string::npos;
      std::string field = row[c];
      if (quote) {
        std::string esc = "\"";
        for (char ch : field) esc += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        field = esc + "\"";
      }
      out += (c ? "," : "") + field;
    }
    out += '\n';
  }
  return out;
}

std::string render_table(const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream os;
  const auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << r[c];
    os << '\n';
  };
  line(t.columns);
  for (const auto& row : t.rows) line(row);
  return os.str();
}

std::string digest(const std::vector<double>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json input_entry(const DataFrameIn& df) {
  Json j;
  j["path"] = df.source;
  j["column"] = df.value_name;
  j["index_column"] = df.index_name.empty() ? Json(nullptr) : Json(df.index_name);
  j["rows"] = df.values.size();
  j["digest"] = digest(df.values);
  return j;
}

Json interval_json(const ConfidenceInterval& ci) {
  Json j;
  j["method"] = to_string(ci.method);
  j["level"] = ci.level;
  j["point"] = ci.point;
  j["lower"] = ci.lower;
  j["upper"] = ci.upper;
  j["tau_hat"] = ci.tau_hat;
  j["block_length"] = ci.block_length;
  return j;
}

Json selection_json(const BlockLengthSelection& sel) {
  Json j;
  j["best"] = sel.best;
  j["replications"] = sel.replications;
  Json table = Json::array();
  for (const auto& e : sel.table) {
    Json row;
    row["k"] = e.block_length;
    row["feasible"] = e.feasible;
    row["mse"] = e.feasible ? Json(e.mse) : Json(nullptr);
    if (!e.note.empty()) row["note"] = e.note;
    table.push_back(row);
  }
  j["table"] = table;
  return j;
}

Table selection_table(const BlockLengthSelection& sel) {
  Table t{{"k", "feasible", "mse", "best"}, {}};
  for (const auto& e : sel.table) {
    t.rows.push_back({cell(e.block_length), e.feasible ? "1" : "0", e.feasible ? cell(e.mse) : "",
                      e.block_length == sel.best ? "1" : "0"});
  }
  return t;
}

// --- shared option groups ----------------------------------------------------

struct InputOptions {
  std::string path;
  std::string column;
  std::string index_column;
  bool no_header = false;

  void add(CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("-i,--input", path, "CSV file");
    if (required) opt->required();
    add_format(sub);
  }
  void add_format(CLI::App* sub) {
    sub->add_option("--col", column, "value column (header name or 1-based number); default last");
    sub->add_option("--index-col", index_column, "label column (header name or 1-based number)");
    sub->add_flag("--no-header", no_header, "first row is data");
  }
  [[nodiscard]] CsvOptions csv() const {
    CsvOptions o;
    o.value_column = column;
    if (!index_column.empty()) o.index_column = index_column;
    o.has_header = !no_header;
    return o;
  }
  [[nodiscard]] DataFrameIn load() const { return ingest_csv(path, csv()); }
  [[nodiscard]] DataFrameIn load(const std::string& p) const { return ingest_csv(p, csv()); }
};

struct BlockOptions {
  std::size_t blocks = 0;
  bool auto_k = false;
  std::size_t auto_reps = kDefaultAutoReps;

  void add(CLI::App* sub) {
    sub->add_option("-k,--blocks", blocks, "block length k_n");
    sub->add_flag("--auto-k", auto_k, "choose k_n by simulation (default when --blocks is absent)");
    sub->add_option("--auto-k-reps", auto_reps, "replications for --auto-k")->check(CLI::PositiveNumber);
  }

  /// Resolves k_n for a series of length n, recording the choice.
  std::size_t resolve(std::size_t n, std::uint64_t seed, unsigned threads, Json& out) const {
    if (blocks > 0 && !auto_k) {
      out["block_length_source"] = "user";
      return blocks;
    }
    const auto sel = select_block_length(n, default_block_grid(n), auto_reps, derive_seed(seed, "auto-k"), threads);
    out["block_length_source"] = "auto";
    out["block_selection"] = selection_json(sel);
    return sel.best;
  }
};

struct Common {
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void add(CLI::App* sub, bool with_seed = true) {
    sub->add_option("--format", format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("-o,--out", out_path, "write the report to this file");
    if (with_seed) sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker threads (0: hardware)");
  }
};

// --- subcommands ---------------------------------------------------------------

struct CiCommand {
  InputOptions input;
  BlockOptions block;
  std::string method = "sn";
  double alpha = 0.05;
  std::size_t bootstrap = 1000;
  std::string multiplier = "rademacher";

  void add(CLI::App* sub) {
    input.add(sub);
    block.add(sub);
    sub->add_option("-m,--method", method, "sn, wb, st, bb or sbb");
    sub->add_option("--alpha", alpha, "1 - confidence level");
    sub->add_option("-B,--bootstrap", bootstrap, "bootstrap replicates")->check(CLI::PositiveNumber);
    sub->add_option("--multiplier", multiplier, "rademacher or gaussian");
  }

  Report run(const Common& common) const {
    Report rep;
    const auto df = input.load();
    rep.inputs.push_back(input_entry(df));
    rep.seed = common.seed;
    const auto m = parse_interval_method(method);
    const auto law = MultiplierLaw::parse(multiplier);
    const auto x = df.series();
    const std::size_t k = block.resolve(x.size(), common.seed, common.threads, rep.results);
    const BootstrapOptions opts{bootstrap, common.seed, common.threads};
    const auto ci = mean_ci(m, x, alpha, k, law, opts);
    rep.results["n"] = x.size();
    rep.results["interval"] = interval_json(ci);
    if (m == IntervalMethod::WB || m == IntervalMethod::BB || m == IntervalMethod::SBB) {
      rep.results["bootstrap_replicates"] = bootstrap;
      if (m == IntervalMethod::WB) rep.results["multiplier"] = law.name();
    }
    rep.data = {{"method", "level", "point", "lower", "upper", "tau_hat", "k"},
                {{to_string(ci.method), cell(ci.level), cell(ci.point), cell(ci.lower), cell(ci.upper),
                  cell(ci.tau_hat), cell(ci.block_length)}}};
    return rep;
  }
};

struct ComboCommand {
  InputOptions input;
  std::vector<std::string> paths;
  std::vector<double> weights;
  std::string split_after;
  std::size_t blocks = 10;
  std::string method = "sn";
  double alpha = 0.05;
  std::size_t bootstrap = 1000;
  std::string multiplier = "rademacher";

  void add(CLI::App* sub) {
    sub->add_option("-i,--input", paths, "CSV file per period (repeatable)")->required();
    input.add_format(sub);
    sub->add_option("-w,--weights", weights, "weights beta_j, one per period")->delimiter(',');
    sub->add_option("--split-after", split_after, "split a single input after this index label");
    sub->add_option("-k,--blocks", blocks, "block length k_n")->check(CLI::PositiveNumber);
    sub->add_option("-m,--method", method, "sn or wb");
    sub->add_option("--alpha", alpha, "1 - confidence level");
    sub->add_option("-B,--bootstrap", bootstrap, "bootstrap replicates (wb)")->check(CLI::PositiveNumber);
    sub->add_option("--multiplier", multiplier, "rademacher or gaussian");
  }

  Report run(const Common& common) const {
    Report rep;
    rep.seed = common.seed;
    CombinationSpec spec;
    Json segments = Json::array();
    const auto add_segment = [&](std::vector<double> v, const std::string& label) {
      Json s;
      s["label"] = label;
      s["n"] = v.size();
      spec.segments.emplace_back(std::move(v));
      s["mean"] = spec.segments.back().mean();
      segments.push_back(s);
    };
    if (!split_after.empty()) {
      if (paths.size() != 1) throw InvalidArgument("--split-after needs exactly one input");
      const auto df = input.load(paths.front());
      rep.inputs.push_back(input_entry(df));
      const std::size_t cut = df.find_label(split_after);
      if (cut >= df.values.size()) throw InvalidArgument("--split-after leaves an empty second period");
      add_segment({df.values.begin(), df.values.begin() + static_cast<std::ptrdiff_t>(cut)},
                  df.label(1) + ".." + df.label(cut));
      add_segment({df.values.begin() + static_cast<std::ptrdiff_t>(cut), df.values.end()},
                  df.label(cut + 1) + ".." + df.label(df.values.size()));
    } else {
      for (const auto& p : paths) {
        const auto df = input.load(p);
        rep.inputs.push_back(input_entry(df));
        add_segment(df.values, p);
      }
    }
    spec.weights = weights;
    if (spec.weights.empty() && spec.segments.size() == 2) spec.weights = {1.0, -1.0};
    if (spec.weights.empty() && spec.segments.size() == 1) spec.weights = {1.0};
    if (spec.weights.size() != spec.segments.size()) {
      throw InvalidArgument("need one weight per period: " + std::to_string(spec.segments.size()) + " periods, " +
                            std::to_string(spec.weights.size()) + " weights");
    }
    const auto m = parse_interval_method(method);
    ConfidenceInterval ci;
    if (m == IntervalMethod::SN) {
      ci = combo_ci(spec, alpha, blocks);
    } else if (m == IntervalMethod::WB) {
      ci = combo_wb_ci(spec, alpha, blocks, MultiplierLaw::parse(multiplier),
                       BootstrapOptions{bootstrap, common.seed, common.threads});
    } else {
      throw InvalidArgument("ci-combo supports --method sn or wb");
    }
    rep.results["segments"] = segments;
    rep.results["weights"] = spec.weights;
    rep.results["lambda"] = spec.lambda();
    rep.results["interval"] = interval_json(ci);
    rep.data = {{"method", "level", "point", "lower", "upper", "tau_hat", "k"},
                {{to_string(ci.method), cell(ci.level), cell(ci.point), cell(ci.lower), cell(ci.upper),
                  cell(ci.tau_hat), cell(ci.block_length)}}};
    return rep;
  }
};

struct ChangepointCommand {
  InputOptions input;
  std::string test = "sn";
  double trim = kDefaultTrim;
  std::size_t blocks = 10;
  std::vector<std::size_t> schedule;
  std::size_t bootstrap = 1000;
  bool variance = false;
  std::string multiplier = "rademacher";

  void add(CLI::App* sub) {
    input.add(sub);
    sub->add_option("-t,--test", test, "sn, t1 or t2");
    sub->add_option("--c", trim, "trimming fraction c in (0, 1/2)");
    sub->add_option("-k,--blocks", blocks, "block length k_n")->check(CLI::PositiveNumber);
    sub->add_option("--k-schedule", schedule, "run once per block length, e.g. 12,14,16,18")->delimiter(',');
    sub->add_option("-B,--bootstrap", bootstrap, "bootstrap replicates")->check(CLI::PositiveNumber);
    sub->add_flag("--variance", variance, "test for a change in variance via (X_i - mean)^2");
    sub->add_option("--multiplier", multiplier, "rademacher or gaussian (sn test)");
  }

  Report run(const Common& common) const {
    Report rep;
    const auto df = input.load();
    rep.inputs.push_back(input_entry(df));
    rep.seed = common.seed;
    const auto which = parse_cusum_test(test);
    TimeSeries x = df.series();
    if (variance) {
      const double m = x.mean();
      std::vector<double> sq(x.size());
      std::transform(x.values().begin(), x.values().end(), sq.begin(), [m](double v) { return (v - m) * (v - m); });
      x = TimeSeries(std::move(sq));
    }
    const std::vector<std::size_t> ks = schedule.empty() ? std::vector<std::size_t>{blocks} : schedule;

    ChangePointOptions opts;
    opts.trim = trim;
    opts.law = MultiplierLaw::parse(multiplier);
    opts.bootstrap = {bootstrap, common.seed, common.threads};

    rep.results["test"] = to_string(which);
    rep.results["variance"] = variance;
    rep.results["n"] = x.size();
    rep.results["trim"] = trim;
    rep.results["bootstrap_replicates"] = bootstrap;
    Json runs = Json::array();
    std::vector<double> p_values;
    rep.data = {{"k", "j", "label", "value"}, {}};
    rep.summary = {{"k", "statistic", "j_hat", "label", "p_value", "tau_hat"}, {}};
    for (const std::size_t k : ks) {
      opts.block_length = k;
      const auto r = run_changepoint_test(which, x, opts);
      Json run;
      run["block_length"] = k;
      run["statistic"] = r.statistic;
      run["j_hat"] = r.j_hat;
      run["j_hat_label"] = df.label(r.j_hat);
      run["p_value"] = r.p_value;
      run["tau_hat"] = r.tau_hat;
      run["redraws"] = r.bootstrap.redraws;
      Json scan;
      scan["first"] = r.scan.range.first;
      scan["last"] = r.scan.range.last;
      scan["values"] = r.scan.values;
      run["scan"] = scan;
      runs.push_back(run);
      p_values.push_back(r.p_value);
      for (std::size_t j = r.scan.range.first; j <= r.scan.range.last; ++j) {
        rep.data.rows.push_back({cell(k), cell(j), df.label(j), cell(r.scan.at(j))});
      }
      rep.summary.rows.push_back(
          {cell(k), cell(r.statistic), cell(r.j_hat), df.label(r.j_hat), cell(r.p_value), cell(r.tau_hat)});
    }
    rep.results["p_value_schedule"] = p_values;
    rep.results["runs"] = runs;
    return rep;
  }
};

struct TrendCommand {
  InputOptions input;
  BlockOptions block;
  double alpha = 0.05;

  void add(CLI::App* sub) {
    input.add(sub);
    block.add(sub);
    sub->add_option("--alpha", alpha, "1 - confidence level");
  }

  Report run(const Common& common) const {
    Report rep;
    const auto df = input.load();
    rep.inputs.push_back(input_entry(df));
    rep.seed = common.seed;
    const auto x = df.series();
    const std::size_t k = block.resolve(x.size(), common.seed, common.threads, rep.results);
    const auto fit = fit_trend(x);
    const auto lrv = regression_lrv(fit, k);
    const auto b0 = trend_ci(fit, TrendCoefficient::Intercept, alpha, k);
    const auto b1 = trend_ci(fit, TrendCoefficient::Slope, alpha, k);

    const auto& r = fit.residuals;
    const double n = static_cast<double>(r.size());
    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
    double ss = 0.0, lag = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      ss += (r[i] - mean) * (r[i] - mean);
      if (i > 0) lag += (r[i] - mean) * (r[i - 1] - mean);
    }
    Json diag;
    diag["mean"] = mean;
    diag["sd"] = r.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    diag["lag1_autocorrelation"] = ss > 0.0 ? lag / ss : 0.0;
    diag["min"] = *std::min_element(r.begin(), r.end());
    diag["max"] = *std::max_element(r.begin(), r.end());

    const auto coef = [](const ConfidenceInterval& ci) {
      Json j;
      j["estimate"] = ci.point;
      j["lower"] = ci.lower;
      j["upper"] = ci.upper;
      return j;
    };
    rep.results["n"] = x.size();
    rep.results["block_length"] = k;
    rep.results["level"] = 1.0 - alpha;
    rep.results["intercept"] = coef(b0);
    rep.results["slope"] = coef(b1);
    rep.results["tau_sq_hat"] = lrv.tau_sq_hat;
    rep.results["v_n0"] = std::sqrt(fit.v_n0_sq);
    rep.results["v_n1"] = std::sqrt(fit.v_n1_sq);
    rep.results["residuals"] = diag;
    rep.data = {{"coefficient", "estimate", "lower", "upper", "tau_sq_hat", "k"},
                {{"intercept", cell(b0.point), cell(b0.lower), cell(b0.upper), cell(lrv.tau_sq_hat), cell(k)},
                 {"slope", cell(b1.point), cell(b1.lower), cell(b1.upper), cell(lrv.tau_sq_hat), cell(k)}}};
    return rep;
  }
};

struct LrvCommand {
  InputOptions input;
  BlockOptions block;
  std::string method = "selfnorm";

  void add(CLI::App* sub) {
    input.add(sub);
    block.add(sub);
    sub->add_option("--method", method, "selfnorm, stationary or regression")
        ->check(CLI::IsMember({"selfnorm", "stationary", "regression"}));
  }

  Report run(const Common& common) const {
    Report rep;
    const auto df = input.load();
    rep.inputs.push_back(input_entry(df));
    rep.seed = common.seed;
    const auto x = df.series();
    const std::size_t k = block.resolve(x.size(), common.seed, common.threads, rep.results);
    LongRunEstimate est;
    if (method == "selfnorm") {
      est = lrv_selfnorm(x, k);
    } else if (method == "stationary") {
      est = lrv_stationary(x, k);
    } else {
      est = regression_lrv(fit_trend(x), k);
    }
    rep.results["method"] = to_string(est.method);
    rep.results["n"] = x.size();
    rep.results["tau_sq_hat"] = est.tau_sq_hat;
    rep.results["block_length"] = est.block_length;
    rep.results["block_count"] = est.block_count;
    rep.results["d_values"] = est.d_values;
    rep.data = {{"block", "d"}, {}};
    for (std::size_t j = 0; j < est.d_values.size(); ++j) rep.data.rows.push_back({cell(j + 1), cell(est.d_values[j])});
    rep.summary = {{"method", "tau_sq_hat", "k", "blocks"},
                   {{to_string(est.method), cell(est.tau_sq_hat), cell(est.block_length), cell(est.block_count)}}};
    return rep;
  }
};

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  for (const auto& tok : split(text, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      const auto v = parse_int(tok);
      if (v < 1) throw InvalidArgument("grid entries must be positive");
      grid.push_back(static_cast<std::size_t>(v));
      continue;
    }
    const auto lo = parse_int(tok.substr(0, colon));
    const auto hi = parse_int(tok.substr(colon + 1));
    if (lo < 1 || hi < lo) throw InvalidArgument("bad grid range '" + tok + "'");
    for (auto v = lo; v <= hi; ++v) grid.push_back(static_cast<std::size_t>(v));
  }
  return grid;
}

struct SelectKCommand {
  std::size_t n = 0;
  std::string grid;
  std::size_t reps = kDefaultAutoReps;

  void add(CLI::App* sub) {
    sub->add_option("-n,--n", n, "sample size")->required()->check(CLI::PositiveNumber);
    sub->add_option("--grid", grid, "candidate k_n, e.g. 4:30 or 8,10,12; default 4..n/4");
    sub->add_option("--reps", reps, "simulation replications")->check(CLI::PositiveNumber);
  }

  Report run(const Common& common) const {
    Report rep;
    rep.seed = common.seed;
    const auto g = grid.empty() ? default_block_grid(n) : parse_grid(grid);
    const auto sel = select_block_length(n, g, reps, common.seed, common.threads);
    rep.results["n"] = n;
    rep.results["selection"] = selection_json(sel);
    rep.data = selection_table(sel);
    return rep;
  }
};

struct SimulateCommand {
  std::string config;
  std::optional<std::size_t> n, change_after, burn_in, truncation;
  std::optional<double> mu, lambda;
  std::optional<std::string> profile, error;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* sub) {
    sub->add_option("--config", config, "key-value model file; flags override its entries");
    sub->add_option("-n,--n", n, "sample size");
    sub->add_option("--mu", mu, "mean before the change");
    sub->add_option("--lambda", lambda, "mean shift");
    sub->add_option("--change-after", change_after, "last index before the shift");
    sub->add_option("--profile", profile, "A1..A4 or constant:<v>");
    sub->add_option("--error", error, "iid, B1:<theta> or B2:<beta>");
    sub->add_option("--burn-in", burn_in, "B1 burn-in steps");
    sub->add_option("--truncation", truncation, "B2 filter length J");
    sub->add_option("--seed", seed, "random seed");
  }

  [[nodiscard]] SimModel model() const {
    KeyValueConfig cfg;
    if (!config.empty()) cfg = KeyValueConfig::load(config);
    if (n) cfg.set("n", std::to_string(*n));
    if (mu) cfg.set("mu", format_double(*mu));
    if (lambda) cfg.set("lambda", format_double(*lambda));
    if (change_after) cfg.set("change_after", std::to_string(*change_after));
    if (profile) cfg.set("profile", *profile);
    if (error) cfg.set("error", *error);
    if (burn_in) cfg.set("burn_in", std::to_string(*burn_in));
    if (truncation) cfg.set("truncation", std::to_string(*truncation));
    if (seed) cfg.set("seed", std::to_string(*seed));
    return SimModel::from_config(cfg);
  }
};

struct ExperimentCommand {
  std::string config;
  std::optional<std::string> kind, profiles, errors, k, methods, lambda, multiplier;
  std::optional<std::size_t> n, reps, boot, calibration_reps, change_after;
  std::optional<double> alpha, trim;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  void add(CLI::App* sub) {
    sub->add_option("--kind", kind, "coverage, size or power");
    sub->add_option("--config", config, "key-value experiment file; flags override its entries");
    sub->add_option("-n,--n", n, "sample size");
    sub->add_option("--profiles", profiles, "comma list of A1..A4");
    sub->add_option("--errors", errors, "comma list of iid, B1:<theta>, B2:<beta>");
    sub->add_option("-k,--blocks", k, "comma list of block lengths");
    sub->add_option("--methods", methods, "comma list (coverage: sn,wb,st,bb,sbb; size/power: sn,t1,t2)");
    sub->add_option("--lambda", lambda, "comma list of mean shifts (power)");
    sub->add_option("--reps", reps, "Monte Carlo replications");
    sub->add_option("--boot", boot, "bootstrap replicates");
    sub->add_option("--calibration-reps", calibration_reps, "null replications for power calibration");
    sub->add_option("--change-after", change_after, "last index before the shift (power)");
    sub->add_option("--alpha", alpha, "nominal level");
    sub->add_option("--trim", trim, "CUSUM trimming fraction");
    sub->add_option("--multiplier", multiplier, "rademacher or gaussian");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--threads", threads, "worker threads (0: hardware)");
  }

  [[nodiscard]] ExperimentSpec spec() const {
    KeyValueConfig cfg;
    if (!config.empty()) cfg = KeyValueConfig::load(config);
    const auto set = [&](const char* key, const auto& v) {
      if (!v) return;
      if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, std::string>) {
        cfg.set(key, *v);
      } else if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
        cfg.set(key, format_double(*v));
      } else {
        cfg.set(key, std::to_string(*v));
      }
    };
    set("kind", kind);
    set("n", n);
    set("profiles", profiles);
    set("errors", errors);
    set("k", k);
    set("methods", methods);
    set("lambda", lambda);
    set("reps", reps);
    set("boot", boot);
    set("calibration_reps", calibration_reps);
    set("change_after", change_after);
    set("alpha", alpha);
    set("trim", trim);
    set("multiplier", multiplier);
    set("seed", seed);
    set("threads", threads);
    auto s = ExperimentSpec::from_config(cfg);
    s.validate();
    return s;
  }
};

Json experiment_json(const ExperimentResult& res) {
  Json cells = Json::array();
  for (const auto& c : res.cells) {
    Json j;
    j["profile"] = c.profile;
    j["error"] = c.error;
    j["k"] = c.block_length;
    j["method"] = c.method;
    j["lambda"] = c.lambda ? Json(*c.lambda) : Json(nullptr);
    j["rate"] = c.rate;
    j["se"] = c.standard_error;
    j["replications"] = c.replications;
    j["failures"] = c.failures;
    j["critical_value"] = c.critical_value ? Json(*c.critical_value) : Json(nullptr);
    cells.push_back(j);
  }
  Json spec;
  const auto cfg = res.spec.to_config();
  for (const auto& [key, value] : cfg.entries()) spec[key] = value;
  Json out;
  out["kind"] = to_string(res.spec.kind);
  out["spec"] = spec;
  out["cells"] = cells;
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write '" + path + "'");
  f << text;
  if (!f) throw std::ios_base::failure("write failed for '" + path + "'");
}

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "snts";
  for (const auto& a : args) out += " " + a;
  return out;
}

std::string render(const Report& rep, const std::string& format, const std::vector<std::string>& args,
                   double wall_seconds) {
  if (format == "csv") return rep.csv_text ? *rep.csv_text : render_csv(rep.data);
  if (format == "table") {
    if (rep.table_text) return *rep.table_text;
    return render_table(rep.summary.empty() ? rep.data : rep.summary);
  }
  Json j;
  j["command"] = join_args(args);
  j["version"] = version();
  j["seed"] = rep.seed ? Json(*rep.seed) : Json(nullptr);
  j["inputs"] = rep.inputs;
  j["results"] = rep.results;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-normalized inference for time series with time-varying variance", "snts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Common common;
  CiCommand ci;
  ComboCommand combo;
  ChangepointCommand cp;
  TrendCommand trend;
  LrvCommand lrv;
  SelectKCommand selk;
  SimulateCommand sim;
  ExperimentCommand exp;
  std::string sim_out, exp_out, exp_format = "table";

  auto* s_ci = app.add_subcommand("ci", "confidence interval for the mean");
  ci.add(s_ci);
  common.add(s_ci);
  auto* s_combo = app.add_subcommand("ci-combo", "interval for a weighted combination of period means");
  combo.add(s_combo);
  common.add(s_combo);
  auto* s_cp = app.add_subcommand("changepoint", "CUSUM test for a change in mean (or variance)");
  cp.add(s_cp);
  common.add(s_cp);
  auto* s_trend = app.add_subcommand("trend", "linear trend fit with self-normalized intervals");
  trend.add(s_trend);
  common.add(s_trend);
  auto* s_lrv = app.add_subcommand("lrv", "blockwise long-run variance");
  lrv.add(s_lrv);
  common.add(s_lrv);
  auto* s_selk = app.add_subcommand("select-k", "choose the block length by simulation");
  selk.add(s_selk);
  common.add(s_selk);
  auto* s_sim = app.add_subcommand("simulate", "generate a series; CSV to --out or stdout");
  sim.add(s_sim);
  s_sim->add_option("-o,--out", sim_out, "CSV output file");
  auto* s_exp = app.add_subcommand("experiment", "Monte Carlo coverage / size / power study");
  exp.add(s_exp);
  s_exp->add_option("-o,--out", exp_out, "long-form CSV of all cells");
  s_exp->add_option("--format", exp_format, "stdout report: json, csv or table")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  std::vector<std::string> argv_store{"snts"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto t0 = Clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };
  const auto emit = [&](const Report& rep) {
    const auto text = render(rep, common.format, args, elapsed());
    if (common.out_path.empty()) {
      out << text;
    } else {
      write_file(common.out_path, text);
    }
  };

  if (s_ci->parsed()) emit(ci.run(common));
  if (s_combo->parsed()) emit(combo.run(common));
  if (s_cp->parsed()) emit(cp.run(common));
  if (s_trend->parsed()) emit(trend.run(common));
  if (s_lrv->parsed()) emit(lrv.run(common));
  if (s_selk->parsed()) emit(selk.run(common));

  if (s_sim->parsed()) {
    const auto model = sim.model();
    const auto x = generate(model);
    const std::vector<double> values(x.values().begin(), x.values().end());
    const auto csv = series_to_csv(values);
    if (sim_out.empty()) {
      out << csv;
    } else {
      write_file(sim_out, csv);
      Report rep;
      rep.seed = model.seed;
      Json m;
      const auto cfg = model.to_config();
      for (const auto& [key, value] : cfg.entries()) m[key] = value;
      rep.results["model"] = m;
      rep.results["out"] = sim_out;
      rep.results["rows"] = values.size();
      rep.results["digest"] = digest(values);
      out << render(rep, "json", args, elapsed());
    }
  }

  if (s_exp->parsed()) {
    const auto spec = exp.spec();
    const auto res = run_experiment(spec);
    if (!exp_out.empty()) write_file(exp_out, res.to_csv());
    Report rep;
    rep.seed = spec.master_seed;
    rep.results = experiment_json(res);
    if (!exp_out.empty()) rep.results["out"] = exp_out;
    rep.csv_text = res.to_csv();
    rep.table_text = res.to_table();
    out << render(rep, exp_format, args, elapsed());
  }
  return kExitOk;
}

}  // namespace

const char* version() noexcept { return SNTS_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const ParseError& e) {
    err << "snts: parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InfeasibleParameters& e) {
    err << "snts: infeasible parameters: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const DegenerateData& e) {
    err << "snts: degenerate data: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const InvalidArgument& e) {
    err << "snts: invalid argument: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::ios_base::failure& e) {
    err << "snts: i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "snts: error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace snts::cli
