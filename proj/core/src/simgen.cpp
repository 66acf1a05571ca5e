#include "snts/simgen.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "snts/error.hpp"
#include "snts/normal.hpp"
#include "snts/random.hpp"

namespace snts {

namespace {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

void check_theta(double theta) {
  if (!(std::abs(theta) < 1.0)) throw InvalidArgument("B1 requires |theta| < 1, got " + format_number(theta));
}

void check_beta(double beta) {
  if (!(beta > 0.5)) throw InvalidArgument("B2 requires beta > 1/2, got " + format_number(beta));
}

}  // namespace

std::string SigmaProfile::name() const {
  switch (kind) {
    case Kind::A1: return "A1";
    case Kind::A2: return "A2";
    case Kind::A3: return "A3";
    case Kind::A4: return "A4";
    case Kind::Constant: return "constant:" + format_number(value);
    case Kind::Custom: return "custom";
  }
  return "?";
}

SigmaProfile SigmaProfile::parse(const std::string& text) {
  const std::string t = upper(trim(text));
  if (t == "A1") return a1();
  if (t == "A2") return a2();
  if (t == "A3") return a3();
  if (t == "A4") return a4();
  if (t.rfind("CONSTANT:", 0) == 0) {
    const double v = parse_double(t.substr(9));
    if (!(v > 0.0)) throw InvalidArgument("constant sigma must be positive");
    return constant(v);
  }
  throw ParseError("unknown sigma profile '" + text + "' (expected A1..A4 or constant:<v>)");
}

std::vector<double> sigma_values(const SigmaProfile& profile, std::size_t n) {
  if (n < 1) throw InvalidArgument("sigma profile needs n >= 1");
  std::vector<double> s(n);
  const double dn = static_cast<double>(n);
  switch (profile.kind) {
    case SigmaProfile::Kind::A1:
      for (std::size_t i = 1; i <= n; ++i) s[i - 1] = i <= n / 2 ? 0.2 : 0.6;
      break;
    case SigmaProfile::Kind::A2: {
      const double scale = std::pow(dn, 0.8);
      for (std::size_t i = 1; i <= n; ++i) {
        const double c = std::cos(static_cast<double>(i) / scale);
        s[i - 1] = 0.2 * (1.0 + c * c);
      }
      break;
    }
    case SigmaProfile::Kind::A3:
      for (std::size_t i = 1; i <= n; ++i) s[i - 1] = 0.2 + 0.1 * std::log(1.0 + std::abs(static_cast<double>(i) - dn / 2.0));
      break;
    case SigmaProfile::Kind::A4:
      for (std::size_t i = 1; i <= n; ++i) s[i - 1] = 0.3 + normal_pdf(static_cast<double>(i) / 60.0);
      break;
    case SigmaProfile::Kind::Constant:
      if (!(profile.value > 0.0)) throw InvalidArgument("constant sigma must be positive");
      std::fill(s.begin(), s.end(), profile.value);
      break;
    case SigmaProfile::Kind::Custom:
      if (profile.custom.size() != n) {
        throw InvalidArgument("custom sigma has " + std::to_string(profile.custom.size()) + " values, need " + std::to_string(n));
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (!(profile.custom[i] > 0.0) || !std::isfinite(profile.custom[i])) {
          throw InvalidArgument("custom sigma must be positive and finite (index " + std::to_string(i + 1) + ")");
        }
      }
      s = profile.custom;
      break;
  }
  return s;
}

std::string ErrorModel::name() const {
  switch (kind) {
    case Kind::IIDGaussian: return "iid";
    case Kind::B1: return "B1:" + format_number(theta);
    case Kind::B2: return "B2:" + format_number(beta);
  }
  return "?";
}

ErrorModel ErrorModel::parse(const std::string& text) {
  const std::string t = upper(trim(text));
  if (t == "IID") return iid();
  if (t.rfind("B1:", 0) == 0) {
    const double theta = parse_double(t.substr(3));
    check_theta(theta);
    return b1(theta);
  }
  if (t.rfind("B2:", 0) == 0) {
    const double beta = parse_double(t.substr(3));
    check_beta(beta);
    return b2(beta);
  }
  throw ParseError("unknown error model '" + text + "' (expected iid, B1:<theta> or B2:<beta>)");
}

std::vector<double> innovations(std::uint64_t seed, std::size_t count) {
  std::vector<double> eps(count);
  auto eng = make_engine(derive_seed(seed, "innovations"));
  fill_standard_normal(eng, eps);
  return eps;
}

std::vector<double> gen_b1(std::size_t n, double theta, std::uint64_t seed, std::size_t burn_in) {
  check_theta(theta);
  const double scale = std::sqrt(1.0 - theta * theta);
  double eta = 0.0;
  if (burn_in > 0) {
    auto burn = make_engine(derive_seed(seed, "burn-in"));
    std::normal_distribution<double> dist(0.0, 1.0);
    for (std::size_t i = 0; i < burn_in; ++i) eta = theta * std::abs(eta) + scale * dist(burn);
  }
  const double mean = theta * std::sqrt(2.0 / std::numbers::pi);
  const double sd = std::sqrt(1.0 - 2.0 * theta * theta / std::numbers::pi);
  std::vector<double> e = innovations(seed, n);
  for (double& v : e) {
    eta = theta * std::abs(eta) + scale * v;
    v = (eta - mean) / sd;
  }
  return e;
}

std::size_t default_truncation(double beta) {
  check_beta(beta);
  constexpr std::size_t cap = 100000;
  // (J+1)^{-beta} < 1e-10  <=>  J + 1 > 10^{10/beta}
  const double bound = std::pow(10.0, 10.0 / beta);
  if (bound >= static_cast<double>(cap)) return cap;
  auto j = static_cast<std::size_t>(std::floor(bound));  // J + 1 = floor(bound) + 1 > bound
  while (j > 0 && std::pow(static_cast<double>(j), -beta) < 1e-10) --j;
  while (std::pow(static_cast<double>(j + 1), -beta) >= 1e-10) ++j;
  return std::min(j, cap);
}

std::vector<double> b2_coefficients(double beta, std::size_t truncation) {
  check_beta(beta);
  std::vector<double> a(truncation + 1);
  double ss = 0.0;
  // sum smallest terms first
  for (std::size_t j = truncation + 1; j-- > 0;) {
    a[j] = std::pow(static_cast<double>(j + 1), -beta);
    ss += a[j] * a[j];
  }
  const double norm = std::sqrt(ss);
  for (double& v : a) v /= norm;
  return a;
}

std::vector<double> gen_b2(std::size_t n, double beta, std::uint64_t seed, std::optional<std::size_t> truncation) {
  const std::size_t J = truncation.value_or(default_truncation(beta));
  const std::vector<double> a = b2_coefficients(beta, J);
  // stream order: eps_1..eps_n, then eps_0, eps_{-1}, ..., eps_{1-J}
  const std::vector<double> raw = innovations(seed, n + J);
  // eps_t for t in [1-J, n] stored at offset t - (1-J)
  std::vector<double> eps(n + J);
  for (std::size_t i = 0; i < n; ++i) eps[J + i] = raw[i];
  for (std::size_t m = 0; m < J; ++m) eps[J - 1 - m] = raw[n + m];

  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // e_{i+1} = sum_j a_j eps_{i+1-j}; eps_{i+1-j} at offset J + i - j
    const double* base = eps.data() + J + i;
    double acc = 0.0;
    for (std::size_t j = J + 1; j-- > 0;) acc += a[j] * *(base - j);
    e[i] = acc;
  }
  return e;
}

std::vector<double> gen_errors(const ErrorModel& model, std::size_t n, std::uint64_t seed) {
  switch (model.kind) {
    case ErrorModel::Kind::IIDGaussian: return innovations(seed, n);
    case ErrorModel::Kind::B1: return gen_b1(n, model.theta, seed, model.burn_in);
    case ErrorModel::Kind::B2: return gen_b2(n, model.beta, seed, model.truncation);
  }
  throw InvalidArgument("unknown error model");
}

std::vector<double> generate_values(const SimModel& model, const std::vector<double>& sigma) {
  if (sigma.size() != model.n) throw InvalidArgument("sigma length does not match n");
  std::vector<double> x = gen_errors(model.error, model.n, model.seed);
  for (std::size_t i = 0; i < model.n; ++i) {
    const double mu = model.mu + (i + 1 > model.change_after ? model.lambda : 0.0);
    x[i] = mu + sigma[i] * x[i];
  }
  return x;
}

TimeSeries generate(const SimModel& model) {
  if (model.n < 1) throw InvalidArgument("model length n must be positive");
  return TimeSeries(generate_values(model, sigma_values(model.sigma, model.n)));
}

KeyValueConfig SimModel::to_config() const {
  KeyValueConfig cfg;
  cfg.set("n", std::to_string(n));
  cfg.set("mu", format_number(mu));
  cfg.set("lambda", format_number(lambda));
  cfg.set("change_after", std::to_string(change_after));
  cfg.set("profile", sigma.name());
  cfg.set("error", error.name());
  cfg.set("burn_in", std::to_string(error.burn_in));
  if (error.truncation) cfg.set("truncation", std::to_string(*error.truncation));
  cfg.set("seed", std::to_string(seed));
  return cfg;
}

SimModel SimModel::from_config(const KeyValueConfig& cfg) {
  SimModel m;
  const auto n = cfg.get_int("n", static_cast<std::int64_t>(m.n));
  if (n < 1) throw InvalidArgument("n must be positive");
  m.n = static_cast<std::size_t>(n);
  m.mu = cfg.get_double("mu", 0.0);
  m.lambda = cfg.get_double("lambda", 0.0);
  const auto j0 = cfg.get_int("change_after", 0);
  if (j0 < 0) throw InvalidArgument("change_after must be nonnegative");
  m.change_after = static_cast<std::size_t>(j0);
  m.sigma = SigmaProfile::parse(cfg.get_string("profile", "constant:1"));
  m.error = ErrorModel::parse(cfg.get_string("error", "iid"));
  const auto burn = cfg.get_int("burn_in", static_cast<std::int64_t>(ErrorModel::kDefaultBurnIn));
  if (burn < 0) throw InvalidArgument("burn_in must be nonnegative");
  m.error.burn_in = static_cast<std::size_t>(burn);
  if (cfg.contains("truncation")) {
    const auto t = cfg.get_int("truncation", 0);
    if (t < 0) throw InvalidArgument("truncation must be nonnegative");
    m.error.truncation = static_cast<std::size_t>(t);
  }
  m.seed = cfg.get_uint("seed", 0);
  return m;
}

}  // namespace snts
