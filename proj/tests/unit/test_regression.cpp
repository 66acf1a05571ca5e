#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "snts/error.hpp"
#include "snts/normal.hpp"
#include "snts/regression.hpp"
#include "snts/simgen.hpp"

using namespace snts;

TEST_CASE("trend fit hand examples") {
  const auto flat = fit_trend(TimeSeries(std::vector<double>(10, 4.5)));
  CHECK(flat.beta1_hat == doctest::Approx(0.0));
  CHECK(flat.beta0_hat == doctest::Approx(4.5));
  for (double r : flat.residuals) CHECK(std::abs(r) < 1e-12);

  const auto two = fit_trend(TimeSeries({0.0, 1.0}));
  CHECK(two.beta1_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.beta0_hat == doctest::Approx(-1.0).epsilon(1e-12));

  std::vector<double> line(50);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 1.0 + (i + 1.0) / 50.0;
  const auto exact = fit_trend(TimeSeries(line));
  CHECK(exact.beta0_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.beta1_hat == doctest::Approx(1.0).epsilon(1e-12));
  for (double r : exact.residuals) CHECK(std::abs(r) < 1e-12);
  CHECK_THROWS_AS((void)trend_ci(exact, TrendCoefficient::Slope, 0.05, 5), DegenerateData);
  CHECK_THROWS_AS((void)trend_ci(flat, TrendCoefficient::Intercept, 0.05, 5), DegenerateData);
  CHECK_THROWS((void)fit_trend(TimeSeries({1.0})));
}

TEST_CASE("trend fit matches the normal-equations oracle") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto x = oracle::random_vector(3 + seed * 3, seed, -20.0, 20.0);
    const auto fit = fit_trend(TimeSeries(x));
    const auto ref = oracle::ols_line(x);
    CHECK(oracle::rel_close(fit.beta0_hat, ref.b0, 1e-10));
    CHECK(oracle::rel_close(fit.beta1_hat, ref.b1, 1e-10));
  }
}

TEST_CASE("residual orthogonality and weighted sums") {
  const auto x = oracle::random_vector(97, 5, 0.0, 100.0);
  const auto fit = fit_trend(TimeSeries(x));
  const double n = 97.0;
  double s0 = 0.0, s1 = 0.0, scale = 0.0, v0 = 0.0, v1 = 0.0;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    const double r = fit.residuals[i - 1];
    s0 += r;
    s1 += i * r;
    scale += i * std::abs(r);
    v0 += (2 * n - 3.0 * i + 1) * (2 * n - 3.0 * i + 1) * r * r;
    v1 += (2.0 * i - n - 1) * (2.0 * i - n - 1) * r * r;
  }
  CHECK(std::abs(s0) <= 1e-8 * scale);
  CHECK(std::abs(s1) <= 1e-8 * scale);
  CHECK(oracle::rel_close(fit.v_n0_sq, v0, 1e-10));
  CHECK(oracle::rel_close(fit.v_n1_sq, v1, 1e-10));
}

TEST_CASE("slope weights for n = 3 sum to zero") {
  double s = 0.0;
  std::vector<double> w;
  for (int i = 1; i <= 3; ++i) {
    w.push_back(2.0 * i - 3 - 1);
    s += w.back();
  }
  CHECK(w == std::vector<double>{-2.0, 0.0, 2.0});
  CHECK(s == 0.0);
}

TEST_CASE("regression long-run variance hand examples") {
  const auto a = regression_lrv(std::vector<double>{1.0, -1.0, 1.0, -1.0}, 2);
  CHECK(a.d_values == std::vector<double>{0.0, 0.0});
  CHECK(a.tau_sq_hat == 0.0);
  const auto b = regression_lrv(std::vector<double>{1.0, 1.0, -1.0, -1.0}, 2);
  CHECK(oracle::rel_close(b.d_values[0], std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.d_values[1], -std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.tau_sq_hat, 2.0, 1e-12));
  CHECK(b.method == LongRunEstimate::Method::Regression);
}

TEST_CASE("regression D values are scale invariant") {
  const auto r = oracle::random_vector(60, 8);
  std::vector<double> s(r);
  for (double& v : s) v *= 13.0;
  const auto a = regression_lrv(r, 6);
  const auto b = regression_lrv(s, 6);
  for (std::size_t j = 0; j < a.d_values.size(); ++j) CHECK(oracle::rel_close(a.d_values[j], b.d_values[j], 1e-12));
}

TEST_CASE("trend fit equivariance") {
  SimModel m;
  m.n = 150;
  m.sigma = SigmaProfile::a2();
  m.error = ErrorModel::b1(0.4);
  m.seed = 3;
  const auto x = generate(m);
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v = -2.0 * v + 5.0;
  const auto f = fit_trend(x);
  const auto g = fit_trend(TimeSeries(y));
  CHECK(oracle::rel_close(g.beta0_hat, -2.0 * f.beta0_hat + 5.0, 1e-10));
  CHECK(oracle::rel_close(g.beta1_hat, -2.0 * f.beta1_hat, 1e-10));
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(g.residuals[i] + 2.0 * f.residuals[i]) < 1e-10);
  for (auto which : {TrendCoefficient::Intercept, TrendCoefficient::Slope}) {
    CHECK(oracle::rel_close(trend_ci(g, which, 0.05, 10).width(), 2.0 * trend_ci(f, which, 0.05, 10).width(), 1e-10));
  }
}

TEST_CASE("trend interval half-widths") {
  const auto x = oracle::random_vector(100, 2);
  const auto fit = fit_trend(TimeSeries(x));
  const double tau = regression_lrv(fit, 10).tau_hat();
  const double z = normal_quantile(0.975);
  const auto b0 = trend_ci(fit, TrendCoefficient::Intercept, 0.05, 10);
  const auto b1 = trend_ci(fit, TrendCoefficient::Slope, 0.05, 10);
  CHECK(oracle::rel_close(b0.upper - b0.point, z * tau * 2.0 * std::sqrt(fit.v_n0_sq) / 1e4, 1e-12));
  CHECK(oracle::rel_close(b1.upper - b1.point, z * tau * 6.0 * std::sqrt(fit.v_n1_sq) / 1e4, 1e-12));
}

TEST_CASE("residual long-run variance is consistent") {
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto e = innovations(4000 + seed, 5000);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += 2.0 - 3.0 * (i + 1.0) / 5000.0;
    sum += regression_lrv(fit_trend(TimeSeries(e)), 25).tau_sq_hat;
  }
  CHECK(sum / 100.0 >= 0.9);
  CHECK(sum / 100.0 <= 1.1);
}

TEST_CASE("slope interval coverage") {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    SimModel m;
    m.n = 240;
    m.sigma = SigmaProfile::a2();
    m.error = ErrorModel::b1(0.4);
    m.seed = 20000 + seed;
    auto x = generate(m);
    std::vector<double> y(x.begin(), x.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += 1.0 + 2.0 * (i + 1.0) / 240.0;
    covered += trend_ci(fit_trend(TimeSeries(y)), TrendCoefficient::Slope, 0.05, 15).covers(2.0);
  }
  // The long-run coverage at this (n, k) is about 91%, right at the lower end of
  // the 91-98% band, so the lower bound allows three binomial standard errors.
  CHECK(covered >= 440);
  CHECK(covered <= 490);
}
