#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "snts/error.hpp"
#include "snts/lrv.hpp"
#include "snts/simgen.hpp"

using namespace snts;

TEST_CASE("self-normalized estimator hand examples") {
  const auto a = lrv_selfnorm(TimeSeries({0.0, 2.0, 0.0, 2.0}), 2);
  CHECK(a.d_values == std::vector<double>{0.0, 0.0});
  CHECK(a.tau_sq_hat == 0.0);

  const auto b = lrv_selfnorm(TimeSeries({0.0, 2.0, 2.0, 4.0}), 2);
  REQUIRE(b.d_values.size() == 2);
  CHECK(oracle::rel_close(b.d_values[0], -std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.d_values[1], std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.tau_sq_hat, 2.0, 1e-12));
  CHECK(b.block_length == 2);
  CHECK(b.block_count == 2);
  CHECK(b.method == LongRunEstimate::Method::SelfNormalized);
}

TEST_CASE("stationary estimator hand examples") {
  const auto b = lrv_stationary(TimeSeries({0.0, 2.0, 2.0, 4.0}), 2);
  CHECK(oracle::rel_close(b.d_values[0], -std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.d_values[1], std::sqrt(2.0), 1e-12));
  CHECK(oracle::rel_close(b.tau_sq_hat, 2.0, 1e-12));
  CHECK(lrv_stationary(TimeSeries(std::vector<double>(9, 3.0)), 3).tau_sq_hat == 0.0);
}

TEST_CASE("degenerate block is a hard error") {
  CHECK_THROWS_AS((void)lrv_selfnorm(TimeSeries({1.0, 1.0, 0.0, 2.0}), 2), DegenerateData);
  CHECK_FALSE(lrv_selfnorm_value(std::vector<double>{1.0, 1.0, 0.0, 2.0}, 2).has_value());
  CHECK_THROWS_AS((void)lrv_selfnorm(TimeSeries({1.0, 2.0, 3.0}), 2), InfeasibleParameters);
}

TEST_CASE("estimators match brute-force block oracles") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const std::size_t n = 30 + 7 * seed;
    const std::size_t k = 3 + seed % 9;
    const auto x = oracle::random_vector(n, seed);
    const auto sn = lrv_selfnorm(x, k);
    const auto d = oracle::lrv_selfnorm_d(x, k);
    REQUIRE(sn.d_values.size() == d.size());
    for (std::size_t j = 0; j < d.size(); ++j) CHECK(oracle::rel_close(sn.d_values[j], d[j], 1e-10));
    CHECK(oracle::rel_close(sn.tau_sq_hat, oracle::mean_square(d), 1e-10));
    CHECK(sn.tau_sq_hat == doctest::Approx(*lrv_selfnorm_value(x, k)).epsilon(1e-12));

    const auto st = lrv_stationary(x, k);
    const auto ds = oracle::lrv_stationary_d(x, k);
    for (std::size_t j = 0; j < ds.size(); ++j) CHECK(oracle::rel_close(st.d_values[j], ds[j], 1e-10));
    CHECK(oracle::rel_close(st.tau_sq_hat, oracle::mean_square(ds), 1e-10));
    CHECK(st.tau_sq_hat == doctest::Approx(lrv_stationary_value(x, k)).epsilon(1e-12));
  }
}

TEST_CASE("tau_sq_hat is the mean of squared D values") {
  const auto x = oracle::random_vector(103, 5);
  for (std::size_t k : {4u, 10u, 25u}) {
    const auto e = lrv_selfnorm(x, k);
    double s = 0.0;
    for (double d : e.d_values) s += d * d;
    CHECK(e.tau_sq_hat == s / e.d_values.size());
    CHECK(e.d_values.size() == e.block_count);
    CHECK(e.tau_sq_hat >= 0.0);
  }
}

TEST_CASE("scale and shift behaviour") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = oracle::random_vector(120, seed);
    for (double c : {0.01, -2.5, 40.0}) {
      std::vector<double> y(x);
      for (auto& v : y) v = c * v + 17.0;
      CHECK(oracle::rel_close(lrv_selfnorm(y, 10).tau_sq_hat, lrv_selfnorm(x, 10).tau_sq_hat, 1e-10));
      CHECK(oracle::rel_close(lrv_stationary(y, 10).tau_sq_hat, c * c * lrv_stationary(x, 10).tau_sq_hat, 1e-10));
    }
  }
}

TEST_CASE("default grid") {
  const auto g = default_block_grid(120);
  CHECK(g.front() == 4);
  CHECK(g.back() == 30);
  for (std::size_t k : g) CHECK(120 / k >= 4);
  CHECK(default_block_grid(12).empty());
}

TEST_CASE("block length selection basics") {
  const auto sel = select_block_length(120, {4, 8, 12, 16, 200}, 200, 3);
  CHECK(sel.replications == 200);
  REQUIRE(sel.table.size() == 5);
  CHECK_FALSE(sel.table.back().feasible);
  CHECK_FALSE(sel.table.back().note.empty());
  CHECK(sel.best != 200);
  for (const auto& e : sel.table) {
    if (e.feasible) {
      CHECK(e.mse >= 0.0);
      CHECK(e.mse <= sel.table[0].mse + 10.0);
    }
  }
  const auto best = std::min_element(sel.table.begin(), sel.table.end() - 1,
                                     [](const auto& a, const auto& b) { return a.mse < b.mse; });
  CHECK(best->block_length == sel.best);
  CHECK_THROWS_AS((void)select_block_length(10, {6, 8}, 10, 1), InfeasibleParameters);
}

TEST_CASE("block length selection is independent of the thread count") {
  const auto a = select_block_length(200, default_block_grid(200), 300, 17, 1);
  const auto b = select_block_length(200, default_block_grid(200), 300, 17, 4);
  CHECK(a.best == b.best);
  REQUIRE(a.table.size() == b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) CHECK(a.table[i].mse == b.table[i].mse);
}

TEST_CASE("consistency on i.i.d. Gaussian data") {
  // k (mean_j - mean) / V(j) is sqrt(k/(k-1)) t_{k-1} for Gaussian blocks, so
  // the self-normalized estimator has mean k/(k-3), not 1, at fixed k.
  double sum_sn = 0.0, sum_st = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = innovations(1000 + seed, 5000);
    sum_sn += lrv_selfnorm(x, 25).tau_sq_hat;
    sum_st += lrv_stationary(x, 25).tau_sq_hat;
  }
  CHECK(std::abs(sum_sn / 100.0 - 25.0 / 22.0) <= 0.03);
  CHECK(sum_st / 100.0 >= 0.9);
  CHECK(sum_st / 100.0 <= 1.1);
}
