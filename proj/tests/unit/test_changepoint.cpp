#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "snts/changepoint.hpp"
#include "snts/error.hpp"
#include "snts/simgen.hpp"

using namespace snts;

namespace {

std::vector<double> sim_values(std::size_t n, const SigmaProfile& p, const ErrorModel& e, std::uint64_t seed,
                               double lambda = 0.0, std::size_t change_after = 40) {
  SimModel m;
  m.n = n;
  m.sigma = p;
  m.error = e;
  m.seed = seed;
  m.lambda = lambda;
  m.change_after = change_after;
  const auto x = generate(m);
  return {x.begin(), x.end()};
}

ChangePointOptions options(std::size_t B, std::uint64_t seed, std::size_t k = 10) {
  ChangePointOptions o;
  o.block_length = k;
  o.bootstrap = {B, seed, 1};
  return o;
}

}  // namespace

TEST_CASE("trimmed range") {
  CHECK(trimmed_range(120, 0.1) == IndexRange{12, 108});
  CHECK(trimmed_range(4, 0.4) == IndexRange{2, 2});
  CHECK(trimmed_range(10, 0.05) == IndexRange{1, 9});
  CHECK_THROWS_AS((void)trimmed_range(120, 0.5), InvalidArgument);
  CHECK_THROWS_AS((void)trimmed_range(120, 0.0), InvalidArgument);
  CHECK_THROWS_AS((void)trimmed_range(3, 0.45), InfeasibleParameters);
}

TEST_CASE("CUSUM contrast hand examples") {
  CHECK(sx(TimeSeries({1.0, 2.0, 3.0, 4.0}), 2) == -2.0);
  CHECK(sx(TimeSeries({6.0, 7.0, 8.0, 9.0}), 2) == -2.0);
  const TimeSeries c(std::vector<double>(9, 2.5));
  for (std::size_t j = 1; j < 9; ++j) CHECK(std::abs(sx(c, j)) < 1e-14);
  CHECK_THROWS_AS((void)sx(c, 9), InvalidArgument);
}

TEST_CASE("CUSUM contrast matches the brute-force oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto x = oracle::random_vector(10 + seed, seed);
    for (std::size_t j = 1; j < x.size(); ++j) CHECK(oracle::rel_close(sx(TimeSeries(x), j), oracle::sx(x, j), 1e-12));
  }
}

TEST_CASE("classical scan hand example") {
  const TimeSeries x({0.0, 2.0, 1.0, 3.0});
  const auto t2 = classical_scan(x, 0.4, 1.0, CusumTest::T2);
  REQUIRE(t2.values.size() == 1);
  CHECK(t2.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  const auto t1 = classical_scan(x, 0.4, 1.0, CusumTest::T1);
  CHECK(t1.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t1.j_hat == 2);

  const auto zero = classical_scan(TimeSeries(std::vector<double>(20, 1.0)), 0.1, 1.0, CusumTest::T1);
  for (double v : zero.values) CHECK(v < 1e-14);
}

TEST_CASE("classical scan matches oracle and breaks ties to the smallest j") {
  const auto x = oracle::random_vector(57, 3);
  const auto scan = classical_scan(TimeSeries(x), 0.1, 1.7, CusumTest::T1);
  for (std::size_t j = scan.range.first; j <= scan.range.last; ++j) {
    const double w = std::sqrt(j * (1.0 - j / 57.0));
    CHECK(oracle::rel_close(scan.at(j), std::abs(oracle::sx(x, j)) / (1.7 * w), 1e-10));
  }

  std::vector<double> alt(40);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  const auto tied = classical_scan(TimeSeries(alt), 0.1, 1.0, CusumTest::T2);
  CHECK(tied.j_hat == 5);  // range starts at 4; |S| = 1 at every odd j
}

TEST_CASE("self-normalized scan hand example") {
  const auto scan = sn_scan(TimeSeries({0.0, 2.0, 1.0, 3.0}), 0.4);
  REQUIRE(scan.values.size() == 1);
  CHECK(scan.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(scan.max_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scan.j_hat == 2);
}

TEST_CASE("self-normalized scan equals the O(n^2) recomputation") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 5 + (seed * 37) % 196;
    const auto x = oracle::random_vector(n, 100 + seed);
    const auto scan = sn_scan(TimeSeries(x), 0.1);
    double best = -1.0;
    std::size_t arg = 0;
    for (std::size_t j = scan.range.first; j <= scan.range.last; ++j) {
      const double r = oracle::sn_ratio(x, j);
      CHECK(oracle::rel_close(scan.at(j), r, 1e-10));
      if (std::abs(r) > best) {
        best = std::abs(r);
        arg = j;
      }
    }
    CHECK(scan.j_hat == arg);
    CHECK(oracle::rel_close(scan.max_value, best, 1e-10));
  }
}

TEST_CASE("self-normalized scan is affine invariant") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = sim_values(120, SigmaProfile::a1(), ErrorModel::b1(0.4), seed, 0.5);
    const auto base = sn_scan(TimeSeries(x), 0.1);
    for (double c : {0.3, 25.0, -2.0}) {
      std::vector<double> y(x);
      for (double& v : y) v = c * v - 8.0;
      const auto s = sn_scan(TimeSeries(y), 0.1);
      CHECK(s.j_hat == base.j_hat);
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        CHECK(oracle::rel_close(std::abs(s.values[i]), std::abs(base.values[i]), 1e-10));
      }
    }
  }
}

TEST_CASE("constant data") {
  const TimeSeries c(std::vector<double>(50, 3.0));
  CHECK_THROWS_AS((void)sn_scan(c, 0.1), DegenerateData);
  try {
    (void)sn_scan(c, 0.1);
  } catch (const DegenerateData& e) {
    CHECK(std::string(e.what()).find("degenerate scan") != std::string::npos);
  }
  for (auto t : {CusumTest::T1, CusumTest::T2}) {
    const auto rep = classical_test(c, t, options(99, 1));
    CHECK(rep.statistic == 0.0);
    CHECK(rep.p_value == 1.0);
  }
}

TEST_CASE("variance transform of a two-level alternating series is degenerate") {
  CHECK_THROWS_AS((void)variance_change_test(TimeSeries({0.0, 2.0, 0.0, 2.0}), options(20, 1, 1)), DegenerateData);
}

TEST_CASE("p-value follows the add-one formula") {
  const auto x = sim_values(120, SigmaProfile::a2(), ErrorModel::b1(0.4), 5, 0.3);
  for (auto t : {CusumTest::SN, CusumTest::T1, CusumTest::T2}) {
    const auto rep = run_changepoint_test(t, TimeSeries(x), options(199, 9));
    std::size_t count = 0;
    for (double v : rep.bootstrap.values) count += v >= rep.statistic;
    CHECK(rep.p_value == (1.0 + count) / 200.0);
    CHECK(rep.p_value >= 1.0 / 200.0);
    CHECK(rep.p_value <= 1.0);
    CHECK(rep.bootstrap.values.size() == 199);
    CHECK(rep.j_hat >= rep.scan.range.first);
    CHECK(rep.j_hat <= rep.scan.range.last);
  }
}

TEST_CASE("sn_test statistic matches the standalone pipeline") {
  const auto x = sim_values(120, SigmaProfile::a3(), ErrorModel::b2(4.0), 7, 0.4);
  const auto rep = sn_test(TimeSeries(x), options(50, 2));
  const auto obs = sn_statistic(TimeSeries(x), 0.1, 10);
  CHECK(rep.statistic == obs.statistic);
  CHECK(rep.j_hat == obs.j_hat);
  CHECK(*sn_statistic_value(x, 0.1, 10) == doctest::Approx(obs.statistic).epsilon(1e-12));
  const auto scan = sn_scan(TimeSeries(x), 0.1);
  CHECK(oracle::rel_close(obs.statistic, scan.max_value / obs.tau_hat, 1e-12));
}

TEST_CASE("tests are deterministic across thread counts") {
  const auto x = sim_values(120, SigmaProfile::a4(), ErrorModel::b1(0.8), 11);
  for (auto t : {CusumTest::SN, CusumTest::T1, CusumTest::T2}) {
    auto o1 = options(300, 4);
    auto o4 = options(300, 4);
    o4.bootstrap.threads = 4;
    const auto a = run_changepoint_test(t, TimeSeries(x), o1);
    const auto b = run_changepoint_test(t, TimeSeries(x), o4);
    CHECK(a.p_value == b.p_value);
    CHECK(a.bootstrap.values == b.bootstrap.values);
  }
}

TEST_CASE("a large shift is detected and located") {
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto x = sim_values(120, SigmaProfile::a1(), ErrorModel::b1(0.4), 7000 + seed, 10.0);
    const auto rep = sn_test(TimeSeries(x), options(199, seed));
    good += rep.p_value < 0.01 && std::abs(static_cast<double>(rep.j_hat) - 40.0) <= 5.0;
  }
  CHECK(good >= 95);
}

TEST_CASE("null calibration and uniform p-values on i.i.d. data") {
  std::vector<double> p;
  int reject = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto rep = sn_test(TimeSeries(innovations(90000 + seed, 120)), options(199, seed));
    p.push_back(rep.p_value);
    reject += rep.p_value <= 0.05;
  }
  CHECK(reject >= 10);
  CHECK(reject <= 45);
  CHECK(oracle::ks_uniform(p) < 0.08);
}

// Shifts small against the noise can cancel a null excursion of the opposite
// sign and lower the statistic, so the grid starts where the shift dominates.
TEST_CASE("p-value does not increase with the shift size") {
  int violations = 0, comparisons = 0;
  const std::vector<double> grid{0.4, 0.8, 1.6, 3.2};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    double prev = 2.0;
    for (double lambda : grid) {
      const auto x = sim_values(120, SigmaProfile::a1(), ErrorModel::b1(0.4), 300 + seed, lambda);
      const double p = sn_test(TimeSeries(x), options(500, seed)).p_value;
      if (prev <= 1.0) {
        ++comparisons;
        violations += p > prev;
      }
      prev = p;
    }
  }
  CHECK(violations <= 0.02 * comparisons);
}

TEST_CASE("variance-change test has power against a variance step") {
  int step = 0, flat = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto a = sim_values(240, SigmaProfile::a1(), ErrorModel::iid(), 500 + seed);
    const auto b = sim_values(240, SigmaProfile::constant(0.4), ErrorModel::iid(), 500 + seed);
    step += variance_change_test(TimeSeries(a), options(199, seed, 12)).p_value <= 0.05;
    flat += variance_change_test(TimeSeries(b), options(199, seed, 12)).p_value <= 0.05;
  }
  CHECK(step > flat);
}

TEST_CASE("test names") {
  for (auto t : {CusumTest::SN, CusumTest::T1, CusumTest::T2}) CHECK(parse_cusum_test(to_string(t)) == t);
  CHECK_THROWS_AS((void)parse_cusum_test("t3"), InvalidArgument);
}
