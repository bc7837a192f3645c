#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "modcash/metrics.hpp"

using namespace modcash;

TEST_CASE("ert examples") {
  CHECK(*ert({100L, 100L, 100L, 100L}, 1000) == doctest::Approx(100.0));
  CHECK(*ert({100L, std::nullopt}, 1000) == doctest::Approx(1100.0));
  CHECK(!ert({std::nullopt, std::nullopt}, 1000).has_value());
  CHECK_THROWS_AS(ert({}, 1000), std::invalid_argument);
  CHECK_THROWS_AS(ert({2000L}, 1000), std::invalid_argument);
}

TEST_CASE("aht examples") {
  CHECK(aht({100L, std::nullopt}, 1000.0) == doctest::Approx(550.0));
  CHECK(aht({100L, 300L}, 1e9) == doctest::Approx(200.0));
  CHECK(std::isinf(aht({std::nullopt},
                       std::numeric_limits<double>::infinity())));
  CHECK_THROWS_AS(aht({}, 1000.0), std::invalid_argument);
}

TEST_CASE("ert equals aht when all runs succeed") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 20);
    std::uniform_int_distribution<long> t_dist(1, 1000);
    std::vector<HittingTime> times(n_dist(rng));
    for (auto& t : times) t = t_dist(rng);
    const ErtSummary s = summarize(times, 1000, 2000.0);
    CHECK(*s.ert == s.aht);
    CHECK(s.n_success == s.n_runs);
  }
}

TEST_CASE("ert scale consistency") {
  const std::vector<HittingTime> times = {120L, 340L, std::nullopt, 77L};
  const double base = *ert(times, 1000);
  std::vector<HittingTime> doubled;
  for (const auto& t : times)
    doubled.push_back(t ? HittingTime(*t * 2) : std::nullopt);
  CHECK(*ert(doubled, 2000) == doctest::Approx(2.0 * base).epsilon(1e-12));
}

TEST_CASE("ecdf basics") {
  RunRecord r;
  r.target = 1e-8;
  r.budget = 100;
  r.hitting_time = 10;
  const auto curve = ecdf({r}, {1e-8}, {0.0, 5.0, 9.999, 10.0, 50.0});
  CHECK(curve[0].fraction == doctest::Approx(0.0));
  CHECK(curve[1].fraction == doctest::Approx(0.0));
  CHECK(curve[2].fraction == doctest::Approx(0.0));
  CHECK(curve[3].fraction == doctest::Approx(1.0));
  CHECK(curve[4].fraction == doctest::Approx(1.0));
  CHECK_THROWS_AS(ecdf({}, {1e-8}, {1.0}), std::invalid_argument);
}

TEST_CASE("ecdf budget grid is logarithmic") {
  const auto grid = ecdf_budget_grid(1000.0);
  CHECK(grid.front() == doctest::Approx(1.0));
  CHECK(grid.back() >= 999.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(grid[i] > grid[i - 1]);
    CHECK(std::log10(grid[i]) - std::log10(grid[i - 1]) ==
          doctest::Approx(1.0 / 51.0).epsilon(1e-6));
  }
}

TEST_CASE("kendall tau examples") {
  CHECK(kendall_tau({1, 2, 3, 4}, {1, 2, 3, 4}) == doctest::Approx(1.0));
  CHECK(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(kendall_tau({1, 2, 3}, {1, 3, 2}) == doctest::Approx(1.0 / 3.0));
  // symmetry
  CHECK(kendall_tau({3, 1, 2}, {1, 2, 3}) ==
        doctest::Approx(kendall_tau({1, 2, 3}, {3, 1, 2})));
  CHECK_THROWS_AS(kendall_tau({1}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(kendall_tau({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("prediction error") {
  CHECK(prediction_error(100, 100) == doctest::Approx(0.0));
  CHECK(prediction_error(90, 100) == doctest::Approx(0.10));
  CHECK(prediction_error(120, 100) == doctest::Approx(0.20));
  CHECK_THROWS_AS(prediction_error(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("rank_variants order and ties") {
  std::map<int, ErtSummary> m;
  ErtSummary a;
  a.ert = 100.0;
  a.n_success = 5;
  ErtSummary b;
  b.ert = 100.0;
  b.n_success = 9;
  ErtSummary c;
  c.ert = std::nullopt;
  c.n_success = 0;
  ErtSummary d;
  d.ert = 50.0;
  d.n_success = 3;
  m[10] = a;
  m[20] = b;
  m[30] = c;
  m[40] = d;
  const Ranking r = rank_variants(m);
  REQUIRE(r.entries.size() == 4);
  CHECK(r.entries[0].conf_id == 40);
  CHECK(r.entries[1].conf_id == 20);  // tie broken by success count
  CHECK(r.entries[2].conf_id == 10);
  CHECK(r.entries[3].conf_id == 30);  // undefined last
  CHECK_THROWS_AS(rank_variants({}), std::invalid_argument);
}

TEST_CASE("rank_variants matches an oracle sort") {
  std::mt19937_64 rng(9);
  std::map<int, ErtSummary> m;
  for (int id = 0; id < 20; ++id) {
    ErtSummary s;
    std::uniform_int_distribution<int> u(0, 4);
    const int v = u(rng);
    s.n_success = v;
    if (v > 0) s.ert = 10.0 * (1 + u(rng));
    m[id] = s;
  }
  const Ranking r = rank_variants(m);
  for (std::size_t i = 1; i < r.entries.size(); ++i) {
    const auto& p = r.entries[i - 1];
    const auto& q = r.entries[i];
    const double ep = p.ert.value_or(std::numeric_limits<double>::infinity());
    const double eq = q.ert.value_or(std::numeric_limits<double>::infinity());
    const bool ordered =
        ep < eq ||
        (ep == eq && (p.n_success > q.n_success ||
                      (p.n_success == q.n_success && p.conf_id < q.conf_id)));
    CHECK(ordered);
  }
}

TEST_CASE("resample_min_ert degenerate cases") {
  const std::vector<std::vector<HittingTime>> flat = {
      {50L, 50L, 50L, 50L, 50L}, {50L, 50L, 50L, 50L, 50L}};
  CHECK(resample_min_ert(flat, 3, 7, 1000, 1) == doctest::Approx(50.0));

  const std::vector<std::vector<HittingTime>> mixed = {
      {10L, 20L, std::nullopt, 40L}};
  const double full = *ert(mixed[0], 1000);
  CHECK(resample_min_ert(mixed, 4, 1, 1000, 3) == doctest::Approx(full));
  CHECK_THROWS_AS(resample_min_ert(mixed, 5, 1, 1000, 3),
                  std::invalid_argument);
}
