#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "modcash/engine.hpp"

namespace modcash {

// Hitting time of a single run; empty = target never hit.
using HittingTime = std::optional<long>;

struct ErtSummary {
  int n_runs = 0;
  int n_success = 0;
  std::optional<double> ert;  // empty when no run succeeded
  double aht = 0.0;
  double penalty = 0.0;
};

// Sum of budget-capped hitting times over the number of successes.
std::optional<double> ert(const std::vector<HittingTime>& times, long budget);

// Mean of penalty-capped hitting times. penalty may be +inf.
double aht(const std::vector<HittingTime>& times, double penalty);

ErtSummary summarize(const std::vector<HittingTime>& times, long budget,
                     double penalty);

struct EcdfPoint {
  double budget;
  double fraction;
};

// Fraction of (run, target) pairs hit within each budget of the grid.
std::vector<EcdfPoint> ecdf(const std::vector<RunRecord>& records,
                            const std::vector<double>& precisions,
                            const std::vector<double>& budgets);

// Logarithmic grid, 51 points per decade.
std::vector<double> ecdf_budget_grid(double max_budget);

// Kendall rank correlation; tau-b tie adjustment when ranks contain ties.
// Inputs are per-item rank values over the same item order.
double kendall_tau(const std::vector<double>& rank_a,
                   const std::vector<double>& rank_b);

double prediction_error(double predicted, double verified);

struct Ranking {
  struct Entry {
    int conf_id;
    std::optional<double> ert;
    int n_success;
  };
  std::vector<Entry> entries;  // best first
};

// Sorted by ert ascending (undefined last), success count descending,
// ConfID ascending.
Ranking rank_variants(const std::map<int, ErtSummary>& summaries);

// Optimistic-selection statistic: draw k hitting times per instance without
// replacement, pool, compute ERT; repeat and take the minimum.
double resample_min_ert(const std::vector<std::vector<HittingTime>>& per_instance,
                        int k, int repeats, long budget, std::uint64_t seed);

}  // namespace modcash
