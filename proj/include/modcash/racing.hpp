#pragma once

#include <functional>
#include <map>

#include "modcash/config_space.hpp"

namespace modcash {

// Two-sided p-value of a Welch two-sample t-test.
// Returns 1.0 when either sample has fewer than two observations.
double welch_p_value(const std::vector<double>& a, const std::vector<double>& b);

struct RacingSettings {
  int first_race_size = 333;
  int min_race_size = 20;
  int elite_count = 5;
  double alpha = 0.05;
  int first_test_after = 5;        // instance steps before the first t-test
  int min_instances_before_cap = 4;
  int planned_races = 5;
  int max_instance_steps = 100;    // length of the shared instance stream
  double variance_decay = 0.85;
  double epsilon_start = 0.3;
};

// Cost of running one candidate on one step of the instance stream,
// already penalty-capped (min(t, B), or the penalty for a failed run).
using RaceCostFn = std::function<double(
    const CandidatePair& pair, int instance_step, std::uint64_t seed)>;

struct RaceAuditEntry {
  int candidate_id;
  CandidatePair pair;
  int instance_step;
  double cost;
  bool capped;
  int race_index;
};

struct RacingResult {
  CandidatePair best;
  double predicted_cost = 0.0;  // penalized AHT over the winner's history
  long runs_spent = 0;
  std::vector<RaceAuditEntry> audit;
};

std::vector<CandidatePair> initial_candidates(const SearchSpace& space, int n,
                                              std::uint64_t seed);

// Indices of surviving candidates after testing each against the
// best-mean candidate on shared cost observations.
std::vector<std::size_t> eliminate(
    const std::vector<std::map<int, double>>& costs_by_step, double alpha);

CandidatePair mutate_candidate(const CandidatePair& parent,
                               const SearchSpace& space,
                               const std::vector<double>& stddev_per_dim,
                               double epsilon, std::uint64_t seed);

RacingResult tune_racing(const SearchSpace& space, const RaceCostFn& cost_fn,
                         long total_budget, const RacingSettings& settings,
                         std::uint64_t seed);

}  // namespace modcash
