#pragma once

#include <functional>

#include "modcash/config_space.hpp"
#include "modcash/forest.hpp"
#include "modcash/metrics.hpp"

namespace modcash {

// Closed-form expected improvement for a Gaussian belief (minimization).
double expected_improvement(double mean, double spread, double best);

struct EgoSettings {
  int runs_per_eval = 25;
  int initial_design = 250;   // scaled down when the budget is small
  long run_budget = 10000;    // per-optimizer-run evaluation budget B
  ForestSettings forest;
  int es_population = 20;
  int es_generations = 50;
};

struct EgoAuditEntry {
  CandidatePair pair;
  std::vector<HittingTime> times;
  double cost;  // tuner-internal ERT (sentinel when all runs failed)
  bool initial = false;
};

struct EgoResult {
  CandidatePair best;
  double predicted_ert = 0.0;
  long runs_spent = 0;
  std::vector<EgoAuditEntry> audit;
};

// Executes one optimizer run for candidate `pair`; run_index enumerates the
// runs_per_eval runs of one ERT evaluation. Returns the hitting time.
using EgoRunFn = std::function<HittingTime(
    const CandidatePair& pair, int eval_index, int run_index)>;

// ES-based maximization of EI over the search space, avoiding archive points.
std::vector<CandidatePair> propose(
    const ForestModel& model, const SearchSpace& space, int n_points,
    const std::vector<std::vector<double>>& archive_points, double best_value,
    const EgoSettings& settings, std::uint64_t seed);

EgoResult tune_ego(const SearchSpace& space, const EgoRunFn& run_fn,
                   long total_budget, const EgoSettings& settings,
                   std::uint64_t seed);

}  // namespace modcash
