#include "modcash/ego.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modcash {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double tuner_cost(const std::vector<HittingTime>& times, long run_budget) {
  const auto e = ert(times, run_budget);
  if (e) return *e;
  // all runs failed: worst-ordered but finite for the surrogate
  return 2.0 * static_cast<double>(run_budget) * static_cast<double>(times.size());
}

}  // namespace

double expected_improvement(double mean, double spread, double best) {
  if (spread < 0.0)
    throw std::invalid_argument("expected_improvement: spread >= 0 required");
  if (spread == 0.0) return std::max(best - mean, 0.0);
  const double z = (best - mean) / spread;
  return (best - mean) * normal_cdf(z) + spread * normal_pdf(z);
}

std::vector<CandidatePair> propose(
    const ForestModel& model, const SearchSpace& space, int n_points,
    const std::vector<std::vector<double>>& archive_points, double best_value,
    const EgoSettings& settings, std::uint64_t seed) {
  if (n_points < 1) throw std::invalid_argument("propose: n_points >= 1");
  Rng rng(seed_hash(seed, 0xac9));
  const std::size_t nd = space.num_dims();

  const auto ei_at = [&](const std::vector<double>& p) {
    const auto [mean, spread] = model.predict(p);
    return expected_improvement(mean, spread, best_value);
  };
  const auto in_archive = [&](const std::vector<double>& p) {
    return std::find(archive_points.begin(), archive_points.end(), p) !=
           archive_points.end();
  };

  struct Individual {
    std::vector<double> point;
    std::vector<double> steps;
    double ei = 0.0;
  };

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double tau = 1.0 / std::sqrt(2.0 * std::max<std::size_t>(1, nd));

  const int pop_size = settings.es_population;
  const int n_parents = std::max(1, pop_size / 4);
  std::vector<Individual> pop(pop_size);
  for (auto& ind : pop) {
    ind.point = space.sample_uniform_point(rng);
    ind.steps.assign(nd, 0.0);
    for (std::size_t d = 0; d < nd; ++d)
      if (!space.is_integer(d))
        ind.steps[d] = 0.2 * (space.dims[d].hi - space.dims[d].lo);
    ind.ei = ei_at(ind.point);
  }

  const auto by_ei = [](const Individual& a, const Individual& b) {
    return a.ei > b.ei;
  };
  std::sort(pop.begin(), pop.end(), by_ei);

  for (int g = 0; g < settings.es_generations; ++g) {
    std::vector<Individual> offspring;
    offspring.reserve(pop_size);
    std::uniform_int_distribution<int> parent_pick(0, n_parents - 1);
    for (int i = 0; i < pop_size; ++i) {
      Individual child = pop[parent_pick(rng)];
      const double common = gauss(rng);
      for (std::size_t d = 0; d < nd; ++d) {
        if (space.is_integer(d)) {
          if (unif(rng) < 1.0 / 11.0) {
            std::uniform_int_distribution<int> cat(0, space.dims[d].cardinality - 1);
            child.point[d] = static_cast<double>(cat(rng));
          }
        } else {
          child.steps[d] *= std::exp(tau * (common + gauss(rng)));
          const double span = space.dims[d].hi - space.dims[d].lo;
          child.steps[d] = std::clamp(child.steps[d], 1e-8 * std::max(span, 1e-8),
                                      std::max(span, 1e-12));
          child.point[d] = std::clamp(child.point[d] + child.steps[d] * gauss(rng),
                                      space.dims[d].lo, space.dims[d].hi);
        }
      }
      child.ei = ei_at(child.point);
      offspring.push_back(std::move(child));
    }
    // (mu + lambda) survival
    pop.insert(pop.end(), offspring.begin(), offspring.end());
    std::sort(pop.begin(), pop.end(), by_ei);
    pop.resize(pop_size);
  }

  std::vector<CandidatePair> result;
  for (const auto& ind : pop) {
    if (static_cast<int>(result.size()) >= n_points) break;
    std::vector<double> canonical = space.from_pair(space.to_pair(ind.point));
    if (in_archive(canonical)) continue;
    const CandidatePair pair = space.to_pair(canonical);
    if (std::find(result.begin(), result.end(), pair) != result.end()) continue;
    result.push_back(pair);
  }
  // top up with fresh uniform samples if the ES converged onto the archive
  int attempts = 0;
  while (static_cast<int>(result.size()) < n_points && attempts++ < 10000) {
    const CandidatePair pair = space.sample_uniform(rng);
    if (in_archive(space.from_pair(pair))) continue;
    if (std::find(result.begin(), result.end(), pair) != result.end()) continue;
    result.push_back(pair);
  }
  // degenerate space with nothing new to offer: fall back to resampling
  while (static_cast<int>(result.size()) < n_points)
    result.push_back(space.sample_uniform(rng));
  return result;
}

EgoResult tune_ego(const SearchSpace& space, const EgoRunFn& run_fn,
                   long total_budget, const EgoSettings& settings,
                   std::uint64_t seed) {
  const int rpe = settings.runs_per_eval;
  if (rpe < 1) throw std::invalid_argument("tune_ego: runs_per_eval >= 1");
  const long n_evals_total = total_budget / rpe;
  if (n_evals_total < 2)
    throw std::invalid_argument("tune_ego: budget below initial design + 1 evaluation");
  const int n_initial = static_cast<int>(std::min<long>(
      settings.initial_design, std::max<long>(2, n_evals_total / 4)));

  EgoResult result;
  std::vector<std::vector<double>> points;
  std::vector<double> costs;
  std::vector<bool> is_int(space.num_dims());
  for (std::size_t d = 0; d < space.num_dims(); ++d)
    is_int[d] = space.is_integer(d);

  const auto evaluate = [&](const CandidatePair& pair, bool initial) {
    const int eval_index = static_cast<int>(result.audit.size());
    std::vector<HittingTime> times(rpe);
    for (int r = 0; r < rpe; ++r) times[r] = run_fn(pair, eval_index, r);
    result.runs_spent += rpe;
    const double cost = tuner_cost(times, settings.run_budget);
    result.audit.push_back({pair, std::move(times), cost, initial});
    points.push_back(space.from_pair(pair));
    costs.push_back(cost);
  };

  for (const CandidatePair& pair :
       sample_lhs(space, n_initial, seed_hash(seed, 0x1fa)))
    evaluate(pair, true);

  int iteration = 0;
  while (result.runs_spent + rpe <= total_budget) {
    const auto best_it = std::min_element(costs.begin(), costs.end());
    const double best_value = *best_it;
    ForestModel model = ForestModel::fit(points, costs, is_int, settings.forest,
                                         seed_hash(seed, 0xf17, iteration));
    const auto proposals = propose(model, space, 1, points, best_value,
                                   settings, seed_hash(seed, 0xbe7, iteration));
    evaluate(proposals.front(), false);
    ++iteration;
  }

  const auto best_it = std::min_element(costs.begin(), costs.end());
  const std::size_t best_idx = best_it - costs.begin();
  result.best = result.audit[best_idx].pair;
  result.predicted_ert = costs[best_idx];
  return result;
}

}  // namespace modcash
