#include "modcash/racing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace modcash {

namespace {

// regularized incomplete beta function, continued-fraction expansion
double betacf(double a, double b, double x) {
  const int max_iter = 200;
  const double eps = 3e-14, fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_iter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_beta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_beta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// two-sided p-value for |T| >= |t| with Student-t df degrees of freedom
double student_t_two_sided(double t, double df) {
  const double x = df / (df + t * t);
  return incomplete_beta(df / 2.0, 0.5, x);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double var_of(const std::vector<double>& v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (v.size() - 1);
}

}  // namespace

double welch_p_value(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) return 1.0;
  const double ma = mean_of(a), mb = mean_of(b);
  const double va = var_of(a, ma), vb = var_of(b, mb);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;
  if (se2 <= 0.0) return ma == mb ? 1.0 : 0.0;
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (va * va / (na * na * (na - 1.0)) +
                     vb * vb / (nb * nb * (nb - 1.0)));
  return student_t_two_sided(t, df);
}

std::vector<CandidatePair> initial_candidates(const SearchSpace& space, int n,
                                              std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("initial_candidates: n >= 2 required");
  return sample_uniform(space, n, seed);
}

std::vector<std::size_t> eliminate(
    const std::vector<std::map<int, double>>& costs_by_step, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("eliminate: alpha in (0,1) required");
  const std::size_t n = costs_by_step.size();
  if (n == 0) return {};

  std::vector<double> means(n, std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    if (costs_by_step[i].empty()) continue;
    double s = 0.0;
    for (const auto& [step, c] : costs_by_step[i]) s += c;
    means[i] = s / costs_by_step[i].size();
  }
  const std::size_t best =
      std::min_element(means.begin(), means.end()) - means.begin();

  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == best) {
      survivors.push_back(i);
      continue;
    }
    std::vector<double> mine, theirs;
    for (const auto& [step, c] : costs_by_step[i]) {
      const auto it = costs_by_step[best].find(step);
      if (it != costs_by_step[best].end()) {
        mine.push_back(c);
        theirs.push_back(it->second);
      }
    }
    if (mine.size() < 2) {
      survivors.push_back(i);  // insufficient observations: skip the test
      continue;
    }
    const double p = welch_p_value(mine, theirs);
    const bool worse = mean_of(mine) > mean_of(theirs);
    if (!(worse && p < alpha)) survivors.push_back(i);
  }
  return survivors;
}

CandidatePair mutate_candidate(const CandidatePair& parent,
                               const SearchSpace& space,
                               const std::vector<double>& stddev_per_dim,
                               double epsilon, std::uint64_t seed) {
  if (!parent.config.valid() || !parent.hyper.valid())
    throw std::invalid_argument("mutate_candidate: invalid parent");
  Rng rng(seed_hash(seed, 0x3417));
  std::vector<double> point = space.from_pair(parent);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t d = 0; d < space.num_dims(); ++d) {
    if (space.is_integer(d)) {
      const int card = space.dims[d].cardinality;
      if (card > 1 && unif(rng) < epsilon) {
        std::uniform_int_distribution<int> other(0, card - 2);
        int v = other(rng);
        if (v >= static_cast<int>(point[d])) ++v;
        point[d] = static_cast<double>(v);
      }
    } else {
      point[d] = std::clamp(point[d] + stddev_per_dim[d] * gauss(rng),
                            space.dims[d].lo, space.dims[d].hi);
    }
  }
  return space.to_pair(point);
}

RacingResult tune_racing(const SearchSpace& space, const RaceCostFn& cost_fn,
                         long total_budget, const RacingSettings& settings,
                         std::uint64_t seed) {
  const long min_budget = 2L * settings.first_test_after;
  if (total_budget < min_budget)
    throw std::invalid_argument("tune_racing: budget below one race minimum");

  struct Cand {
    int id;
    CandidatePair pair;
    std::map<int, double> costs;
    double mean() const {
      double s = 0.0;
      for (const auto& [k, v] : costs) s += v;
      return costs.empty() ? std::numeric_limits<double>::infinity()
                           : s / costs.size();
    }
  };

  RacingResult result;
  int next_id = 0;
  std::vector<Cand> elites;
  std::vector<double> stddev(space.num_dims(), 0.0);
  for (std::size_t d = 0; d < space.num_dims(); ++d)
    if (!space.is_integer(d))
      stddev[d] = 0.5 * (space.dims[d].hi - space.dims[d].lo);
  double epsilon = settings.epsilon_start;

  for (int race = 0;; ++race) {
    const long remaining = total_budget - result.runs_spent;
    if (remaining < settings.first_test_after) break;
    const long race_budget =
        race < settings.planned_races
            ? remaining / (settings.planned_races - race)
            : remaining;
    if (race_budget < settings.first_test_after) break;

    std::vector<Cand> cands;
    if (race == 0) {
      const int n = static_cast<int>(std::min<long>(
          settings.first_race_size,
          std::max<long>(2, race_budget / settings.first_test_after)));
      for (const auto& pair :
           initial_candidates(space, n, seed_hash(seed, 0x9a2e, race)))
        cands.push_back({next_id++, pair, {}});
    } else {
      const int n = static_cast<int>(std::clamp<long>(
          race_budget / 10, settings.min_race_size, settings.first_race_size));
      cands = elites;
      Rng pick_rng(seed_hash(seed, 0x715, race));
      std::uniform_int_distribution<std::size_t> pick(0, elites.size() - 1);
      while (static_cast<int>(cands.size()) < n) {
        const Cand& parent = elites[pick_rng() % elites.size()];
        (void)pick;
        cands.push_back({next_id, mutate_candidate(parent.pair, space, stddev,
                                                   epsilon,
                                                   seed_hash(seed, 0xd1, next_id)),
                         {}});
        ++next_id;
      }
    }

    // capping reference: median of the previous race's elite means
    std::optional<double> elite_median;
    if (!elites.empty()) {
      std::vector<double> ms;
      for (const auto& e : elites) ms.push_back(e.mean());
      std::sort(ms.begin(), ms.end());
      elite_median = ms[ms.size() / 2];
    }
    std::vector<bool> is_elite(cands.size(), false);
    for (std::size_t i = 0; i < cands.size() && race > 0; ++i)
      is_elite[i] = i < elites.size();

    std::vector<std::size_t> alive(cands.size());
    std::iota(alive.begin(), alive.end(), 0);
    long race_spent = 0;
    bool out_of_budget = false;

    for (int step = 0; step < settings.max_instance_steps; ++step) {
      if (alive.size() <= 1) break;
      std::vector<std::size_t> next_alive;
      for (std::size_t ci : alive) {
        Cand& c = cands[ci];
        bool capped = false;
        if (!c.costs.count(step)) {
          if (result.runs_spent >= total_budget || race_spent >= race_budget) {
            out_of_budget = true;
            next_alive.push_back(ci);
            continue;
          }
          const double cost =
              cost_fn(c.pair, step, seed_hash(seed, 0xc0, c.id, step));
          c.costs[step] = cost;
          ++result.runs_spent;
          ++race_spent;
          if (elite_median && !is_elite[ci] &&
              static_cast<int>(c.costs.size()) >=
                  settings.min_instances_before_cap &&
              c.mean() > *elite_median)
            capped = true;
          result.audit.push_back(
              {c.id, c.pair, step, cost, capped, race});
        }
        if (!capped) next_alive.push_back(ci);
      }
      alive = std::move(next_alive);
      if (out_of_budget) break;

      if (step + 1 >= settings.first_test_after && alive.size() > 1) {
        std::vector<std::map<int, double>> table;
        for (std::size_t ci : alive) table.push_back(cands[ci].costs);
        const auto survivors = eliminate(table, settings.alpha);
        std::vector<std::size_t> kept;
        for (std::size_t si : survivors) {
          const std::size_t ci = alive[si];
          kept.push_back(ci);
        }
        // elitist protection: an elite stays until challengers have matched
        // its instance history
        for (std::size_t ci : alive) {
          if (std::find(kept.begin(), kept.end(), ci) != kept.end()) continue;
          if (is_elite[ci] &&
              step + 1 < static_cast<int>(cands[ci].costs.size()))
            kept.push_back(ci);
        }
        std::sort(kept.begin(), kept.end());
        alive = std::move(kept);
      }
    }

    // elites for the next race: best means among the race's survivors
    std::vector<Cand> survivors;
    for (std::size_t ci : alive) survivors.push_back(cands[ci]);
    if (survivors.empty()) survivors = cands;
    std::sort(survivors.begin(), survivors.end(),
              [](const Cand& a, const Cand& b) { return a.mean() < b.mean(); });
    survivors.resize(std::min<std::size_t>(survivors.size(),
                                           settings.elite_count));
    elites = std::move(survivors);

    for (auto& s : stddev) s *= settings.variance_decay;
    epsilon *= settings.variance_decay;
    if (result.runs_spent >= total_budget) break;
  }

  if (elites.empty())
    throw std::runtime_error("tune_racing: no candidate was evaluated");
  const auto best = std::min_element(
      elites.begin(), elites.end(),
      [](const Cand& a, const Cand& b) { return a.mean() < b.mean(); });
  result.best = best->pair;
  result.predicted_cost = best->mean();
  return result;
}

}  // namespace modcash
