#include "modcash/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "modcash/rng.hpp"

namespace modcash {

std::optional<double> ert(const std::vector<HittingTime>& times, long budget) {
  if (times.empty()) throw std::invalid_argument("ert: empty input");
  if (budget < 1) throw std::invalid_argument("ert: budget >= 1 required");
  double total = 0.0;
  int successes = 0;
  for (const auto& t : times) {
    if (t) {
      if (*t > budget) throw std::invalid_argument("ert: hitting time exceeds budget");
      total += static_cast<double>(*t);
      ++successes;
    } else {
      total += static_cast<double>(budget);
    }
  }
  if (successes == 0) return std::nullopt;
  return total / successes;
}

double aht(const std::vector<HittingTime>& times, double penalty) {
  if (times.empty()) throw std::invalid_argument("aht: empty input");
  double total = 0.0;
  for (const auto& t : times) {
    if (t)
      total += std::min(static_cast<double>(*t), penalty);
    else
      total += penalty;
  }
  return total / times.size();
}

ErtSummary summarize(const std::vector<HittingTime>& times, long budget,
                     double penalty) {
  ErtSummary s;
  s.n_runs = static_cast<int>(times.size());
  s.n_success = static_cast<int>(
      std::count_if(times.begin(), times.end(), [](const auto& t) { return t.has_value(); }));
  s.ert = ert(times, budget);
  s.aht = aht(times, penalty);
  s.penalty = penalty;
  return s;
}

std::vector<double> ecdf_budget_grid(double max_budget) {
  std::vector<double> grid;
  const double top = std::log10(std::max(1.0, max_budget));
  for (double e = 0.0; e <= top + 1e-12; e += 1.0 / 51.0)
    grid.push_back(std::pow(10.0, e));
  return grid;
}

std::vector<EcdfPoint> ecdf(const std::vector<RunRecord>& records,
                            const std::vector<double>& targets,
                            const std::vector<double>& budgets) {
  if (records.empty() || targets.empty())
    throw std::invalid_argument("ecdf: records and targets must be nonempty");
  // each record is one (run, target) observation; keep those whose target
  // appears in the requested list
  std::vector<const RunRecord*> pairs;
  for (const auto& r : records)
    for (double t : targets)
      if (std::fabs(r.target - t) <=
          1e-9 * std::max({1.0, std::fabs(r.target), std::fabs(t)})) {
        pairs.push_back(&r);
        break;
      }
  std::vector<EcdfPoint> curve;
  curve.reserve(budgets.size());
  for (double b : budgets) {
    int hit = 0;
    for (const auto* r : pairs)
      if (r->hitting_time && static_cast<double>(*r->hitting_time) <= b) ++hit;
    const double frac = pairs.empty() ? 0.0 : static_cast<double>(hit) / pairs.size();
    curve.push_back({b, frac});
  }
  return curve;
}

double kendall_tau(const std::vector<double>& rank_a,
                   const std::vector<double>& rank_b) {
  const std::size_t n = rank_a.size();
  if (n != rank_b.size() || n < 2)
    throw std::invalid_argument("kendall_tau: need two equal-length rankings, n >= 2");
  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = rank_a[i] - rank_a[j];
      const double db = rank_b[i] - rank_b[j];
      if (da == 0.0 && db == 0.0) continue;
      if (da == 0.0)
        ++ties_a;
      else if (db == 0.0)
        ++ties_b;
      else if (da * db > 0.0)
        ++concordant;
      else
        ++discordant;
    }
  const double n0 = 0.5 * n * (n - 1);
  const double denom =
      std::sqrt((n0 - ties_a) * (n0 - ties_b));
  if (denom == 0.0) return 0.0;
  return (concordant - discordant) / denom;
}

double prediction_error(double predicted, double verified) {
  if (!(verified > 0.0) || !std::isfinite(predicted))
    throw std::invalid_argument("prediction_error: invalid inputs");
  return std::fabs(predicted - verified) / verified;
}

Ranking rank_variants(const std::map<int, ErtSummary>& summaries) {
  if (summaries.empty())
    throw std::invalid_argument("rank_variants: empty input");
  Ranking r;
  for (const auto& [id, s] : summaries)
    r.entries.push_back({id, s.ert, s.n_success});
  std::sort(r.entries.begin(), r.entries.end(),
            [](const Ranking::Entry& a, const Ranking::Entry& b) {
              const double ea = a.ert.value_or(std::numeric_limits<double>::infinity());
              const double eb = b.ert.value_or(std::numeric_limits<double>::infinity());
              if (ea != eb) return ea < eb;
              if (a.n_success != b.n_success) return a.n_success > b.n_success;
              return a.conf_id < b.conf_id;
            });
  return r;
}

double resample_min_ert(const std::vector<std::vector<HittingTime>>& per_instance,
                        int k, int repeats, long budget, std::uint64_t seed) {
  if (repeats < 1) throw std::invalid_argument("resample_min_ert: repeats >= 1");
  for (const auto& inst : per_instance)
    if (static_cast<int>(inst.size()) < k)
      throw std::invalid_argument("resample_min_ert: k larger than a sample list");
  Rng rng(seed_hash(seed, 0x5e5a));
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    std::vector<HittingTime> pooled;
    for (const auto& inst : per_instance) {
      std::vector<std::size_t> idx(inst.size());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      for (int i = 0; i < k; ++i) pooled.push_back(inst[idx[i]]);
    }
    const auto e = ert(pooled, budget);
    if (e && *e < best) best = *e;
  }
  return best;
}

}  // namespace modcash
