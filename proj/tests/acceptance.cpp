// Acceptance gate: prints one line per criterion, exits nonzero on failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <thread>
#include <vector>

#include "modcash/pipelines.hpp"

using namespace modcash;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

// --- criterion 1: ConfID bijection ---
void criterion_1() {
  bool ok = true;
  int count = 0;
  for (int id = 0; id < 4608; ++id) {
    const ModuleConfiguration m = decode_config(id);
    if (!m.valid() || encode_config(m) != id) ok = false;
    ++count;
  }
  // exhaustive vector enumeration gives exactly 4608 valid encodings
  std::set<int> image;
  ModuleConfiguration m;
  for (int a = 0; a < 512; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        for (int bit = 0; bit < 9; ++bit) m[bit] = (a >> bit) & 1;
        m[9] = b;
        m[10] = c;
        image.insert(encode_config(m));
      }
  ok = ok && count == 4608 && image.size() == 4608 && *image.begin() == 0 &&
       *image.rbegin() == 4607;
  report(1, "ConfID bijection over 4608 ids", ok,
         "image size " + std::to_string(image.size()));
}

// --- criterion 2: estimator oracle ---
void criterion_2() {
  std::mt19937_64 rng(2024);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 25);
    std::uniform_int_distribution<long> t_dist(1, 1000);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const long budget = 1000;
    const double penalty = 2.0 * budget;
    std::vector<HittingTime> times(n_dist(rng));
    for (auto& t : times)
      t = u(rng) < 0.3 ? HittingTime{} : HittingTime(t_dist(rng));

    // independent brute-force evaluation of the definitions
    double sum_capped = 0.0, sum_pen = 0.0;
    int succ = 0;
    for (const auto& t : times) {
      sum_capped += t ? static_cast<double>(std::min(*t, budget))
                      : static_cast<double>(budget);
      sum_pen += t ? std::min(static_cast<double>(*t), penalty) : penalty;
      succ += t.has_value() ? 1 : 0;
    }
    const auto e = ert(times, budget);
    const double a = aht(times, penalty);
    if (succ == 0) {
      if (e.has_value()) ok = false;
    } else {
      const double oracle = sum_capped / succ;
      if (std::fabs(*e - oracle) > 1e-12 * std::max(1.0, std::fabs(oracle)))
        ok = false;
    }
    const double oracle_aht = sum_pen / times.size();
    if (std::fabs(a - oracle_aht) > 1e-12 * std::max(1.0, oracle_aht))
      ok = false;
    if (succ == static_cast<int>(times.size()) && e.has_value() && *e != a)
      ok = false;
  }
  report(2, "ERT/AHT estimator oracle (1000 lists)", ok, "");
}

// --- criterion 3: optimizer sanity on the sphere ---
void criterion_3() {
  const Problem sphere = make_problem(1, 0, 5);
  const CandidatePair pair = default_pair_for(decode_config(0), 5);
  std::vector<HittingTime> times;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
    times.push_back(
        run(pair, sphere, sphere.target_for(1e-8), 10000, seed).hitting_time);
  const int succ = static_cast<int>(
      std::count_if(times.begin(), times.end(),
                    [](const HittingTime& t) { return t.has_value(); }));
  const auto e = ert(times, 10000);
  const bool ok = succ >= 45 && e.has_value() && *e < 5000.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "success %d/50, ert %.1f", succ,
                e ? *e : -1.0);
  report(3, "default CMA-ES solves the 5-D sphere", ok, buf);
}

// --- criterion 4: module invariants ---
void criterion_4() {
  bool ok = true;
  // mirrored sampling: exact negated pairs
  {
    ModuleConfiguration m = decode_config(0);
    m[2] = 1;
    EsState s = init_es(default_pair_for(m, 5), 5, 1);
    s.budget = 1 << 20;
    (void)s.ask();
    const auto& z = s.last_base();
    for (std::size_t k = 0; k + 1 < z.size(); k += 2)
      if ((z[k] + z[k + 1]).cwiseAbs().maxCoeff() != 0.0) ok = false;
  }
  // orthogonal sampling: per-block orthogonality
  {
    ModuleConfiguration m = decode_config(0);
    m[3] = 1;
    EsState s = init_es(default_pair_for(m, 5), 5, 1);
    s.budget = 1 << 20;
    (void)s.ask();
    const auto& z = s.last_base();
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j)
        if (i / 5 == j / 5 && std::fabs(z[i].dot(z[j])) >= 1e-9) ok = false;
  }
  // recombination weights
  {
    const Eigen::VectorXd uni = compute_weights(4, 1);
    for (int i = 0; i < 4; ++i)
      if (std::fabs(uni[i] - 0.25) > 1e-15) ok = false;
    const Eigen::VectorXd w = compute_weights(4, 0);
    double raw[4], sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      raw[i] = std::log(4.5) - std::log(i + 1.0);
      sum += raw[i];
    }
    for (int i = 0; i < 4; ++i)
      if (std::fabs(w[i] - raw[i] / sum) > 1e-12) ok = false;
  }
  report(4, "mirroring / orthogonality / weight formulas", ok, "");
}

// --- criterion 5: optimistic resampling statistic ---
void criterion_5() {
  std::mt19937_64 rng(55);
  int leq = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    std::uniform_int_distribution<long> t_dist(1, 900);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<HittingTime>> per_instance(2);
    for (auto& inst : per_instance) {
      inst.resize(8);
      for (auto& t : inst)
        t = u(rng) < 0.3 ? HittingTime{} : HittingTime(t_dist(rng));
      inst[0] = t_dist(rng);  // keep the full-sample ERT defined
    }
    std::vector<HittingTime> pooled;
    for (const auto& inst : per_instance)
      pooled.insert(pooled.end(), inst.begin(), inst.end());
    const double full = *ert(pooled, 1000);
    const double mini = resample_min_ert(per_instance, 5, 10, 1000, trial);
    if (mini <= full + 1e-9) ++leq;
  }
  const bool ok = leq >= 800;
  report(5, "resampled minimum ERT is optimistic", ok,
         std::to_string(leq) + "/1000 trials below the full-sample ERT");
}

// --- criterion 6: racing soundness on synthetic constant costs ---
void criterion_6() {
  const SearchSpace space = SearchSpace::cash();
  const RaceCostFn cost = [](const CandidatePair& p, int, std::uint64_t) {
    return 10.0 * (p.config[10] + 1);  // deterministic costs {10, 20, 30}
  };
  int wins = 0;
  bool capping_ok = true;
  bool any_capped = false;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RacingResult r = tune_racing(space, cost, 12000, {}, seed);
    if (r.best.config[10] == 0 && r.predicted_cost == 10.0) ++wins;
    // each capped candidate is cut after exactly the minimum instance count
    std::map<std::pair<int, int>, int> seen;  // (race, candidate) -> obs
    for (const auto& e : r.audit) {
      const auto key = std::make_pair(e.race_index, e.candidate_id);
      ++seen[key];
      if (e.capped) {
        any_capped = true;
        if (seen[key] != 4) capping_ok = false;
      }
    }
  }
  const bool ok = wins == 20 && capping_ok && any_capped;
  report(6, "racing returns the cost-10 candidate, caps after 4 instances", ok,
         std::to_string(wins) + "/20 wins");
}

// --- criterion 7: expected improvement vs numeric integration ---
void criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> us(0.1, 2.0);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double mean = u(rng), spread = us(rng), best = u(rng);
    // Simpson integration of E[max(best - X, 0)], X ~ N(mean, spread^2)
    const double lo = mean - 10.0 * spread, hi = best;
    double integral = 0.0;
    if (hi > lo) {
      const int n = 20000;  // even
      const double h = (hi - lo) / n;
      auto f = [&](double x) {
        const double z = (x - mean) / spread;
        return (best - x) *
               std::exp(-0.5 * z * z) / (spread * std::sqrt(2.0 * M_PI));
      };
      integral = f(lo) + f(hi);
      for (int i = 1; i < n; ++i)
        integral += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
      integral *= h / 3.0;
    }
    const double err = std::fabs(expected_improvement(mean, spread, best) -
                                 integral);
    worst = std::max(worst, err);
    if (err > 1e-6) ok = false;
  }
  // spread = 0 hinge
  if (expected_improvement(0.3, 0.0, 1.0) != 0.7) ok = false;
  if (expected_improvement(1.3, 0.0, 1.0) != 0.0) ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "max abs error %.2e", worst);
  report(7, "EI matches the numeric-integration oracle", ok, buf);
}

// --- criterion 8: EGO budget arithmetic ---
void criterion_8() {
  const SearchSpace space = SearchSpace::cash();
  const EgoRunFn run_fn = [](const CandidatePair&, int, int) {
    return HittingTime(1);  // stubbed zero-cost objective
  };
  EgoSettings settings;
  settings.runs_per_eval = 25;
  settings.run_budget = 10000;
  const EgoResult r = tune_ego(space, run_fn, 25000, settings, 8);
  const bool ok = r.audit.size() == 1000 && r.runs_spent == 25000;
  report(8, "EGO spends 25000 runs as exactly 1000 ERT evaluations", ok,
         std::to_string(r.audit.size()) + " evaluations, " +
             std::to_string(r.runs_spent) + " runs");
}

// --- criteria 9 & 10: desk-scale CASH improvement and exploration contrast ---
struct DeskResult {
  double verified_ert;
  bool defined;
  double unique_fraction;
};

DeskResult desk_tune(Method tuner, std::uint64_t seed, int threads) {
  ExperimentSpec spec;
  spec.method = tuner;
  spec.fids = {1};
  spec.instances = {1, 2, 3, 4, 5};
  spec.dim = 5;
  spec.run_budget = 10000;
  spec.tuner_budget = 2500;
  spec.verification_runs = 50;
  spec.precision = 1e-8;
  spec.seed = seed;
  spec.threads = threads;
  const ExperimentOutput out = run_integrated(spec, tuner);
  const MethodResult& r = out.per_function.front();
  DeskResult d;
  d.defined = r.verified.ert.has_value();
  d.verified_ert = r.verified.ert.value_or(
      std::numeric_limits<double>::infinity());
  d.unique_fraction = r.unique_confid_fraction;
  return d;
}

void criteria_9_and_10() {
  const int threads =
      std::max(1u, std::thread::hardware_concurrency());
  int improved_ego = 0, improved_racing = 0, ego_explores_more = 0;
  std::string detail;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const CandidatePair def = default_pair_for(decode_config(0), 5);
    const ErtSummary base = verify(def, {1, 2, 3, 4, 5}, 1, 5, 50, 10000,
                                   1e-8, seed, threads);
    const double base_ert =
        base.ert.value_or(std::numeric_limits<double>::infinity());
    const DeskResult ego = desk_tune(Method::kIntegratedEgo, seed, threads);
    const DeskResult racing =
        desk_tune(Method::kIntegratedRacing, seed, threads);
    if (ego.defined && ego.verified_ert <= base_ert) ++improved_ego;
    if (racing.defined && racing.verified_ert <= base_ert) ++improved_racing;
    if (ego.unique_fraction > racing.unique_fraction) ++ego_explores_more;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  " [seed %llu: base %.0f ego %.0f racing %.0f]",
                  static_cast<unsigned long long>(seed), base_ert,
                  ego.verified_ert, racing.verified_ert);
    detail += buf;
  }
  report(9, "desk-scale CASH beats the default CMA-ES",
         improved_ego >= 2 && improved_racing >= 2,
         "ego " + std::to_string(improved_ego) + "/3, racing " +
             std::to_string(improved_racing) + "/3" + detail);
  report(10, "EGO explores more unique variants than racing",
         ego_explores_more >= 2, std::to_string(ego_explores_more) + "/3 seeds");
}

// --- criterion 11: Kendall oracle ---
double brute_tau_b(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  long long C = 0, D = 0, Ta = 0, Tb = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j], db = b[i] - b[j];
      if (da == 0 && db == 0) continue;
      if (da == 0)
        ++Ta;
      else if (db == 0)
        ++Tb;
      else if ((da > 0) == (db > 0))
        ++C;
      else
        ++D;
    }
  const double n0 = 0.5 * n * (n - 1);
  const double den = std::sqrt((n0 - Ta) * (n0 - Tb));
  return den == 0.0 ? 0.0 : (C - D) / den;
}

void criterion_11() {
  bool ok = true;
  // all permutations of n <= 6 against the identity: untied, exact
  for (int n = 2; n <= 6 && ok; ++n) {
    std::vector<double> ident(n), perm(n);
    std::iota(ident.begin(), ident.end(), 1.0);
    perm = ident;
    do {
      long long C = 0, D = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          ((perm[i] < perm[j]) ? C : D) += 1;
      const double expect = static_cast<double>(C - D) / (0.5 * n * (n - 1));
      if (kendall_tau(ident, perm) != expect) ok = false;
    } while (std::next_permutation(perm.begin(), perm.end()) && ok);
  }
  // 100 random tied rankings of n = 20
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> r(1, 5);
  for (int trial = 0; trial < 100 && ok; ++trial) {
    std::vector<double> a(20), b(20);
    for (int i = 0; i < 20; ++i) {
      a[i] = r(rng);
      b[i] = r(rng);
    }
    if (std::fabs(kendall_tau(a, b) - brute_tau_b(a, b)) > 1e-12) ok = false;
  }
  report(11, "Kendall tau matches brute-force pair counting", ok, "");
}

// --- criterion 12: ECDF properties ---
void criterion_12() {
  std::mt19937_64 rng(12);
  bool ok = true;
  const std::vector<double> target_pool = {1e-8, 1e-2, 1.0};
  for (int trial = 0; trial < 50 && ok; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 30);
    std::uniform_int_distribution<long> t_dist(1, 500);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RunRecord> records(n_dist(rng));
    for (auto& r : records) {
      r.target = target_pool[t_dist(rng) % 3];
      r.budget = 500;
      if (u(rng) < 0.7) r.hitting_time = t_dist(rng);
    }
    std::vector<double> targets = {1e-8, 1e-2};
    std::vector<double> budgets;
    for (int i = 0; i <= 25; ++i) budgets.push_back(20.0 * i);
    const auto curve = ecdf(records, targets, budgets);
    // brute-force (run, target)-pair counting
    double prev = -1.0;
    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
      int pairs = 0, hit = 0;
      for (const auto& r : records) {
        bool in = false;
        for (double t : targets)
          if (std::fabs(r.target - t) <= 1e-9 * std::max(1.0, t)) in = true;
        if (!in) continue;
        ++pairs;
        if (r.hitting_time && *r.hitting_time <= budgets[bi]) ++hit;
      }
      const double expect =
          pairs == 0 ? 0.0 : static_cast<double>(hit) / pairs;
      const double got = curve[bi].fraction;
      if (std::fabs(got - expect) > 1e-12) ok = false;
      if (got < 0.0 || got > 1.0 || got < prev) ok = false;
      prev = got;
    }
  }
  report(12, "ECDF matches brute-force pair counting, monotone in [0,1]", ok,
         "");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criteria_9_and_10();
  criterion_11();
  criterion_12();
  if (g_failures) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
