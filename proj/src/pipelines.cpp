#include "modcash/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace modcash {

namespace {

constexpr std::uint64_t kTuningTag = 0x7071;
constexpr std::uint64_t kVerifyTag = 0x7e51;
constexpr std::uint64_t kEnumTag = 0xe404;

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < std::min(threads, n); ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

double run_cost(const RunRecord& rec) {
  // penalized hitting time, P = 2B
  if (rec.hitting_time) return static_cast<double>(*rec.hitting_time);
  return 2.0 * static_cast<double>(rec.budget);
}

struct TunerOutcome {
  CandidatePair best;
  double predicted = 0.0;
  long runs_spent = 0;
  long evaluated_pairs = 0;
  int distinct_confids = 0;
  double unique_fraction = 0.0;
};

TunerOutcome tune_one_function(const ExperimentSpec& spec, int fid,
                               Method tuner, std::uint64_t seed) {
  const SearchSpace space = SearchSpace::cash();
  const int n_inst = static_cast<int>(spec.instances.size());
  TunerOutcome out;
  std::vector<int> confids;

  if (tuner == Method::kIntegratedRacing) {
    const RaceCostFn cost = [&](const CandidatePair& pair, int step,
                                std::uint64_t run_seed) {
      const Problem p =
          make_problem(fid, spec.instances[step % n_inst], spec.dim);
      return run_cost(run(pair, p, p.target_for(spec.precision),
                          spec.run_budget, run_seed));
    };
    RacingSettings rs = spec.racing;
    const RacingResult r = tune_racing(space, cost, spec.tuner_budget, rs,
                                       seed_hash(seed, kTuningTag, fid));
    out.best = r.best;
    out.predicted = r.predicted_cost;
    out.runs_spent = r.runs_spent;
    std::set<int> ids, cand_ids;
    std::set<std::pair<int, int>> seen;
    for (const auto& e : r.audit) {
      ids.insert(encode_config(e.pair.config));
      if (seen.insert({e.candidate_id, 0}).second)
        confids.push_back(encode_config(e.pair.config));
    }
    out.evaluated_pairs = static_cast<long>(confids.size());
    out.distinct_confids = static_cast<int>(ids.size());
  } else {
    const EgoRunFn run_fn = [&](const CandidatePair& pair, int eval_index,
                                int run_index) {
      const Problem p =
          make_problem(fid, spec.instances[run_index % n_inst], spec.dim);
      const RunRecord rec =
          run(pair, p, p.target_for(spec.precision), spec.run_budget,
              seed_hash(seed, kTuningTag, fid, eval_index, run_index));
      return rec.hitting_time;
    };
    EgoSettings es = spec.ego;
    es.runs_per_eval = spec.runs_per_eval;
    es.run_budget = spec.run_budget;
    const EgoResult r = tune_ego(space, run_fn, spec.tuner_budget, es,
                                 seed_hash(seed, kTuningTag, fid));
    out.best = r.best;
    out.predicted = r.predicted_ert;
    out.runs_spent = r.runs_spent;
    std::set<int> ids;
    for (const auto& e : r.audit) {
      const int id = encode_config(e.pair.config);
      ids.insert(id);
      confids.push_back(id);
    }
    out.evaluated_pairs = static_cast<long>(r.audit.size());
    out.distinct_confids = static_cast<int>(ids.size());
  }
  out.unique_fraction =
      out.evaluated_pairs == 0
          ? 0.0
          : static_cast<double>(out.distinct_confids) / out.evaluated_pairs;
  return out;
}

MethodResult finish_result(const ExperimentSpec& spec, int fid,
                           const TunerOutcome& tuned,
                           std::vector<RunRecord>* log) {
  MethodResult res;
  res.fid = fid;
  res.best = tuned.best;
  res.predicted_cost = tuned.predicted;
  res.verified = verify(tuned.best, spec.instances, fid, spec.dim,
                        spec.verification_runs, spec.run_budget, spec.precision,
                        spec.seed, spec.threads, log);
  const double reference =
      res.verified.ert ? *res.verified.ert : res.verified.aht;
  if (reference > 0.0 && std::isfinite(reference)) {
    res.pred_err_abs = prediction_error(tuned.predicted, reference);
    res.pred_err_signed = (tuned.predicted - reference) / reference;
  }
  res.runs_spent = tuned.runs_spent + spec.verification_runs;
  res.tuner_evaluated_pairs = tuned.evaluated_pairs;
  res.distinct_confids = tuned.distinct_confids;
  res.unique_confid_fraction = tuned.unique_fraction;
  return res;
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "naive_sequential") return Method::kNaiveSequential;
  if (name == "standard_sequential") return Method::kStandardSequential;
  if (name == "integrated_racing") return Method::kIntegratedRacing;
  if (name == "integrated_ego") return Method::kIntegratedEgo;
  if (name == "enumeration_only") return Method::kEnumerationOnly;
  throw std::invalid_argument("unknown method: " + name);
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::kNaiveSequential: return "naive_sequential";
    case Method::kStandardSequential: return "standard_sequential";
    case Method::kIntegratedRacing: return "integrated_racing";
    case Method::kIntegratedEgo: return "integrated_ego";
    case Method::kEnumerationOnly: return "enumeration_only";
  }
  return "?";
}

// default hyperparameters depend on the config through the weights mode
CandidatePair default_pair_for(const ModuleConfiguration& config, int dim) {
  const int lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(dim)));
  const int mu = lambda / 2;
  const Eigen::VectorXd w = compute_weights(mu, config[8]);
  const double mu_eff = 1.0 / w.squaredNorm();
  return {config, default_hyperparameters(dim, mu_eff)};
}

const std::vector<int>& common_variants() {
  static const std::vector<int> ids = {0,    1,    2,    3,    594,
                                       1152, 2304, 2306, 3457, 3458};
  return ids;
}

std::map<int, ErtSummary> enumerate_static(
    const std::vector<int>& conf_ids, const std::vector<int>& instances,
    int fid, int dim, int runs_per_instance, long run_budget, double precision,
    std::uint64_t seed, int threads, std::vector<RunRecord>* log) {
  if (conf_ids.empty())
    throw std::invalid_argument("enumerate_static: empty config set");
  const int n_runs =
      static_cast<int>(instances.size()) * runs_per_instance;
  std::vector<std::vector<RunRecord>> records(conf_ids.size());
  parallel_for(static_cast<int>(conf_ids.size()), threads, [&](int ci) {
    const CandidatePair pair = default_pair_for(decode_config(conf_ids[ci]), dim);
    records[ci].reserve(n_runs);
    for (std::size_t ii = 0; ii < instances.size(); ++ii) {
      const Problem p = make_problem(fid, instances[ii], dim);
      for (int r = 0; r < runs_per_instance; ++r)
        records[ci].push_back(
            run(pair, p, p.target_for(precision), run_budget,
                seed_hash(seed, kEnumTag, fid, conf_ids[ci], instances[ii], r)));
    }
  });
  std::map<int, ErtSummary> out;
  for (std::size_t ci = 0; ci < conf_ids.size(); ++ci) {
    std::vector<HittingTime> times;
    for (const auto& r : records[ci]) {
      times.push_back(r.hitting_time);
      if (log) log->push_back(r);
    }
    out[conf_ids[ci]] = summarize(times, run_budget, 2.0 * run_budget);
  }
  return out;
}

std::vector<int> select_standard_set(const std::map<int, ErtSummary>& summaries,
                                     const std::vector<int>& common_ids) {
  if (summaries.size() < 210)
    throw std::invalid_argument(
        "select_standard_set: need at least 210 ranked configs");
  const Ranking ranking = rank_variants(summaries);
  std::vector<int> out;
  const auto add = [&](int id) {
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  for (int i = 0; i < 10; ++i) add(ranking.entries[i].conf_id);
  for (int i = 199; i < 209; ++i) add(ranking.entries[i].conf_id);
  for (int id : common_ids) add(id);
  // backfill from rank 211 onward to keep exactly 30
  for (std::size_t i = 210;
       out.size() < 30 && i < ranking.entries.size(); ++i)
    add(ranking.entries[i].conf_id);
  out.resize(std::min<std::size_t>(out.size(), 30));
  return out;
}

ErtSummary verify(const CandidatePair& pair, const std::vector<int>& instances,
                  int fid, int dim, int n_runs, long run_budget,
                  double precision, std::uint64_t seed, int threads,
                  std::vector<RunRecord>* log) {
  if (n_runs < 1) throw std::invalid_argument("verify: n_runs >= 1 required");
  // round-robin split over instances
  std::vector<std::pair<int, int>> plan;  // (instance, per-instance run idx)
  std::vector<int> counts(instances.size(), 0);
  for (int r = 0; r < n_runs; ++r) {
    const int ii = r % static_cast<int>(instances.size());
    plan.emplace_back(instances[ii], counts[ii]++);
  }
  std::vector<RunRecord> records(n_runs);
  parallel_for(n_runs, threads, [&](int r) {
    const Problem p = make_problem(fid, plan[r].first, dim);
    records[r] =
        run(pair, p, p.target_for(precision), run_budget,
            seed_hash(seed, kVerifyTag, fid, plan[r].first, plan[r].second));
  });
  std::vector<HittingTime> times;
  for (const auto& r : records) {
    times.push_back(r.hitting_time);
    if (log) log->push_back(r);
  }
  return summarize(times, run_budget, 2.0 * run_budget);
}

ExperimentOutput run_naive_sequential(const ExperimentSpec& spec) {
  ExperimentOutput out;
  for (int fid : spec.fids) {
    std::vector<int> ids = spec.enumeration_configs;
    if (ids.empty()) {
      ids.resize(kNumConfigs);
      std::iota(ids.begin(), ids.end(), 0);
    }
    const auto summaries = enumerate_static(
        ids, spec.instances, fid, spec.dim, spec.runs_per_instance,
        spec.run_budget, spec.precision, spec.seed, spec.threads);
    const Ranking ranking = rank_variants(summaries);
    const ModuleConfiguration winner =
        decode_config(ranking.entries.front().conf_id);
    const long enum_runs = static_cast<long>(ids.size()) *
                           spec.instances.size() * spec.runs_per_instance;

    // tune only the continuous hyperparameters of the selected variant
    const SearchSpace space = SearchSpace::hyper_only(winner);
    const int n_inst = static_cast<int>(spec.instances.size());
    const EgoRunFn run_fn = [&](const CandidatePair& pair, int eval_index,
                                int run_index) {
      const Problem p =
          make_problem(fid, spec.instances[run_index % n_inst], spec.dim);
      return run(pair, p, p.target_for(spec.precision), spec.run_budget,
                 seed_hash(spec.seed, kTuningTag, fid, eval_index, run_index))
          .hitting_time;
    };
    EgoSettings es = spec.ego;
    es.runs_per_eval = spec.runs_per_eval;
    es.run_budget = spec.run_budget;
    const EgoResult r = tune_ego(space, run_fn, spec.tuner_budget, es,
                                 seed_hash(spec.seed, kTuningTag, fid));
    TunerOutcome tuned;
    tuned.best = r.best;
    tuned.predicted = r.predicted_ert;
    tuned.runs_spent = enum_runs + r.runs_spent;
    tuned.evaluated_pairs = static_cast<long>(r.audit.size());
    tuned.distinct_confids = 1;
    tuned.unique_fraction =
        r.audit.empty() ? 0.0 : 1.0 / static_cast<double>(r.audit.size());
    out.per_function.push_back(
        finish_result(spec, fid, tuned, &out.verification_records));
  }
  return out;
}

ExperimentOutput run_standard_sequential(const ExperimentSpec& spec) {
  ExperimentOutput out;
  for (int fid : spec.fids) {
    std::vector<int> ids = spec.enumeration_configs;
    if (ids.empty()) {
      ids.resize(kNumConfigs);
      std::iota(ids.begin(), ids.end(), 0);
    }
    const auto summaries = enumerate_static(
        ids, spec.instances, fid, spec.dim, spec.runs_per_instance,
        spec.run_budget, spec.precision, spec.seed, spec.threads);
    const std::vector<int> chosen =
        select_standard_set(summaries, common_variants());
    const long enum_runs = static_cast<long>(ids.size()) *
                           spec.instances.size() * spec.runs_per_instance;
    const int n_inst = static_cast<int>(spec.instances.size());

    long tuner_runs = 0, evaluated = 0;
    std::optional<MethodResult> best;
    std::set<int> distinct;
    for (int conf_id : chosen) {
      const ModuleConfiguration config = decode_config(conf_id);
      distinct.insert(conf_id);
      const SearchSpace space = SearchSpace::hyper_only(config);
      const EgoRunFn run_fn = [&](const CandidatePair& pair, int eval_index,
                                  int run_index) {
        const Problem p =
            make_problem(fid, spec.instances[run_index % n_inst], spec.dim);
        return run(pair, p, p.target_for(spec.precision), spec.run_budget,
                   seed_hash(spec.seed, kTuningTag, fid, conf_id, eval_index,
                             run_index))
            .hitting_time;
      };
      EgoSettings es = spec.ego;
      es.runs_per_eval = spec.runs_per_eval;
      es.run_budget = spec.run_budget;
      const EgoResult r =
          tune_ego(space, run_fn, spec.per_config_tuner_budget, es,
                   seed_hash(spec.seed, kTuningTag, fid, conf_id));
      tuner_runs += r.runs_spent;
      evaluated += static_cast<long>(r.audit.size());

      MethodResult candidate;
      candidate.fid = fid;
      candidate.best = r.best;
      candidate.predicted_cost = r.predicted_ert;
      candidate.verified =
          verify(r.best, spec.instances, fid, spec.dim, spec.verification_runs,
                 spec.run_budget, spec.precision, spec.seed, spec.threads,
                 &out.verification_records);
      const double ref = candidate.verified.ert ? *candidate.verified.ert
                                                : candidate.verified.aht;
      if (ref > 0.0 && std::isfinite(ref)) {
        candidate.pred_err_abs = prediction_error(r.predicted_ert, ref);
        candidate.pred_err_signed = (r.predicted_ert - ref) / ref;
      }
      const double cur = candidate.verified.ert.value_or(
          std::numeric_limits<double>::infinity());
      const double prev =
          best ? best->verified.ert.value_or(
                     std::numeric_limits<double>::infinity())
               : std::numeric_limits<double>::infinity();
      if (!best || cur < prev) best = candidate;
    }
    best->runs_spent = enum_runs + tuner_runs +
                       static_cast<long>(chosen.size()) * spec.verification_runs;
    best->tuner_evaluated_pairs = evaluated;
    best->distinct_confids = static_cast<int>(distinct.size());
    best->unique_confid_fraction =
        evaluated == 0 ? 0.0
                       : static_cast<double>(distinct.size()) / evaluated;
    out.per_function.push_back(*best);
  }
  return out;
}

ExperimentOutput run_integrated(const ExperimentSpec& spec, Method tuner) {
  if (tuner != Method::kIntegratedRacing && tuner != Method::kIntegratedEgo)
    throw std::invalid_argument("run_integrated: tuner must be racing or ego");
  ExperimentOutput out;
  for (int fid : spec.fids) {
    const TunerOutcome tuned = tune_one_function(spec, fid, tuner, spec.seed);
    out.per_function.push_back(
        finish_result(spec, fid, tuned, &out.verification_records));
  }
  return out;
}

ExperimentOutput run_method(const ExperimentSpec& spec) {
  switch (spec.method) {
    case Method::kNaiveSequential:
      return run_naive_sequential(spec);
    case Method::kStandardSequential:
      return run_standard_sequential(spec);
    case Method::kIntegratedRacing:
    case Method::kIntegratedEgo:
      return run_integrated(spec, spec.method);
    case Method::kEnumerationOnly: {
      ExperimentOutput out;
      for (int fid : spec.fids) {
        std::vector<int> ids = spec.enumeration_configs;
        if (ids.empty()) {
          ids.resize(kNumConfigs);
          std::iota(ids.begin(), ids.end(), 0);
        }
        const auto summaries = enumerate_static(
            ids, spec.instances, fid, spec.dim, spec.runs_per_instance,
            spec.run_budget, spec.precision, spec.seed, spec.threads,
            &out.verification_records);
        const Ranking ranking = rank_variants(summaries);
        const int winner_id = ranking.entries.front().conf_id;
        TunerOutcome tuned;
        tuned.best = default_pair_for(decode_config(winner_id), spec.dim);
        tuned.predicted =
            summaries.at(winner_id).ert.value_or(2.0 * spec.run_budget);
        tuned.runs_spent = static_cast<long>(ids.size()) *
                           spec.instances.size() * spec.runs_per_instance;
        tuned.evaluated_pairs = static_cast<long>(ids.size());
        tuned.distinct_confids = static_cast<int>(ids.size());
        tuned.unique_fraction = 1.0;
        out.per_function.push_back(
            finish_result(spec, fid, tuned, &out.verification_records));
      }
      return out;
    }
  }
  throw std::logic_error("run_method: unreachable");
}

std::vector<SweepRow> budget_sweep(const ExperimentSpec& spec,
                                   const std::vector<long>& budgets,
                                   int repeats) {
  if (budgets.empty() || repeats < 1)
    throw std::invalid_argument("budget_sweep: nonempty budgets, repeats >= 1");
  const Method tuner = spec.method == Method::kIntegratedRacing
                           ? Method::kIntegratedRacing
                           : Method::kIntegratedEgo;
  std::vector<SweepRow> rows;
  for (long b : budgets) {
    for (int rep = 0; rep < repeats; ++rep) {
      ExperimentSpec s = spec;
      s.tuner_budget = b;
      s.seed = seed_hash(spec.seed, 0x5eed, static_cast<std::uint64_t>(b), rep);
      ExperimentOutput o = run_integrated(s, tuner);
      SweepRow row{b, rep, o.per_function.front(), {}};
      for (const auto& rec : o.verification_records)
        row.verified_times.push_back(rec.hitting_time);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

InstanceAnalysis instance_analysis(const std::vector<RunRecord>& records) {
  // group hitting times by (instance, confid)
  std::map<int, std::map<int, std::vector<HittingTime>>> by_instance;
  long max_budget = 1;
  for (const auto& r : records) {
    by_instance[r.instance][encode_config(r.pair.config)].push_back(
        r.hitting_time);
    max_budget = std::max(max_budget, r.budget);
  }
  if (by_instance.empty())
    throw std::invalid_argument("instance_analysis: no records");

  // configs present on every instance
  std::set<int> shared;
  bool first = true;
  for (const auto& [inst, confs] : by_instance) {
    std::set<int> here;
    for (const auto& [id, _] : confs) here.insert(id);
    if (first) {
      shared = here;
      first = false;
    } else {
      std::set<int> inter;
      std::set_intersection(shared.begin(), shared.end(), here.begin(),
                            here.end(), std::inserter(inter, inter.begin()));
      shared = inter;
    }
  }
  if (shared.empty())
    throw std::invalid_argument("instance_analysis: no shared configs");

  InstanceAnalysis a;
  a.conf_ids.assign(shared.begin(), shared.end());
  for (const auto& [inst, confs] : by_instance) {
    a.instances.push_back(inst);
    std::map<int, ErtSummary> summaries;
    for (int id : a.conf_ids)
      summaries[id] =
          summarize(confs.at(id), max_budget, 2.0 * max_budget);
    const Ranking ranking = rank_variants(summaries);
    std::map<int, double> rank_of;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i)
      rank_of[ranking.entries[i].conf_id] = static_cast<double>(i + 1);
    std::vector<double> row;
    for (int id : a.conf_ids) row.push_back(rank_of.at(id));
    a.rankings.push_back(std::move(row));
  }

  const std::size_t k = a.instances.size();
  a.kendall.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double tau = a.conf_ids.size() >= 2
                             ? kendall_tau(a.rankings[i], a.rankings[j])
                             : 1.0;
      a.kendall[i][j] = a.kendall[j][i] = tau;
    }
  return a;
}

std::vector<StabilityRow> stability_study(const ExperimentSpec& spec,
                                          int repeats) {
  if (repeats < 2)
    throw std::invalid_argument("stability_study: repeats >= 2 required");
  const Method tuner = spec.method == Method::kIntegratedRacing
                           ? Method::kIntegratedRacing
                           : Method::kIntegratedEgo;
  std::vector<StabilityRow> rows;
  for (int rep = 0; rep < repeats; ++rep) {
    ExperimentSpec s = spec;
    s.seed = seed_hash(spec.seed, 0x57ab, rep);
    ExperimentOutput o = run_integrated(s, tuner);
    StabilityRow row{rep, o.per_function.front(), {}};
    for (const auto& rec : o.verification_records)
      row.verified_times.push_back(rec.hitting_time);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_runs_jsonl(const std::string& path,
                      const std::vector<RunRecord>& records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  for (const auto& r : records) os << r.to_jsonl() << "\n";
}

void write_ert_table_csv(const std::string& path, int fid,
                         const std::string& instance_set,
                         const std::map<int, ErtSummary>& summaries) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "fid,instance_set,confid,c1,cc,cmu,n_runs,n_success,ert,aht\n";
  os.precision(17);
  for (const auto& [id, s] : summaries) {
    const CandidatePair pair = default_pair_for(decode_config(id), 5);
    os << fid << "," << instance_set << "," << id << "," << pair.hyper.c1
       << "," << pair.hyper.cc << "," << pair.hyper.c_mu << "," << s.n_runs
       << "," << s.n_success << ",";
    if (s.ert)
      os << *s.ert;
    else
      os << "undefined";
    os << "," << s.aht << "\n";
  }
}

void write_ecdf_csv(const std::string& path,
                    const std::vector<EcdfPoint>& curve) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "budget,fraction\n";
  os.precision(17);
  for (const auto& p : curve) os << p.budget << "," << p.fraction << "\n";
}

void write_kendall_csv(const std::string& path, const InstanceAnalysis& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "instance";
  for (int i : a.instances) os << "," << i;
  os << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < a.instances.size(); ++i) {
    os << a.instances[i];
    for (std::size_t j = 0; j < a.instances.size(); ++j)
      os << "," << a.kendall[i][j];
    os << "\n";
  }
}

void write_method_summary_json(const std::string& path,
                               const ExperimentSpec& spec,
                               const ExperimentOutput& out) {
  nlohmann::json j;
  j["method"] = method_to_string(spec.method);
  j["dim"] = spec.dim;
  j["precision"] = spec.precision;
  j["run_budget"] = spec.run_budget;
  j["tuner_budget"] = spec.tuner_budget;
  j["verification_runs"] = spec.verification_runs;
  j["seed"] = spec.seed;
  j["results"] = nlohmann::json::array();
  for (const auto& r : out.per_function) {
    nlohmann::json e;
    e["fid"] = r.fid;
    e["confid"] = encode_config(r.best.config);
    e["activations"] = r.best.config.to_string();
    e["c1"] = r.best.hyper.c1;
    e["cc"] = r.best.hyper.cc;
    e["cmu"] = r.best.hyper.c_mu;
    e["predicted_ert"] = r.predicted_cost;
    if (r.verified.ert)
      e["verified_ert"] = *r.verified.ert;
    else
      e["verified_ert"] = nullptr;
    e["verified_aht"] = r.verified.aht;
    e["n_success"] = r.verified.n_success;
    e["n_runs"] = r.verified.n_runs;
    e["prediction_error"] = r.pred_err_abs;
    e["prediction_error_signed"] = r.pred_err_signed;
    e["runs_spent"] = r.runs_spent;
    e["tuner_evaluated_pairs"] = r.tuner_evaluated_pairs;
    e["distinct_confids"] = r.distinct_confids;
    e["unique_confid_fraction"] = r.unique_confid_fraction;
    j["results"].push_back(e);
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << j.dump(2) << "\n";
}

}  // namespace modcash
