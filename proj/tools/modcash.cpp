// modcash command-line front end.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "modcash/pipelines.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace modcash;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("MODCASH_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0')
    throw std::invalid_argument("MODCASH_SEED is not an integer");
  return static_cast<std::uint64_t>(v);
}

CandidatePair make_pair_checked(int conf_id, int dim, std::optional<double> c1,
                                std::optional<double> cc,
                                std::optional<double> cmu) {
  const ModuleConfiguration config = decode_config(conf_id);
  CandidatePair pair = default_pair_for(config, dim);
  if (c1) pair.hyper.c1 = *c1;
  if (cc) pair.hyper.cc = *cc;
  if (cmu) pair.hyper.c_mu = *cmu;
  pair.hyper = repair_hyperparameters(pair.hyper);
  return pair;
}

std::vector<RunRecord> read_jsonl(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open log file: " + path);
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    RunRecord r;
    r.fid = j.at("fid").get<int>();
    r.instance = j.at("instance").get<int>();
    r.pair.config = decode_config(j.at("confid").get<int>());
    r.pair.hyper.c1 = j.at("c1").get<double>();
    r.pair.hyper.cc = j.at("cc").get<double>();
    r.pair.hyper.c_mu = j.at("cmu").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.budget = j.at("budget").get<long>();
    r.target = j.at("target").get<double>();
    if (!j.at("hitting_time").is_null())
      r.hitting_time = j.at("hitting_time").get<long>();
    r.best_f = j.at("best_f").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

ExperimentSpec spec_from_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  ExperimentSpec spec;
  if (!j.contains("method"))
    throw std::invalid_argument("config: missing required field 'method'");
  spec.method = method_from_string(j.at("method").get<std::string>());
  if (!j.contains("tuner_budget"))
    throw std::invalid_argument("config: missing required field 'tuner_budget'");
  spec.tuner_budget = j.at("tuner_budget").get<long>();
  if (j.contains("fids")) spec.fids = j.at("fids").get<std::vector<int>>();
  if (j.contains("instances"))
    spec.instances = j.at("instances").get<std::vector<int>>();
  if (j.contains("dim")) spec.dim = j.at("dim").get<int>();
  if (j.contains("run_budget")) spec.run_budget = j.at("run_budget").get<long>();
  if (j.contains("verification_runs"))
    spec.verification_runs = j.at("verification_runs").get<int>();
  if (j.contains("precision")) spec.precision = j.at("precision").get<double>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) spec.threads = j.at("threads").get<int>();
  if (j.contains("enumeration_configs"))
    spec.enumeration_configs =
        j.at("enumeration_configs").get<std::vector<int>>();
  if (j.contains("runs_per_instance"))
    spec.runs_per_instance = j.at("runs_per_instance").get<int>();
  if (j.contains("per_config_tuner_budget"))
    spec.per_config_tuner_budget = j.at("per_config_tuner_budget").get<long>();
  if (j.contains("runs_per_eval"))
    spec.runs_per_eval = j.at("runs_per_eval").get<int>();
  if (spec.fids.empty() || spec.instances.empty())
    throw std::invalid_argument("config: fids and instances must be nonempty");
  if (spec.dim < 2 || spec.run_budget < 1 || spec.tuner_budget < 1 ||
      spec.verification_runs < 1 || !(spec.precision > 0.0))
    throw std::invalid_argument("config: invalid numeric field");
  return spec;
}

void write_ranking_csv(const std::string& path, const Ranking& ranking) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "rank,confid,ert,n_success\n";
  os.precision(17);
  for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    os << (i + 1) << "," << e.conf_id << ",";
    if (e.ert)
      os << *e.ert;
    else
      os << "undefined";
    os << "," << e.n_success << "\n";
  }
}

void print_results(const ExperimentOutput& out) {
  for (const auto& r : out.per_function) {
    std::cout << "F" << r.fid << " best confid "
              << encode_config(r.best.config) << " ("
              << r.best.config.to_string() << ")"
              << " c1=" << r.best.hyper.c1 << " cc=" << r.best.hyper.cc
              << " cmu=" << r.best.hyper.c_mu
              << " predicted=" << r.predicted_cost << " verified_ert=";
    if (r.verified.ert)
      std::cout << *r.verified.ert;
    else
      std::cout << "undefined";
    std::cout << " (" << r.verified.n_success << "/" << r.verified.n_runs
              << " ok, " << r.runs_spent << " runs spent)\n";
  }
}

struct CommonArgs {
  std::string out_dir = "results";
  std::uint64_t seed = 1;
  int threads = 1;
};

int dispatch(int argc, char** argv) {
  CLI::App app{"modcash: CASH tuning for a modular CMA-ES"};
  app.require_subcommand(1);

  // --- run ---
  auto* run_cmd = app.add_subcommand("run", "Execute one optimizer run");
  int r_fid = 1, r_instance = 0, r_dim = 5, r_confid = 0;
  long r_budget = 10000;
  double r_target = 1e-8;
  std::uint64_t r_seed = 7;
  std::optional<double> r_c1, r_cc, r_cmu;
  std::string r_out;
  run_cmd->add_option("--fid", r_fid, "Benchmark function id")->capture_default_str();
  run_cmd->add_option("--instance", r_instance, "Problem instance")->capture_default_str();
  run_cmd->add_option("--dim", r_dim, "Dimensionality")->capture_default_str();
  run_cmd->add_option("--confid", r_confid, "Module configuration id")->capture_default_str();
  run_cmd->add_option("--budget", r_budget, "Evaluation budget B")->capture_default_str();
  run_cmd->add_option("--target", r_target, "Target precision")->capture_default_str();
  run_cmd->add_option("--seed", r_seed, "Run seed")->capture_default_str();
  run_cmd->add_option("--c1", r_c1, "Rank-one learning rate (default: formula)");
  run_cmd->add_option("--cc", r_cc, "Cumulation constant (default: formula)");
  run_cmd->add_option("--cmu", r_cmu, "Rank-mu learning rate (default: formula)");
  run_cmd->add_option("--out", r_out, "Append the JSONL record to this file");

  // --- enumerate ---
  auto* enum_cmd = app.add_subcommand("enumerate", "Static enumeration of configurations");
  int e_fid = 1, e_dim = 5, e_rpi = 5;
  long e_budget = 10000;
  double e_precision = 1e-8;
  std::vector<int> e_instances = {1, 2, 3, 4, 5};
  std::vector<int> e_confids;
  CommonArgs e_common;
  enum_cmd->add_option("--fid", e_fid, "Benchmark function id")->capture_default_str();
  enum_cmd->add_option("--dim", e_dim, "Dimensionality")->capture_default_str();
  enum_cmd->add_option("--instances", e_instances, "Instance list")->capture_default_str();
  enum_cmd->add_option("--confids", e_confids, "ConfIDs to enumerate (default: all 4608)");
  enum_cmd->add_option("--runs-per-instance", e_rpi, "Runs per (config, instance)")->capture_default_str();
  enum_cmd->add_option("--budget", e_budget, "Evaluation budget B")->capture_default_str();
  enum_cmd->add_option("--precision", e_precision, "Target precision")->capture_default_str();
  enum_cmd->add_option("--seed", e_common.seed, "Master seed")->capture_default_str();
  enum_cmd->add_option("--threads", e_common.threads, "Worker threads")->capture_default_str();
  enum_cmd->add_option("--out", e_common.out_dir, "Output directory")->capture_default_str();

  // --- tune ---
  auto* tune_cmd = app.add_subcommand("tune", "Run a tuning pipeline from a JSON config");
  std::string t_config;
  CommonArgs t_common;
  std::optional<std::uint64_t> t_seed;
  std::optional<int> t_threads;
  tune_cmd->add_option("--config", t_config, "Experiment JSON config file")->required();
  tune_cmd->add_option("--out", t_common.out_dir, "Output directory")->capture_default_str();
  tune_cmd->add_option("--seed", t_seed, "Seed override");
  tune_cmd->add_option("--threads", t_threads, "Worker threads override");

  // --- verify ---
  auto* ver_cmd = app.add_subcommand("verify", "Verify one candidate with fresh runs");
  int v_fid = 1, v_dim = 5, v_confid = 0, v_runs = 50;
  long v_budget = 10000;
  double v_precision = 1e-8;
  std::vector<int> v_instances = {1, 2, 3, 4, 5};
  std::optional<double> v_c1, v_cc, v_cmu;
  CommonArgs v_common;
  std::string v_out;
  ver_cmd->add_option("--fid", v_fid, "Benchmark function id")->capture_default_str();
  ver_cmd->add_option("--dim", v_dim, "Dimensionality")->capture_default_str();
  ver_cmd->add_option("--confid", v_confid, "Module configuration id")->capture_default_str();
  ver_cmd->add_option("--instances", v_instances, "Instance list")->capture_default_str();
  ver_cmd->add_option("--runs", v_runs, "Number of verification runs")->capture_default_str();
  ver_cmd->add_option("--budget", v_budget, "Evaluation budget B")->capture_default_str();
  ver_cmd->add_option("--precision", v_precision, "Target precision")->capture_default_str();
  ver_cmd->add_option("--seed", v_common.seed, "Master seed")->capture_default_str();
  ver_cmd->add_option("--threads", v_common.threads, "Worker threads")->capture_default_str();
  ver_cmd->add_option("--c1", v_c1, "Rank-one learning rate (default: formula)");
  ver_cmd->add_option("--cc", v_cc, "Cumulation constant (default: formula)");
  ver_cmd->add_option("--cmu", v_cmu, "Rank-mu learning rate (default: formula)");
  ver_cmd->add_option("--out", v_out, "Append verification records to this JSONL file");

  // --- analyze ---
  auto* an_cmd = app.add_subcommand("analyze", "Derive csv outputs from a runs.jsonl log");
  std::string a_log = "runs.jsonl";
  std::string a_out = "results";
  an_cmd->add_option("--log", a_log, "Input JSONL log")->capture_default_str();
  an_cmd->add_option("--out", a_out, "Output directory")->capture_default_str();

  // --- sweep ---
  auto* sw_cmd = app.add_subcommand("sweep", "Tuner-budget sweep for an integrated method");
  std::string s_config;
  std::vector<long> s_budgets;
  int s_repeats = 3;
  std::string s_out = "results";
  std::optional<std::uint64_t> s_seed;
  sw_cmd->add_option("--config", s_config, "Experiment JSON config file")->required();
  sw_cmd->add_option("--budgets", s_budgets, "Tuner budgets to sweep")->required();
  sw_cmd->add_option("--repeats", s_repeats, "Repeats per budget")->capture_default_str();
  sw_cmd->add_option("--out", s_out, "Output directory")->capture_default_str();
  sw_cmd->add_option("--seed", s_seed, "Seed override");

  // --- stability ---
  auto* st_cmd = app.add_subcommand("stability", "Repeated tuner runs for stability analysis");
  std::string y_config;
  int y_repeats = 5;
  std::string y_out = "results";
  std::optional<std::uint64_t> y_seed;
  st_cmd->add_option("--config", y_config, "Experiment JSON config file")->required();
  st_cmd->add_option("--repeats", y_repeats, "Number of independent repeats")->capture_default_str();
  st_cmd->add_option("--out", y_out, "Output directory")->capture_default_str();
  st_cmd->add_option("--seed", y_seed, "Seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::optional<std::uint64_t> global_seed = env_seed();

  if (run_cmd->parsed()) {
    if (global_seed) r_seed = *global_seed;
    CandidatePair pair;
    try {
      pair = make_pair_checked(r_confid, r_dim, r_c1, r_cc, r_cmu);
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid configuration: " << e.what() << "\n";
      return kExitUsage;
    }
    const Problem p = make_problem(r_fid, r_instance, r_dim);
    const RunRecord rec =
        run(pair, p, p.target_for(r_target), r_budget, r_seed);
    std::cout << rec.to_jsonl() << "\n";
    if (!r_out.empty()) {
      std::ofstream os(r_out, std::ios::app);
      if (!os) throw std::runtime_error("cannot open " + r_out);
      os << rec.to_jsonl() << "\n";
    }
    return kExitOk;
  }

  if (enum_cmd->parsed()) {
    if (global_seed) e_common.seed = *global_seed;
    std::vector<int> ids = e_confids;
    if (ids.empty()) {
      ids.resize(kNumConfigs);
      std::iota(ids.begin(), ids.end(), 0);
    }
    for (int id : ids)
      if (id < 0 || id >= kNumConfigs) {
        std::cerr << "invalid configuration: confid " << id << " out of range\n";
        return kExitUsage;
      }
    fs::create_directories(e_common.out_dir);
    std::vector<RunRecord> log;
    const auto summaries = enumerate_static(
        ids, e_instances, e_fid, e_dim, e_rpi, e_budget, e_precision,
        e_common.seed, e_common.threads, &log);
    write_runs_jsonl((fs::path(e_common.out_dir) / "runs.jsonl").string(), log);
    std::ostringstream name;
    name << "I";
    for (std::size_t i = 0; i < e_instances.size(); ++i)
      name << (i ? "-" : "") << e_instances[i];
    write_ert_table_csv((fs::path(e_common.out_dir) / "ert_table.csv").string(),
                        e_fid, name.str(), summaries);
    const Ranking ranking = rank_variants(summaries);
    write_ranking_csv((fs::path(e_common.out_dir) / "ranking.csv").string(),
                      ranking);
    const auto& top = ranking.entries.front();
    std::cout << "best confid " << top.conf_id << " ert ";
    if (top.ert)
      std::cout << *top.ert;
    else
      std::cout << "undefined";
    std::cout << " (" << summaries.size() << " configs)\n";
    return kExitOk;
  }

  if (tune_cmd->parsed()) {
    ExperimentSpec spec = spec_from_json(t_config);
    if (t_seed) spec.seed = *t_seed;
    if (global_seed) spec.seed = *global_seed;
    if (t_threads) spec.threads = *t_threads;
    fs::create_directories(t_common.out_dir);
    const ExperimentOutput out = run_method(spec);
    write_runs_jsonl((fs::path(t_common.out_dir) / "runs.jsonl").string(),
                     out.verification_records);
    write_method_summary_json(
        (fs::path(t_common.out_dir) / "method_summary.json").string(), spec,
        out);
    print_results(out);
    return kExitOk;
  }

  if (ver_cmd->parsed()) {
    if (global_seed) v_common.seed = *global_seed;
    CandidatePair pair;
    try {
      pair = make_pair_checked(v_confid, v_dim, v_c1, v_cc, v_cmu);
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid configuration: " << e.what() << "\n";
      return kExitUsage;
    }
    std::vector<RunRecord> log;
    const ErtSummary s =
        verify(pair, v_instances, v_fid, v_dim, v_runs, v_budget, v_precision,
               v_common.seed, v_common.threads, &log);
    if (!v_out.empty()) {
      std::ofstream os(v_out, std::ios::app);
      if (!os) throw std::runtime_error("cannot open " + v_out);
      for (const auto& r : log) os << r.to_jsonl() << "\n";
    }
    json j;
    j["confid"] = v_confid;
    j["n_runs"] = s.n_runs;
    j["n_success"] = s.n_success;
    if (s.ert)
      j["ert"] = *s.ert;
    else
      j["ert"] = nullptr;
    j["aht"] = s.aht;
    std::cout << j.dump() << "\n";
    return kExitOk;
  }

  if (an_cmd->parsed()) {
    const std::vector<RunRecord> records = read_jsonl(a_log);
    if (records.empty()) {
      std::cerr << "no records\n";
      return kExitEmpty;
    }
    fs::create_directories(a_out);
    long max_budget = 1;
    std::vector<double> targets;
    for (const auto& r : records) {
      max_budget = std::max(max_budget, r.budget);
      if (std::find(targets.begin(), targets.end(), r.target) == targets.end())
        targets.push_back(r.target);
    }
    write_ecdf_csv((fs::path(a_out) / "ecdf.csv").string(),
                   ecdf(records, targets, ecdf_budget_grid(
                                              static_cast<double>(max_budget))));
    std::map<int, std::vector<HittingTime>> by_conf;
    for (const auto& r : records)
      by_conf[encode_config(r.pair.config)].push_back(r.hitting_time);
    std::map<int, ErtSummary> summaries;
    for (const auto& [id, times] : by_conf)
      summaries[id] = summarize(times, max_budget, 2.0 * max_budget);
    write_ranking_csv((fs::path(a_out) / "ranking.csv").string(),
                      rank_variants(summaries));
    try {
      write_kendall_csv((fs::path(a_out) / "kendall.csv").string(),
                        instance_analysis(records));
    } catch (const std::invalid_argument&) {
      // no shared configs across instances: nothing to correlate
    }
    std::cout << "analyzed " << records.size() << " records into " << a_out
              << "\n";
    return kExitOk;
  }

  if (sw_cmd->parsed()) {
    ExperimentSpec spec = spec_from_json(s_config);
    if (s_seed) spec.seed = *s_seed;
    if (global_seed) spec.seed = *global_seed;
    fs::create_directories(s_out);
    const auto rows = budget_sweep(spec, s_budgets, s_repeats);
    std::ofstream os(fs::path(s_out) / "sweep.csv");
    os << "budget,repeat,confid,predicted,verified_ert,pred_err_abs,"
          "pred_err_signed,n_success,n_runs\n";
    os.precision(17);
    for (const auto& row : rows) {
      os << row.budget << "," << row.repeat << ","
         << encode_config(row.result.best.config) << ","
         << row.result.predicted_cost << ",";
      if (row.result.verified.ert)
        os << *row.result.verified.ert;
      else
        os << "undefined";
      os << "," << row.result.pred_err_abs << "," << row.result.pred_err_signed
         << "," << row.result.verified.n_success << ","
         << row.result.verified.n_runs << "\n";
    }
    std::cout << "sweep complete: " << rows.size() << " rows\n";
    return kExitOk;
  }

  if (st_cmd->parsed()) {
    ExperimentSpec spec = spec_from_json(y_config);
    if (y_seed) spec.seed = *y_seed;
    if (global_seed) spec.seed = *global_seed;
    fs::create_directories(y_out);
    const auto rows = stability_study(spec, y_repeats);
    std::ofstream os(fs::path(y_out) / "stability.csv");
    os << "repeat,confid,predicted,verified_ert,pred_err_abs,pred_err_signed,"
          "n_success,n_runs\n";
    os.precision(17);
    for (const auto& row : rows) {
      os << row.repeat << "," << encode_config(row.result.best.config) << ","
         << row.result.predicted_cost << ",";
      if (row.result.verified.ert)
        os << *row.result.verified.ert;
      else
        os << "undefined";
      os << "," << row.result.pred_err_abs << "," << row.result.pred_err_signed
         << "," << row.result.verified.n_success << ","
         << row.result.verified.n_runs << "\n";
    }
    std::cout << "stability complete: " << rows.size() << " repeats\n";
    return kExitOk;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
