#pragma once

#include <map>
#include <string>
#include <vector>

#include "modcash/ego.hpp"
#include "modcash/engine.hpp"
#include "modcash/metrics.hpp"
#include "modcash/racing.hpp"

namespace modcash {

enum class Method {
  kNaiveSequential,
  kStandardSequential,
  kIntegratedRacing,
  kIntegratedEgo,
  kEnumerationOnly,
};

Method method_from_string(const std::string& name);
std::string method_to_string(Method m);

struct ExperimentSpec {
  Method method = Method::kIntegratedEgo;
  std::vector<int> fids = {1};
  std::vector<int> instances = {1, 2, 3, 4, 5};
  int dim = 5;
  long run_budget = 10000;        // B per optimizer run
  long tuner_budget = 2500;       // optimizer runs available to the tuner
  int verification_runs = 50;
  double precision = 1e-8;
  std::uint64_t seed = 1;
  int threads = 1;

  // enumeration / sequential settings
  std::vector<int> enumeration_configs;  // ConfIDs; empty = all 4608
  int runs_per_instance = 5;
  long per_config_tuner_budget = 5000;   // standard sequential, per config

  // integrated tuner settings
  int runs_per_eval = 25;  // MIP-EGO style ERT evaluations
  RacingSettings racing;
  EgoSettings ego;
};

struct MethodResult {
  int fid = 0;
  CandidatePair best;
  double predicted_cost = 0.0;
  ErtSummary verified;
  double pred_err_abs = 0.0;
  double pred_err_signed = 0.0;  // predicted minus verified, relative
  long runs_spent = 0;
  long tuner_evaluated_pairs = 0;
  int distinct_confids = 0;
  double unique_confid_fraction = 0.0;
};

// The 10 stand-in "common" variants (ConfID 0 is the default CMA-ES).
const std::vector<int>& common_variants();

// Default learning rates for a given module configuration (mu_eff depends on
// the recombination-weights mode).
CandidatePair default_pair_for(const ModuleConfiguration& config, int dim);

std::map<int, ErtSummary> enumerate_static(
    const std::vector<int>& conf_ids, const std::vector<int>& instances,
    int fid, int dim, int runs_per_instance, long run_budget, double precision,
    std::uint64_t seed, int threads = 1,
    std::vector<RunRecord>* log = nullptr);

std::vector<int> select_standard_set(const std::map<int, ErtSummary>& summaries,
                                     const std::vector<int>& common_ids);

ErtSummary verify(const CandidatePair& pair, const std::vector<int>& instances,
                  int fid, int dim, int n_runs, long run_budget,
                  double precision, std::uint64_t seed, int threads = 1,
                  std::vector<RunRecord>* log = nullptr);

struct ExperimentOutput {
  std::vector<MethodResult> per_function;
  std::vector<RunRecord> verification_records;
};

ExperimentOutput run_naive_sequential(const ExperimentSpec& spec);
ExperimentOutput run_standard_sequential(const ExperimentSpec& spec);
ExperimentOutput run_integrated(const ExperimentSpec& spec, Method tuner);
ExperimentOutput run_method(const ExperimentSpec& spec);

struct SweepRow {
  long budget;
  int repeat;
  MethodResult result;
  std::vector<HittingTime> verified_times;
};

std::vector<SweepRow> budget_sweep(const ExperimentSpec& spec,
                                   const std::vector<long>& budgets,
                                   int repeats);

struct InstanceAnalysis {
  std::vector<int> instances;
  std::vector<int> conf_ids;
  // rank value of each config, per instance (row = instance)
  std::vector<std::vector<double>> rankings;
  std::vector<std::vector<double>> kendall;  // symmetric, unit diagonal
};

InstanceAnalysis instance_analysis(const std::vector<RunRecord>& records);

struct StabilityRow {
  int repeat;
  MethodResult result;
  std::vector<HittingTime> verified_times;
};

std::vector<StabilityRow> stability_study(const ExperimentSpec& spec,
                                          int repeats);

// file outputs
void write_runs_jsonl(const std::string& path,
                      const std::vector<RunRecord>& records);
void write_ert_table_csv(const std::string& path, int fid,
                         const std::string& instance_set,
                         const std::map<int, ErtSummary>& summaries);
void write_ecdf_csv(const std::string& path,
                    const std::vector<EcdfPoint>& curve);
void write_kendall_csv(const std::string& path, const InstanceAnalysis& a);
void write_method_summary_json(const std::string& path,
                               const ExperimentSpec& spec,
                               const ExperimentOutput& out);

}  // namespace modcash
