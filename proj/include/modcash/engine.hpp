#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "modcash/config_space.hpp"
#include "modcash/problems.hpp"
#include "modcash/rng.hpp"
#include "modcash/sampler.hpp"

namespace modcash {

// One optimizer run. hitting_time is the 1-based evaluation index of the
// first point at or below the target, or empty when the target was missed.
struct RunRecord {
  CandidatePair pair;
  int fid = 0;
  int instance = 0;
  std::uint64_t seed = 0;
  double target = 0.0;
  long budget = 0;
  std::optional<long> hitting_time;
  double best_f = 0.0;
  long evaluations = 0;

  bool success() const { return hitting_time.has_value(); }
  std::string to_jsonl() const;
};

// mode 1: uniform 1/mu. mode 0: log-rank weights normalized to sum 1.
Eigen::VectorXd compute_weights(int mu, int mode);

// Mutable state of one modular CMA-ES run.
class EsState {
 public:
  EsState(const CandidatePair& pair, int dim, std::uint64_t seed);

  // Generate the next population. Also records the base z vectors,
  // retrievable via last_base() for diagnostics.
  std::vector<Eigen::VectorXd> ask();

  // Consume fitness values for the first fitness.size() entries of the last
  // population (fewer than lambda when sequential selection truncated).
  void tell(const std::vector<Eigen::VectorXd>& population,
            const std::vector<double>& fitness);

  // Restart bookkeeping (module 11). Returns true if a restart happened.
  bool maybe_restart();
  bool stagnated() const;

  const CandidatePair& pair() const { return pair_; }
  int dim() const { return dim_; }
  int lambda() const { return lambda_; }
  int mu() const { return mu_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  double step_size() const { return sigma_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const std::vector<Eigen::VectorXd>& last_base() const { return last_z_; }
  double best_parent_fitness() const { return best_parent_f_; }
  bool has_parents() const { return !parents_.empty(); }

  long evaluations_used = 0;
  long budget = 0;

  // Swap in a different configuration mid-run, keeping mean, step size,
  // covariance and evolution paths.
  void switch_configuration(const CandidatePair& next);

 private:
  void reset_distribution(bool resample_mean);
  void setup_strategy_constants();
  void update_eigensystem();

  CandidatePair pair_;
  int dim_;
  int lambda_, mu_;
  int lambda_init_;
  Eigen::VectorXd weights_;
  double mu_eff_ = 1.0;
  double cs_ = 0.0, damps_ = 1.0, chi_n_ = 1.0;

  Eigen::VectorXd mean_;
  double sigma_ = 2.0;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd eig_basis_;   // B
  Eigen::VectorXd eig_scale_;   // D (sqrt of eigenvalues)
  Eigen::VectorXd path_c_, path_sigma_;
  long generation_ = 0;

  std::unique_ptr<BaseSampler> sampler_;
  Rng rng_;

  std::vector<Eigen::VectorXd> last_z_;
  std::vector<std::pair<Eigen::VectorXd, double>> parents_;
  double best_parent_f_ = std::numeric_limits<double>::infinity();
  Eigen::VectorXd prev_shift_;
  bool have_shift_ = false;
  bool tpa_active_ = false;

  // stagnation / restart bookkeeping
  double best_since_restart_ = std::numeric_limits<double>::infinity();
  long gens_without_improvement_ = 0;
  int regime_ = 0;  // 0 none/ipop, BIPOP: 1 large, 2 small
  int large_restarts_ = 0;
  long budget_large_ = 0, budget_small_ = 0, evals_at_restart_ = 0;
};

EsState init_es(const CandidatePair& pair, int dim, std::uint64_t seed);

RunRecord run(const CandidatePair& pair, const Problem& problem, double target,
              long budget, std::uint64_t seed);

RunRecord switch_run(const CandidatePair& first, const CandidatePair& second,
                     double splitpoint, const Problem& problem, double target,
                     long budget, std::uint64_t seed);

}  // namespace modcash
