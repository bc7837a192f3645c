#include "modcash/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace modcash {

namespace {

constexpr double kEigFloor = 1e-12;
constexpr double kTpaLearning = 0.3;
constexpr double kTpaDamping = 0.5;
constexpr double kActiveScale = 0.5;

enum Module {
  kActiveUpdate = 0,
  kElitism = 1,
  kMirrored = 2,
  kOrthogonal = 3,
  kSequential = 4,
  kThreshold = 5,
  kTpa = 6,
  kPairwise = 7,
  kWeightsMode = 8,
  kSamplerMode = 9,
  kRestartMode = 10,
};

}  // namespace

std::string RunRecord::to_jsonl() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"fid\":" << fid << ",\"instance\":" << instance
     << ",\"confid\":" << encode_config(pair.config)
     << ",\"c1\":" << pair.hyper.c1 << ",\"cc\":" << pair.hyper.cc
     << ",\"cmu\":" << pair.hyper.c_mu << ",\"seed\":" << seed
     << ",\"budget\":" << budget << ",\"target\":" << target
     << ",\"hitting_time\":";
  if (hitting_time)
    os << *hitting_time;
  else
    os << "null";
  os << ",\"best_f\":" << best_f << "}";
  return os.str();
}

Eigen::VectorXd compute_weights(int mu, int mode) {
  if (mu < 1) throw std::invalid_argument("compute_weights: mu >= 1 required");
  Eigen::VectorXd w(mu);
  if (mode == 1) {
    w.setConstant(1.0 / mu);
    return w;
  }
  for (int i = 0; i < mu; ++i)
    w[i] = std::log(mu + 0.5) - std::log(static_cast<double>(i + 1));
  w /= w.sum();
  return w;
}

EsState::EsState(const CandidatePair& pair, int dim, std::uint64_t seed)
    : pair_(pair), dim_(dim), rng_(seed_hash(seed, 0xe5)) {
  if (dim < 1) throw std::invalid_argument("EsState: dim >= 1 required");
  if (!pair.config.valid() || !pair.hyper.valid())
    throw std::invalid_argument("EsState: invalid candidate pair");
  lambda_ = 4 + static_cast<int>(std::floor(3.0 * std::log(dim)));
  lambda_init_ = lambda_;
  if (pair_.config[kRestartMode] == 2) regime_ = 1;
  setup_strategy_constants();
  reset_distribution(true);
}

void EsState::setup_strategy_constants() {
  mu_ = lambda_ / 2;
  weights_ = compute_weights(mu_, pair_.config[kWeightsMode]);
  mu_eff_ = 1.0 / weights_.squaredNorm();
  cs_ = (mu_eff_ + 2.0) / (dim_ + mu_eff_ + 5.0);
  damps_ = 1.0 +
           2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (dim_ + 1.0)) - 1.0) +
           cs_;
  chi_n_ = std::sqrt(static_cast<double>(dim_)) *
           (1.0 - 1.0 / (4.0 * dim_) + 1.0 / (21.0 * dim_ * dim_));
  sampler_ = make_base_sampler(pair_.config[kSamplerMode], dim_);
}

void EsState::reset_distribution(bool resample_mean) {
  if (resample_mean) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    mean_.resize(dim_);
    for (int i = 0; i < dim_; ++i) mean_[i] = u(rng_);
  }
  sigma_ = 2.0;
  cov_ = Eigen::MatrixXd::Identity(dim_, dim_);
  eig_basis_ = Eigen::MatrixXd::Identity(dim_, dim_);
  eig_scale_ = Eigen::VectorXd::Ones(dim_);
  path_c_ = Eigen::VectorXd::Zero(dim_);
  path_sigma_ = Eigen::VectorXd::Zero(dim_);
  parents_.clear();
  best_parent_f_ = std::numeric_limits<double>::infinity();
  have_shift_ = false;
  generation_ = 0;
  best_since_restart_ = std::numeric_limits<double>::infinity();
  gens_without_improvement_ = 0;
}

void EsState::switch_configuration(const CandidatePair& next) {
  if (!next.config.valid() || !next.hyper.valid())
    throw std::invalid_argument("switch_configuration: invalid pair");
  pair_ = next;
  setup_strategy_constants();
  parents_.clear();
  best_parent_f_ = std::numeric_limits<double>::infinity();
  have_shift_ = false;
}

std::vector<Eigen::VectorXd> EsState::ask() {
  const bool mirrored = pair_.config[kMirrored] == 1;
  const int n_base = mirrored ? (lambda_ + 1) / 2 : lambda_;

  std::vector<Eigen::VectorXd> base(n_base);
  for (int i = 0; i < n_base; ++i) {
    std::vector<double> z = sampler_->next(rng_);
    base[i] = Eigen::Map<Eigen::VectorXd>(z.data(), dim_);
  }

  if (pair_.config[kOrthogonal] == 1) {
    // Gram-Schmidt per block of dim vectors, preserving individual lengths.
    for (int start = 0; start < n_base; start += dim_) {
      const int end = std::min(n_base, start + dim_);
      for (int i = start; i < end; ++i) {
        const double norm0 = base[i].norm();
        for (int j = start; j < i; ++j) {
          const double denom = base[j].squaredNorm();
          if (denom > 0.0) base[i] -= (base[i].dot(base[j]) / denom) * base[j];
        }
        const double norm1 = base[i].norm();
        if (norm1 > 1e-300) base[i] *= norm0 / norm1;
      }
    }
  }

  last_z_.clear();
  if (mirrored) {
    for (int i = 0; i < n_base && static_cast<int>(last_z_.size()) < lambda_;
         ++i) {
      last_z_.push_back(base[i]);
      if (static_cast<int>(last_z_.size()) < lambda_)
        last_z_.push_back(-base[i]);
    }
  } else {
    last_z_ = std::move(base);
  }

  std::vector<Eigen::VectorXd> population(lambda_);
  for (int i = 0; i < lambda_; ++i) {
    Eigen::VectorXd y =
        eig_basis_ * (eig_scale_.array() * (eig_basis_.transpose() * last_z_[i]).array()).matrix();
    if (pair_.config[kThreshold] == 1 && budget > 0) {
      const double remaining =
          std::max(0.0, static_cast<double>(budget - evaluations_used));
      const double t =
          0.1 * 10.0 * std::pow(remaining / static_cast<double>(budget), 1.17);
      const double len = sigma_ * y.norm();
      if (len > 0.0 && len < t) y *= t / len;
    }
    population[i] = mean_ + sigma_ * y;
  }

  tpa_active_ = false;
  if (pair_.config[kTpa] == 1 && have_shift_ && lambda_ >= 2 &&
      prev_shift_.norm() > 0.0) {
    population[0] = mean_ + prev_shift_;
    population[1] = mean_ - prev_shift_;
    tpa_active_ = true;
  }
  return population;
}

void EsState::tell(const std::vector<Eigen::VectorXd>& population,
                   const std::vector<double>& fitness) {
  const int n_eval = static_cast<int>(fitness.size());
  if (n_eval == 0) return;
  if (n_eval > static_cast<int>(population.size()))
    throw std::invalid_argument("tell: more fitness values than candidates");
  for (int i = 0; i < n_eval; ++i)
    if (population[i].size() != dim_)
      throw std::invalid_argument("tell: dimension mismatch");

  // selection pool: pairwise filtering first, then optional parents
  std::vector<std::pair<Eigen::VectorXd, double>> pool;
  if (pair_.config[kPairwise] == 1 && pair_.config[kMirrored] == 1) {
    for (int i = 0; i < n_eval; i += 2) {
      if (i + 1 < n_eval)
        pool.emplace_back(fitness[i] <= fitness[i + 1] ? population[i]
                                                       : population[i + 1],
                          std::min(fitness[i], fitness[i + 1]));
      else
        pool.emplace_back(population[i], fitness[i]);
    }
  } else {
    for (int i = 0; i < n_eval; ++i) pool.emplace_back(population[i], fitness[i]);
  }
  if (pair_.config[kElitism] == 1)
    pool.insert(pool.end(), parents_.begin(), parents_.end());

  std::stable_sort(pool.begin(), pool.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });

  const int k = std::min<int>(mu_, static_cast<int>(pool.size()));
  Eigen::VectorXd w = weights_.head(k);
  w /= w.sum();

  const Eigen::VectorXd mean_old = mean_;
  Eigen::VectorXd mean_new = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < k; ++i) mean_new += w[i] * pool[i].first;
  const Eigen::VectorXd shift = mean_new - mean_old;
  mean_ = mean_new;

  const double c1 = pair_.hyper.c1;
  const double cc = pair_.hyper.cc;
  const double cmu = pair_.hyper.c_mu;

  // C^{-1/2} * shift / sigma
  Eigen::VectorXd inv_sqrt_shift =
      eig_basis_ *
      ((eig_basis_.transpose() * shift).array() / eig_scale_.array()).matrix() /
      sigma_;
  path_sigma_ = (1.0 - cs_) * path_sigma_ +
                std::sqrt(cs_ * (2.0 - cs_) * mu_eff_) * inv_sqrt_shift;
  ++generation_;
  const double ps_norm = path_sigma_.norm();
  const double hsig_denom =
      std::sqrt(1.0 - std::pow(1.0 - cs_, 2.0 * generation_));
  const bool hsig = ps_norm / hsig_denom / chi_n_ < 1.4 + 2.0 / (dim_ + 1.0);

  path_c_ = (1.0 - cc) * path_c_;
  if (hsig)
    path_c_ += std::sqrt(cc * (2.0 - cc) * mu_eff_) * shift / sigma_;

  Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd y = (pool[i].first - mean_old) / sigma_;
    rank_mu += w[i] * y * y.transpose();
  }
  cov_ = (1.0 - c1 - cmu) * cov_ +
         c1 * (path_c_ * path_c_.transpose() +
               (hsig ? 0.0 : cc * (2.0 - cc)) * cov_) +
         cmu * rank_mu;

  if (pair_.config[kActiveUpdate] == 1 && cmu > 0.0) {
    // negative update from the worst half of the evaluated offspring
    std::vector<int> order(n_eval);
    for (int i = 0; i < n_eval; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });
    const int n_neg = std::min(n_eval, lambda_ / 2);
    Eigen::VectorXd wn = compute_weights(std::max(1, n_neg), 0);
    for (int i = 0; i < n_neg; ++i) {
      const Eigen::VectorXd y = (population[order[i]] - mean_old) / sigma_;
      cov_ -= kActiveScale * cmu * wn[i] * y * y.transpose();
    }
  }

  update_eigensystem();

  // step-size control
  if (tpa_active_ && n_eval >= 2) {
    int better = 0, worse = 0;
    for (int i = 2; i < n_eval; ++i) {
      if (fitness[i] < fitness[0]) ++better;
      if (fitness[i] < fitness[1]) ++worse;
    }
    double z = static_cast<double>(worse - better) /
               std::max(1, n_eval - 1);
    if (z < 0.0) z *= kTpaDamping;
    sigma_ *= std::exp(kTpaLearning * z);
  } else {
    sigma_ *= std::exp((cs_ / damps_) * (ps_norm / chi_n_ - 1.0));
  }
  sigma_ = std::min(sigma_, 1e8);

  prev_shift_ = shift;
  have_shift_ = true;

  parents_.assign(pool.begin(), pool.begin() + k);
  best_parent_f_ = pool[0].second;

  const double gen_best =
      *std::min_element(fitness.begin(), fitness.end());
  if (gen_best < best_since_restart_ - 1e-16 * std::fabs(best_since_restart_)) {
    best_since_restart_ = gen_best;
    gens_without_improvement_ = 0;
  } else {
    ++gens_without_improvement_;
  }
}

void EsState::update_eigensystem() {
  cov_ = 0.5 * (cov_ + cov_.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_);
  Eigen::VectorXd vals = eig.eigenvalues();
  bool repaired = false;
  for (int i = 0; i < dim_; ++i)
    if (vals[i] < kEigFloor) {
      vals[i] = kEigFloor;
      repaired = true;
    }
  eig_basis_ = eig.eigenvectors();
  eig_scale_ = vals.cwiseSqrt();
  if (repaired)
    cov_ = eig_basis_ * vals.asDiagonal() * eig_basis_.transpose();
}

bool EsState::stagnated() const {
  const long limit =
      10 + static_cast<long>(std::ceil(30.0 * dim_ / lambda_));
  if (gens_without_improvement_ >= limit) return true;
  return sigma_ * cov_.diagonal().maxCoeff() < 1e-12;
}

bool EsState::maybe_restart() {
  if (!stagnated()) return false;
  const int mode = pair_.config[kRestartMode];
  if (mode == 0) return false;
  const long used_since = evaluations_used - evals_at_restart_;
  evals_at_restart_ = evaluations_used;
  if (mode == 1) {  // IPOP
    lambda_ *= 2;
  } else {  // BIPOP: alternate regimes by cumulative budget
    if (regime_ == 1)
      budget_large_ += used_since;
    else
      budget_small_ += used_since;
    if (budget_small_ < budget_large_) {
      regime_ = 2;
      lambda_ = lambda_init_;
    } else {
      regime_ = 1;
      ++large_restarts_;
      lambda_ = lambda_init_ * (1 << std::min(large_restarts_, 10));
    }
  }
  lambda_ = std::min(lambda_, 4096);
  setup_strategy_constants();
  reset_distribution(true);
  return true;
}

EsState init_es(const CandidatePair& pair, int dim, std::uint64_t seed) {
  return EsState(pair, dim, seed);
}

namespace {

RunRecord run_loop(EsState& state, const CandidatePair& reported_pair,
                   const Problem& problem, double target, long budget,
                   std::uint64_t seed,
                   const CandidatePair* switch_to, double splitpoint) {
  RunRecord rec;
  rec.pair = reported_pair;
  rec.fid = problem.fid;
  rec.instance = problem.instance;
  rec.seed = seed;
  rec.target = target;
  rec.budget = budget;
  rec.best_f = std::numeric_limits<double>::infinity();

  bool switched = switch_to == nullptr;

  while (state.evaluations_used < budget && !rec.hitting_time) {
    const bool sequential = state.pair().config[kSequential] == 1;
    std::vector<Eigen::VectorXd> population = state.ask();
    std::vector<double> fitness;
    fitness.reserve(population.size());
    for (const auto& x : population) {
      if (state.evaluations_used >= budget) break;
      const double f = problem.evaluate(x);
      ++state.evaluations_used;
      fitness.push_back(f);
      if (f < rec.best_f) rec.best_f = f;
      if (!rec.hitting_time && f <= target)
        rec.hitting_time = state.evaluations_used;
      if (rec.hitting_time) break;
      if (!switched && rec.best_f <= splitpoint) break;
      if (sequential && state.has_parents() &&
          f < state.best_parent_fitness())
        break;
    }
    if (fitness.empty()) break;
    state.tell(population, fitness);
    if (!switched && rec.best_f <= splitpoint) {
      state.switch_configuration(*switch_to);
      switched = true;
      continue;
    }
    if (!state.maybe_restart() && state.stagnated() &&
        state.pair().config[10] == 0) {
      // no restart strategy: give up once the distribution has collapsed
      if (state.step_size() * state.covariance().diagonal().maxCoeff() < 1e-12)
        break;
    }
  }
  rec.evaluations = state.evaluations_used;
  return rec;
}

}  // namespace

RunRecord run(const CandidatePair& pair, const Problem& problem, double target,
              long budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("run: budget >= 1 required");
  EsState state(pair, problem.dim, seed);
  state.budget = budget;
  return run_loop(state, pair, problem, target, budget, seed, nullptr, 0.0);
}

RunRecord switch_run(const CandidatePair& first, const CandidatePair& second,
                     double splitpoint, const Problem& problem, double target,
                     long budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("switch_run: budget >= 1 required");
  if (splitpoint < target)
    throw std::invalid_argument("switch_run: splitpoint must be >= target");
  if (first == second || splitpoint == target)
    return run(first, problem, target, budget, seed);
  EsState state(first, problem.dim, seed);
  state.budget = budget;
  return run_loop(state, first, problem, target, budget, seed, &second,
                  splitpoint);
}

}  // namespace modcash
