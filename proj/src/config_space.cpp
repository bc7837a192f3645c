#include "modcash/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace modcash {

bool ModuleConfiguration::valid() const {
  for (int i = 0; i < kNumModules; ++i)
    if (activations[i] < 0 || activations[i] >= kModuleCardinality[i])
      return false;
  return true;
}

std::string ModuleConfiguration::to_string() const {
  std::string s(kNumModules, '0');
  for (int i = 0; i < kNumModules; ++i) s[i] = static_cast<char>('0' + activations[i]);
  return s;
}

ModuleConfiguration ModuleConfiguration::from_string(const std::string& s) {
  if (s.size() != kNumModules)
    throw std::invalid_argument("activation string must have 11 digits");
  ModuleConfiguration m;
  for (int i = 0; i < kNumModules; ++i) m.activations[i] = s[i] - '0';
  if (!m.valid()) throw std::invalid_argument("invalid activation string: " + s);
  return m;
}

bool Hyperparameters::valid() const {
  return c1 >= 0.0 && c1 <= 1.0 && c_mu >= 0.0 && c_mu <= 1.0 && cc > 0.0 &&
         cc <= 1.0 && c1 + c_mu <= 1.0;
}

int encode_config(const ModuleConfiguration& m) {
  if (!m.valid())
    throw std::invalid_argument("invalid module configuration " + m.to_string());
  int id = 0;
  for (int i = 0; i < kNumModules; ++i) id += kConfIdWeights[i] * m.activations[i];
  return id;
}

ModuleConfiguration decode_config(int conf_id) {
  if (conf_id < 0 || conf_id >= kNumConfigs)
    throw std::invalid_argument("ConfID out of range: " + std::to_string(conf_id));
  ModuleConfiguration m;
  int rest = conf_id;
  for (int i = 0; i < kNumModules; ++i) {
    m.activations[i] = rest / kConfIdWeights[i];
    rest %= kConfIdWeights[i];
  }
  return m;
}

Hyperparameters default_hyperparameters(int dim, double mu_eff) {
  if (dim < 1 || mu_eff < 1.0)
    throw std::invalid_argument("default_hyperparameters: dim >= 1, mu_eff >= 1 required");
  const double d = static_cast<double>(dim);
  Hyperparameters h;
  h.cc = (4.0 + mu_eff / d) / (d + 4.0 + 2.0 * mu_eff / d);
  h.c1 = 2.0 / ((d + 1.3) * (d + 1.3) + mu_eff);
  h.c_mu = std::min(1.0 - h.c1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                    ((d + 2.0) * (d + 2.0) + mu_eff));
  h.c_mu = std::max(0.0, h.c_mu);
  return h;
}

Hyperparameters repair_hyperparameters(Hyperparameters h) {
  h.c1 = std::clamp(h.c1, 0.0, 1.0);
  h.c_mu = std::clamp(h.c_mu, 0.0, 1.0);
  h.cc = std::clamp(h.cc, 1e-12, 1.0);
  if (h.c1 + h.c_mu > 1.0) h.c_mu = 1.0 - h.c1;
  return h;
}

SearchSpace SearchSpace::cash() {
  SearchSpace s;
  for (int i = 0; i < kNumModules; ++i)
    s.dims.push_back({Dim::Kind::Integer, kModuleCardinality[i], 0.0, 0.0});
  for (int i = 0; i < 3; ++i) s.dims.push_back({Dim::Kind::Real, 0, 0.0, 1.0});
  return s;
}

SearchSpace SearchSpace::hyper_only(const ModuleConfiguration& config) {
  SearchSpace s;
  for (int i = 0; i < 3; ++i) s.dims.push_back({Dim::Kind::Real, 0, 0.0, 1.0});
  s.frozen_config = config;
  return s;
}

CandidatePair SearchSpace::to_pair(const std::vector<double>& point) const {
  if (point.size() != dims.size())
    throw std::invalid_argument("point dimensionality mismatch");
  CandidatePair pair;
  std::size_t r = 0;
  if (frozen_config) {
    pair.config = *frozen_config;
  } else {
    for (int i = 0; i < kNumModules; ++i)
      pair.config[i] = static_cast<int>(std::lround(point[i]));
    r = kNumModules;
  }
  double reals[3] = {0, 1, 0};
  for (int i = 0; i < 3 && r + i < point.size(); ++i) reals[i] = point[r + i];
  pair.hyper = repair_hyperparameters({reals[0], reals[1], reals[2]});
  return pair;
}

std::vector<double> SearchSpace::from_pair(const CandidatePair& pair) const {
  std::vector<double> point;
  if (!frozen_config)
    for (int i = 0; i < kNumModules; ++i)
      point.push_back(static_cast<double>(pair.config[i]));
  point.push_back(pair.hyper.c1);
  point.push_back(pair.hyper.cc);
  point.push_back(pair.hyper.c_mu);
  return point;
}

std::vector<double> SearchSpace::sample_uniform_point(Rng& rng) const {
  std::vector<double> p(dims.size());
  for (std::size_t d = 0; d < dims.size(); ++d) {
    if (dims[d].kind == Dim::Kind::Integer) {
      std::uniform_int_distribution<int> u(0, dims[d].cardinality - 1);
      p[d] = static_cast<double>(u(rng));
    } else {
      std::uniform_real_distribution<double> u(dims[d].lo, dims[d].hi);
      p[d] = dims[d].lo == dims[d].hi ? dims[d].lo : u(rng);
    }
  }
  return p;
}

CandidatePair SearchSpace::sample_uniform(Rng& rng) const {
  return to_pair(sample_uniform_point(rng));
}

std::vector<CandidatePair> sample_lhs(const SearchSpace& space, int n,
                                      std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_lhs: n >= 1 required");
  Rng rng(seed_hash(seed, 0x1457));
  const std::size_t nd = space.num_dims();
  // Per real dimension: a random permutation of n strata, one sample each.
  std::vector<std::vector<double>> cols(nd, std::vector<double>(n));
  for (std::size_t d = 0; d < nd; ++d) {
    if (space.is_integer(d)) {
      std::uniform_int_distribution<int> u(0, space.dims[d].cardinality - 1);
      for (int i = 0; i < n; ++i) cols[d][i] = static_cast<double>(u(rng));
    } else {
      const double lo = space.dims[d].lo, hi = space.dims[d].hi;
      std::vector<int> strata(n);
      std::iota(strata.begin(), strata.end(), 0);
      std::shuffle(strata.begin(), strata.end(), rng);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int i = 0; i < n; ++i)
        cols[d][i] = lo + (hi - lo) * (strata[i] + u(rng)) / n;
    }
  }
  std::vector<CandidatePair> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> point(nd);
    for (std::size_t d = 0; d < nd; ++d) point[d] = cols[d][i];
    out.push_back(space.to_pair(point));
  }
  return out;
}

std::vector<CandidatePair> sample_uniform(const SearchSpace& space, int n,
                                          std::uint64_t seed) {
  Rng rng(seed_hash(seed, 0x2381));
  std::vector<CandidatePair> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(space.sample_uniform(rng));
  return out;
}

}  // namespace modcash
