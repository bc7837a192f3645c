#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modcash/rng.hpp"

namespace modcash {

constexpr int kNumModules = 11;
constexpr int kNumConfigs = 4608;

// Cardinality of each module dimension: nine binary, two ternary.
constexpr std::array<int, kNumModules> kModuleCardinality = {2, 2, 2, 2, 2, 2,
                                                            2, 2, 2, 3, 3};

// Mixed-radix weights for the ConfID encoding, most significant first.
constexpr std::array<int, kNumModules> kConfIdWeights = {
    2304, 1152, 576, 288, 144, 72, 36, 18, 9, 3, 1};

struct ModuleConfiguration {
  std::array<int, kNumModules> activations{};

  bool valid() const;
  std::string to_string() const;  // e.g. "00000000010"
  static ModuleConfiguration from_string(const std::string& s);

  int& operator[](int i) { return activations[i]; }
  int operator[](int i) const { return activations[i]; }
  bool operator==(const ModuleConfiguration&) const = default;
};

struct Hyperparameters {
  double c1 = 0.0;
  double cc = 1.0;
  double c_mu = 0.0;

  bool valid() const;
  bool operator==(const Hyperparameters&) const = default;
};

struct CandidatePair {
  ModuleConfiguration config;
  Hyperparameters hyper;
  bool operator==(const CandidatePair&) const = default;
};

int encode_config(const ModuleConfiguration& m);
ModuleConfiguration decode_config(int conf_id);

// Standard CMA-ES learning-rate defaults for the covariance update.
Hyperparameters default_hyperparameters(int dim, double mu_eff);

// Clamp to bounds and rescale c_mu so that c1 + c_mu <= 1.
Hyperparameters repair_hyperparameters(Hyperparameters h);

struct SearchSpace {
  struct Dim {
    enum class Kind { Integer, Real };
    Kind kind;
    int cardinality = 0;  // Integer
    double lo = 0.0, hi = 0.0;  // Real
  };

  std::vector<Dim> dims;
  // When set, the module vector is fixed and dims hold only the reals.
  std::optional<ModuleConfiguration> frozen_config;

  // Full joint space: 11 integer dims + 3 real dims (c1, cc, c_mu).
  static SearchSpace cash();
  // Hyperparameters only, module vector frozen.
  static SearchSpace hyper_only(const ModuleConfiguration& config);

  std::size_t num_dims() const { return dims.size(); }
  bool is_integer(std::size_t d) const {
    return dims[d].kind == Dim::Kind::Integer;
  }

  CandidatePair to_pair(const std::vector<double>& point) const;
  std::vector<double> from_pair(const CandidatePair& pair) const;

  std::vector<double> sample_uniform_point(Rng& rng) const;
  CandidatePair sample_uniform(Rng& rng) const;
};

std::vector<CandidatePair> sample_lhs(const SearchSpace& space, int n,
                                      std::uint64_t seed);

std::vector<CandidatePair> sample_uniform(const SearchSpace& space, int n,
                                          std::uint64_t seed);

}  // namespace modcash
