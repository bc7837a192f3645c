#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "modcash/rng.hpp"

namespace modcash {

// Inverse of the standard normal CDF. Rational approximation refined with
// one Halley step; absolute error below 1e-9 on (0,1).
double inverse_normal_cdf(double p);

// Source of base mutation vectors z ~ N(0, I), either pseudo-random or a
// low-discrepancy sequence pushed through the inverse normal CDF.
class BaseSampler {
 public:
  virtual ~BaseSampler() = default;
  virtual std::vector<double> next(Rng& rng) = 0;
};

class GaussianSampler : public BaseSampler {
 public:
  explicit GaussianSampler(int dim) : dim_(dim) {}
  std::vector<double> next(Rng& rng) override;

 private:
  int dim_;
};

class SobolSampler : public BaseSampler {
 public:
  explicit SobolSampler(int dim);  // dim <= 21
  std::vector<double> next(Rng& rng) override;
  std::vector<double> next_uniform();

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::vector<std::uint32_t>> direction_;  // [dim][32]
  std::vector<std::uint32_t> state_;
};

class HaltonSampler : public BaseSampler {
 public:
  explicit HaltonSampler(int dim);
  std::vector<double> next(Rng& rng) override;
  std::vector<double> next_uniform();

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<int> bases_;
};

// mode: 0 = Gaussian, 1 = Sobol, 2 = Halton (module 10)
std::unique_ptr<BaseSampler> make_base_sampler(int mode, int dim);

}  // namespace modcash
