#include "modcash/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace modcash {

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
  // Acklam's rational approximation
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425, p_high = 1.0 - p_low;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= p_high) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // One Halley refinement using the complementary error function
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

std::vector<double> GaussianSampler::next(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> z(dim_);
  for (auto& v : z) v = n(rng);
  return z;
}

namespace {

// Joe & Kuo direction number parameters (s, a, m...) for dimensions 2..21.
struct SobolParams {
  int s;
  std::uint32_t a;
  std::uint32_t m[7];
};

const SobolParams kSobolParams[] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
};

constexpr int kSobolBits = 32;

}  // namespace

SobolSampler::SobolSampler(int dim) : dim_(dim) {
  if (dim < 1 || dim > 21)
    throw std::invalid_argument("SobolSampler supports 1 <= dim <= 21");
  direction_.assign(dim, std::vector<std::uint32_t>(kSobolBits));
  state_.assign(dim, 0);
  // First dimension: van der Corput in base 2
  for (int k = 0; k < kSobolBits; ++k)
    direction_[0][k] = 1u << (kSobolBits - 1 - k);
  for (int d = 1; d < dim; ++d) {
    const SobolParams& p = kSobolParams[d - 1];
    auto& v = direction_[d];
    for (int k = 0; k < p.s; ++k) v[k] = p.m[k] << (kSobolBits - 1 - k);
    for (int k = p.s; k < kSobolBits; ++k) {
      v[k] = v[k - p.s] ^ (v[k - p.s] >> p.s);
      for (int i = 1; i < p.s; ++i)
        if ((p.a >> (p.s - 1 - i)) & 1u) v[k] ^= v[k - i];
    }
  }
}

std::vector<double> SobolSampler::next_uniform() {
  // Gray-code order; index 0 (the all-zero point) is skipped.
  int c = 0;
  std::uint64_t idx = index_++;
  while (idx & 1u) {
    ++c;
    idx >>= 1;
  }
  for (int d = 0; d < dim_; ++d) state_[d] ^= direction_[d][c];
  std::vector<double> u(dim_);
  for (int d = 0; d < dim_; ++d)
    u[d] = static_cast<double>(state_[d]) / 4294967296.0;
  return u;
}

std::vector<double> SobolSampler::next(Rng&) {
  std::vector<double> u = next_uniform();
  for (auto& x : u) x = inverse_normal_cdf(x);
  return u;
}

HaltonSampler::HaltonSampler(int dim) : dim_(dim) {
  int candidate = 2;
  while (static_cast<int>(bases_.size()) < dim) {
    bool prime = true;
    for (int q = 2; q * q <= candidate; ++q)
      if (candidate % q == 0) {
        prime = false;
        break;
      }
    if (prime) bases_.push_back(candidate);
    ++candidate;
  }
  index_ = 1;  // radical inverse of 0 is 0, skip it
}

std::vector<double> HaltonSampler::next_uniform() {
  std::vector<double> u(dim_);
  for (int d = 0; d < dim_; ++d) {
    const int base = bases_[d];
    double f = 1.0, r = 0.0;
    std::uint64_t i = index_;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    u[d] = r;
  }
  ++index_;
  return u;
}

std::vector<double> HaltonSampler::next(Rng&) {
  std::vector<double> u = next_uniform();
  for (auto& x : u) x = inverse_normal_cdf(x);
  return u;
}

std::unique_ptr<BaseSampler> make_base_sampler(int mode, int dim) {
  switch (mode) {
    case 0:
      return std::make_unique<GaussianSampler>(dim);
    case 1:
      return std::make_unique<SobolSampler>(dim);
    case 2:
      return std::make_unique<HaltonSampler>(dim);
    default:
      throw std::invalid_argument("unknown sampler mode");
  }
}

}  // namespace modcash
