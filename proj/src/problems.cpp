#include "modcash/problems.hpp"

#include <cmath>
#include <stdexcept>

#include "modcash/rng.hpp"

namespace modcash {

namespace {

double base_eval(int fid, int dim, const Eigen::VectorXd& z) {
  const int d = dim;
  switch (fid) {
    case 1:
      return z.squaredNorm();
    case 2:
    case 10: {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += std::pow(10.0, 6.0 * i / std::max(1, d - 1)) * z[i] * z[i];
      return s;
    }
    case 3:
    case 15: {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += std::cos(2.0 * M_PI * z[i]);
      return 10.0 * (d - s) + z.squaredNorm();
    }
    case 8: {
      // shifted so the optimum sits at z = 0
      double s = 0.0;
      for (int i = 0; i + 1 < d; ++i) {
        const double a = z[i] + 1.0, b = z[i + 1] + 1.0;
        s += 100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0);
      }
      return s;
    }
    case 12: {
      double s = z[0] * z[0];
      for (int i = 1; i < d; ++i) s += 1e6 * z[i] * z[i];
      return s;
    }
    case 14: {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += std::pow(std::fabs(z[i]), 2.0 + 4.0 * i / std::max(1, d - 1));
      return s;
    }
    case 20: {
      const double shift = 420.968746;
      double s = 0.0, pen = 0.0;
      for (int i = 0; i < d; ++i) {
        const double y = z[i] + shift;
        s += y * std::sin(std::sqrt(std::fabs(y)));
        const double excess = std::fabs(y) - 500.0;
        if (excess > 0.0) pen += 100.0 * excess * excess;
      }
      double v = 418.9828872724339 * d - s + pen;
      return std::max(v, 0.0);
    }
    default:
      throw std::invalid_argument("unsupported fid " + std::to_string(fid));
  }
}

}  // namespace

bool fid_supported(int fid) {
  switch (fid) {
    case 1:
    case 2:
    case 3:
    case 5:
    case 8:
    case 10:
    case 12:
    case 14:
    case 15:
    case 20:
      return true;
    default:
      return false;
  }
}

std::string Problem::name() const {
  return "F" + std::to_string(fid) + "_I" + std::to_string(instance) + "_D" +
         std::to_string(dim);
}

double Problem::evaluate(const Eigen::VectorXd& x) const {
  if (x.size() != dim)
    throw std::invalid_argument("evaluate: dimension mismatch");
  if (fid == 5) {
    // Linear slope: optimum pinned to the box vertex x_opt, no rotation.
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double si =
          (x_opt[i] < 0 ? -1.0 : 1.0) *
          std::pow(10.0, static_cast<double>(i) / std::max(1, dim - 1));
      const double zi = x[i] * x_opt[i] < 25.0 ? x[i] : x_opt[i];
      s += 5.0 * std::fabs(si) - si * zi;
    }
    return s + f_opt;
  }
  const Eigen::VectorXd z = rotation * (x - x_opt);
  return base_eval(fid, dim, z) + f_opt;
}

double Problem::target_for(double precision) const {
  if (precision <= 0.0)
    throw std::invalid_argument("target_for: precision must be positive");
  return f_opt + precision;
}

Problem make_problem(int fid, int instance, int dim) {
  if (!fid_supported(fid))
    throw std::invalid_argument("unsupported fid " + std::to_string(fid));
  if (instance < 0) throw std::invalid_argument("instance must be >= 0");
  if (dim < 2) throw std::invalid_argument("dim must be >= 2");
  Problem p;
  p.fid = fid;
  p.instance = instance;
  p.dim = dim;
  if (instance == 0) {
    p.rotation = Eigen::MatrixXd::Identity(dim, dim);
    p.x_opt = Eigen::VectorXd::Zero(dim);
    if (fid == 5) p.x_opt = Eigen::VectorXd::Constant(dim, 5.0);
    p.f_opt = 0.0;
    return p;
  }
  Rng rng(seed_hash(0x6b0b, fid, instance, dim));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  p.rotation = q;
  std::uniform_real_distribution<double> ux(-4.0, 4.0);
  p.x_opt.resize(dim);
  for (int i = 0; i < dim; ++i) p.x_opt[i] = ux(rng);
  if (fid == 5) {
    p.rotation = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < dim; ++i) p.x_opt[i] = p.x_opt[i] < 0 ? -5.0 : 5.0;
  }
  std::uniform_real_distribution<double> uf(-100.0, 100.0);
  p.f_opt = uf(rng);
  return p;
}

}  // namespace modcash
