#pragma once

#include <Eigen/Dense>
#include <string>

namespace modcash {

// Seeded single-objective test problem: a canonical base function under a
// per-instance rotation, shift and objective offset. Instance 0 is the
// untransformed function (identity rotation, zero shift, zero offset).
struct Problem {
  int fid = 1;
  int instance = 0;
  int dim = 5;
  Eigen::MatrixXd rotation;
  Eigen::VectorXd x_opt;
  double f_opt = 0.0;

  std::string name() const;  // "F<fid>_I<instance>_D<dim>"
  double evaluate(const Eigen::VectorXd& x) const;
  double target_for(double precision) const;  // f_opt + precision
};

// Implemented fids: 1 sphere, 2 ellipsoidal, 3 Rastrigin, 5 linear slope,
// 8 Rosenbrock, 10 rotated ellipsoid, 12 bent cigar, 14 sum of different
// powers, 15 rotated Rastrigin, 20 Schwefel.
bool fid_supported(int fid);

Problem make_problem(int fid, int instance, int dim);

}  // namespace modcash
