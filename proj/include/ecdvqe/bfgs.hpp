#pragma once

// Dense quasi-Newton minimizer (inverse-Hessian BFGS) with backtracking
// Armijo line search, shared by the variational solver and the baseline.

#include <functional>

#include <Eigen/Dense>

namespace ecdvqe {

struct BfgsOptions {
  int max_iterations = 200;
  double grad_tol = 1e-8;      // stop when ||g||_2 <= grad_tol
  double energy_tol = 0.0;     // stop when |f_k - f_{k+1}| <= energy_tol; 0 = off
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  double initial_step = 1.0;
  int max_backtracks = 40;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;  // accepted steps
  bool converged = false;
  bool line_search_failed = false;
};

using BfgsCallback = std::function<void(int iteration, const Eigen::VectorXd& x,
                                        double value, double grad_norm)>;

// Minimizes f from x0. The callback fires once at iteration 0 (initial point)
// and once per accepted step. Directions of non-descent reset the inverse
// Hessian to the identity; curvature pairs with y.s <= 0 skip the update.
BfgsResult minimize_bfgs(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    Eigen::VectorXd x0, const BfgsOptions& options,
    const BfgsCallback& on_iteration = {});

}  // namespace ecdvqe
