#include "ecdvqe/bfgs.hpp"

#include <cmath>
#include <stdexcept>

namespace ecdvqe {

BfgsResult minimize_bfgs(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    Eigen::VectorXd x0, const BfgsOptions& options,
    const BfgsCallback& on_iteration) {
  if (!f || !gradient) throw std::invalid_argument("objective and gradient required");
  const Eigen::Index n = x0.size();

  BfgsResult result;
  result.x = std::move(x0);
  result.value = f(result.x);
  Eigen::VectorXd g = gradient(result.x);
  result.grad_norm = g.norm();
  if (on_iteration) on_iteration(0, result.x, result.value, result.grad_norm);

  Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    if (result.grad_norm <= options.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd p = -(h_inv * g);
    double directional = g.dot(p);
    if (!(directional < 0.0)) {  // not a descent direction: restart
      h_inv.setIdentity();
      p = -g;
      directional = g.dot(p);
    }

    // Backtracking Armijo line search.
    double step = options.initial_step;
    double f_new = result.value;
    bool accepted = false;
    Eigen::VectorXd x_new;
    for (int bt = 0; bt < options.max_backtracks; ++bt) {
      x_new = result.x + step * p;
      f_new = f(x_new);
      if (f_new <= result.value + options.armijo_c1 * step * directional) {
        accepted = true;
        break;
      }
      step *= options.backtrack_factor;
    }
    if (!accepted) {
      result.line_search_failed = true;
      break;
    }

    const Eigen::VectorXd s = x_new - result.x;
    Eigen::VectorXd g_new = gradient(x_new);
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12) {
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h_inv * y;
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      h_inv.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
      h_inv.noalias() += (rho * rho * (y.dot(hy)) + rho) * (s * s.transpose());
    } else {
      h_inv.setIdentity();  // curvature unusable, restart from steepest descent
    }

    const double previous = result.value;
    result.x = std::move(x_new);
    result.value = f_new;
    g = std::move(g_new);
    result.grad_norm = g.norm();
    result.iterations = iter;
    if (on_iteration) on_iteration(iter, result.x, result.value, result.grad_norm);

    if (options.energy_tol > 0.0 &&
        std::abs(previous - result.value) <= options.energy_tol) {
      result.converged = true;
      break;
    }
  }
  if (result.grad_norm <= options.grad_tol) result.converged = true;
  return result;
}

}  // namespace ecdvqe
