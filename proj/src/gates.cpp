#include "ecdvqe/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace ecdvqe {

Eigen::MatrixXcd annihilation_matrix(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Eigen::MatrixXcd displacement_matrix(Complex beta, int cutoff) {
  Eigen::MatrixXcd a = annihilation_matrix(cutoff);
  // D = exp(A) with A = beta a^dag - beta* a; H = iA is Hermitian, so
  // D = exp(-iH) = V exp(-i diag(w)) V^dag.
  Eigen::MatrixXcd h =
      Complex(0, 1) * (beta * a.adjoint() - std::conj(beta) * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(cutoff);
  for (int i = 0; i < cutoff; ++i)
    phases(i) = std::exp(Complex(0, -es.eigenvalues()(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::Matrix2cd qubit_rotation(double theta, double phi) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const Complex mi(0, -1);
  Eigen::Matrix2cd r;
  r << c, mi * std::exp(Complex(0, -phi)) * s,
      mi * std::exp(Complex(0, phi)) * s, c;
  return r;
}

}  // namespace ecdvqe
