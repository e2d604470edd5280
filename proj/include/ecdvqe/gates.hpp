#pragma once

// Elementary gate matrices on a truncated Fock space and on the qubit.

#include <complex>

#include <Eigen/Dense>

namespace ecdvqe {

using Complex = std::complex<double>;

// Truncated annihilation operator: <n-1|a|n> = sqrt(n).
Eigen::MatrixXcd annihilation_matrix(int cutoff);

// Displacement D(beta) = exp(beta a^dag - beta* a), exponentiated through the
// eigendecomposition of the Hermitian generator i(beta a^dag - beta* a) so the
// result is exactly unitary on the truncated space.
Eigen::MatrixXcd displacement_matrix(Complex beta, int cutoff);

// R(theta, phi) = exp(-i theta/2 (cos(phi) X + sin(phi) Y))
//   = [[cos(theta/2), -i e^{-i phi} sin(theta/2)],
//      [-i e^{i phi} sin(theta/2), cos(theta/2)]]
Eigen::Matrix2cd qubit_rotation(double theta, double phi);

}  // namespace ecdvqe
