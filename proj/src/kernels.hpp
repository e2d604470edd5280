#pragma once

// Internal index-slice kernels: gates touch only the qubit and one mode, so
// they act on strided slices of the flat amplitude array and never build
// operators on the full space.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/gates.hpp"
#include "ecdvqe/hilbert.hpp"

namespace ecdvqe::detail {

struct FlatDims {
  std::vector<int> cutoffs;
  std::vector<std::size_t> stride;  // flat-index stride of each mode
  std::size_t half = 0;             // prod cutoffs = qubit stride
  std::size_t total = 0;

  explicit FlatDims(const ModeLayout& layout) {
    cutoffs = layout.cutoffs();
    stride.resize(cutoffs.size());
    std::size_t s = 1;
    for (int k = static_cast<int>(cutoffs.size()) - 1; k >= 0; --k) {
      stride[k] = s;
      s *= static_cast<std::size_t>(cutoffs[k]);
    }
    half = s;
    total = 2 * s;
  }

  // Base flat index of the `outer`-th slice of a mode: all other indices
  // enumerated in order with the mode's own index removed.
  std::size_t slice_base(int mode, std::size_t outer) const {
    const std::size_t s = stride[mode];
    const auto L = static_cast<std::size_t>(cutoffs[mode]);
    return (outer / s) * (s * L) + (outer % s);
  }
};

// amp is one flat vector of length dims.total.
void apply_qubit_gate(Complex* amp, const FlatDims& dims,
                      const Eigen::Matrix2cd& u);
// Conditional displacement: |0> branch gets d_plus and flips to |1>, the |1>
// branch gets d_minus and flips to |0>.
void apply_conditional_displacement(Complex* amp, const FlatDims& dims,
                                    int mode, const Eigen::MatrixXcd& d_plus,
                                    const Eigen::MatrixXcd& d_minus);
// Arbitrary one-mode operator (need not be unitary).
void apply_mode_matrix(Complex* amp, const FlatDims& dims, int mode,
                       const Eigen::MatrixXcd& m);
// Operator with entries only on superdiagonal j: out[n] = diag[n] * in[n+j].
void apply_mode_superdiagonal(Complex* amp, const FlatDims& dims, int mode,
                              int j, const Eigen::VectorXd& diag);

// rho <- u rho u^dag via two passes of the column kernel and two adjoints
// (valid for any rho; the intermediate (u rho)^adj is re-multiplied by u).
template <typename ColumnKernel>
void two_sided_apply(Eigen::MatrixXcd& rho, ColumnKernel&& kernel) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) kernel(rho.col(c).data());
    rho.adjointInPlace();
  }
}

}  // namespace ecdvqe::detail
