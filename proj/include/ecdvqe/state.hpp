#pragma once

// Statevector and density-matrix simulation of the hybrid qubit + qumode
// register, the alternating rotation / conditional-displacement ansatz, and
// measurement sampling.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/gates.hpp"
#include "ecdvqe/hilbert.hpp"

namespace ecdvqe {

// Pure state over the hybrid register; amplitude index = flat basis index of
// the layout (qubit slowest, then modes in order).
struct HybridPureState {
  ModeLayout layout;
  Eigen::VectorXcd amplitudes;

  static HybridPureState vacuum(const ModeLayout& layout);
  double norm() const { return amplitudes.norm(); }
};

// Density matrix over the same flat basis.
struct HybridDensityMatrix {
  ModeLayout layout;
  Eigen::MatrixXcd rho;

  static HybridDensityMatrix vacuum(const ModeLayout& layout);
  static HybridDensityMatrix from_pure(const HybridPureState& state);
  double trace_real() const { return rho.trace().real(); }
};

// Per-block, per-mode gate angles. The conditional displacement amplitude is
// beta = r * exp(i * displacement_phase).
struct BlockModeParameters {
  double theta = 0.0;
  double phi = 0.0;
  double r = 0.0;
  double displacement_phase = 0.0;

  Complex beta() const {
    return Complex(r * std::cos(displacement_phase),
                   r * std::sin(displacement_phase));
  }
};

// All angles of a depth-N_d ansatz over R modes. Packed layout is block-major:
// for block j = 0..depth-1, for mode k = 0..R-1, the four entries
// [theta, phi, r, displacement_phase]; length 4 * R * depth.
class AnsatzParameters {
 public:
  AnsatzParameters(int depth, int num_modes);
  static AnsatzParameters unpack(const Eigen::VectorXd& packed, int depth,
                                 int num_modes);
  Eigen::VectorXd pack() const;

  int depth() const { return depth_; }
  int num_modes() const { return num_modes_; }
  BlockModeParameters& at(int block, int mode);
  const BlockModeParameters& at(int block, int mode) const;

 private:
  int depth_ = 0;
  int num_modes_ = 0;
  std::vector<BlockModeParameters> entries_;
};

// Gate application in place. The conditional displacement
//   ECD(beta) = sigma^- D(beta/2) + sigma^+ D(-beta/2)
// (sigma^+ = |0><1|, sigma^- = |1><0|) swaps the qubit branches: the |0>
// branch is displaced by +beta/2 and lands on |1>, the |1> branch by -beta/2
// onto |0>.
void apply_rotation(HybridPureState& state, double theta, double phi);
void apply_ecd(HybridPureState& state, int mode, Complex beta);
void apply_rotation(HybridDensityMatrix& state, double theta, double phi);
void apply_ecd(HybridDensityMatrix& state, int mode, Complex beta);

// One ansatz block per depth step: for each mode k in order, the qubit
// rotation R(theta_{j,k}, phi_{j,k}) followed by ECD(beta_{j,k}) on mode k.
// Starts from |0> (x) |vac>.
HybridPureState run_ansatz(const AnsatzParameters& params,
                           const ModeLayout& layout);

// Exact Born-rule outcome distribution (entries with zero mass omitted).
MeasurementHistogram exact_probabilities(const HybridPureState& state);
MeasurementHistogram exact_probabilities(const HybridDensityMatrix& state);

// Finite-shot histogram: `shots` independent draws from the exact
// distribution using the given seed; masses are counts/shots.
MeasurementHistogram sample_histogram(const HybridPureState& state, int shots,
                                      std::uint64_t seed);
MeasurementHistogram sample_histogram(const HybridDensityMatrix& state,
                                      int shots, std::uint64_t seed);

}  // namespace ecdvqe
