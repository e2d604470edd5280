#pragma once

// Single-photon-loss (amplitude damping) channel on the qumodes.

#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/state.hpp"

namespace ecdvqe {

// Noise strength: dimensionless kappa * tau accumulated per ansatz block,
// identical for every qumode; the qubit is noiseless.
struct NoiseConfig {
  double kappa_tau = 0.0;

  bool enabled() const { return kappa_tau > 0.0; }
};

// Kraus operators of amplitude damping at strength kappa*tau on a truncated
// Fock space. K_j (j >= 1 photons lost) has entries only on superdiagonal j:
//   <n-j| K_j |n> = sqrt(gamma^j / j!) e^{-kappa tau (n-j)/2} sqrt(n!/(n-j)!),
// gamma = 1 - e^{-kappa tau}. K_0 is diagonal, defined as the square root of
// I - sum_{j>=1} K_j^dag K_j so the set is exactly complete on the truncated
// space.
class KrausSet {
 public:
  KrausSet(double kappa_tau, int cutoff,
           std::vector<Eigen::VectorXd> diagonals);

  double kappa_tau() const { return kappa_tau_; }
  int cutoff() const { return cutoff_; }
  int count() const { return static_cast<int>(diagonals_.size()); }
  // Entries <n|K_j|n+j> for n = 0..cutoff-1-j.
  const Eigen::VectorXd& diagonal(int j) const { return diagonals_.at(j); }
  Eigen::MatrixXd matrix(int j) const;
  // max |(sum_j K_j^dag K_j - I)_{nn}|
  double completeness_defect() const;

 private:
  double kappa_tau_ = 0.0;
  int cutoff_ = 0;
  std::vector<Eigen::VectorXd> diagonals_;
};

KrausSet kraus_amplitude_damping(double kappa_tau, int cutoff);

// rho <- sum_j K_j rho K_j^dag on one mode (acting as identity elsewhere).
void apply_channel(HybridDensityMatrix& state, int mode, const KrausSet& kraus);

// Loss on every qumode at the same strength. The joint two-sided sum over all
// modes factorizes into per-mode channels applied in sequence.
void apply_channel_multimode(HybridDensityMatrix& state,
                             const NoiseConfig& noise);

// Density-matrix ansatz evolution from the vacuum with the loss channel
// applied to all qumodes after every block, including the last.
HybridDensityMatrix evolve_noisy(const AnsatzParameters& params,
                                 const ModeLayout& layout,
                                 const NoiseConfig& noise);

}  // namespace ecdvqe
