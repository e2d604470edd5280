#pragma once

// Qubit-only alternating-operator baseline on the same diagonal Hamiltonian:
// p layers of e^{-i gamma H} and e^{-i beta sum_j X_j} on |+>^N, optimized
// with the shared BFGS driver.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/qubo.hpp"

namespace ecdvqe {

struct QaoaParameters {
  Eigen::VectorXd gamma;  // one per layer, phase-separation angles
  Eigen::VectorXd beta;   // one per layer, mixer angles

  int layers() const { return static_cast<int>(gamma.size()); }
  Eigen::VectorXd pack() const;  // [gamma; beta]
  static QaoaParameters unpack(const Eigen::VectorXd& packed);
};

struct QaoaConfig {
  std::uint64_t seed = 1;
  int max_iterations = 150;
  double grad_step = 1e-5;
  double grad_tol = 1e-8;
};

// Statevector over 2^N amplitudes indexed by the big-endian bitstring
// (N <= 16).
Eigen::VectorXcd qaoa_state(const PauliZHamiltonian& h,
                            const QaoaParameters& params);
double qaoa_cost(const PauliZHamiltonian& h, const QaoaParameters& params);

struct QaoaTrial {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double solution_probability = 0.0;
  int iterations = 0;
  QaoaParameters parameters;
};

struct QaoaRunResult {
  std::vector<QaoaTrial> trials;
  std::size_t best_index = 0;  // highest solution probability, earliest wins ties
  Eigen::VectorXd best_distribution;  // |amplitude|^2 of the best trial
  std::vector<int> solution_bits;     // exhaustive ground state of h
  double solution_energy = 0.0;

  const QaoaTrial& best() const { return trials[best_index]; }
};

// `trials` random restarts with angles uniform in [0, 2 pi), seeded from
// mix_seed(config.seed, trial index).
QaoaRunResult run_qaoa(const PauliZHamiltonian& h, int layers, int trials,
                       const QaoaConfig& config);

}  // namespace ecdvqe
