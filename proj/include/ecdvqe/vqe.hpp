#pragma once

// Variational minimization of a diagonal Hamiltonian with the
// rotation + conditional-displacement ansatz, plus solution extraction.

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/bfgs.hpp"
#include "ecdvqe/noise.hpp"
#include "ecdvqe/qubo.hpp"
#include "ecdvqe/state.hpp"

namespace ecdvqe {

struct OptimizerConfig {
  int max_iterations = 200;
  double grad_step = 1e-5;   // central finite-difference step
  double grad_tol = 1e-8;
  double energy_tol = 0.0;   // 0 disables the energy-delta stop
  std::uint64_t seed = 1;
  double init_scale = 0.2;   // initial displacement magnitudes r ~ U[0, scale)
  int shots = 0;             // 0 = exact expectation values
  NoiseConfig noise;
  // With noise: optimize the noiseless cost and only evaluate the final
  // parameters under the channel, instead of optimizing the noisy cost.
  bool freeze_noise_during_optimization = false;
};

// Energy (and distribution) of the ansatz state at given packed parameters.
// In shots mode every cost call draws a fresh sub-seeded histogram, so two
// evaluations at the same point differ; exact mode is deterministic.
class CostEvaluator {
 public:
  CostEvaluator(const PauliZHamiltonian& h, ModeLayout layout, int depth,
                OptimizerConfig config);

  int parameter_count() const { return 4 * layout_.num_modes() * depth_; }
  const ModeLayout& layout() const { return layout_; }

  double cost(const Eigen::VectorXd& packed);
  // Central finite differences of cost().
  Eigen::VectorXd gradient(const Eigen::VectorXd& packed);
  // Exact (or noisy-exact) outcome distribution, never sampled.
  MeasurementHistogram distribution(const Eigen::VectorXd& packed) const;
  std::uint64_t cost_calls() const { return calls_; }

 private:
  Eigen::VectorXd probabilities(const Eigen::VectorXd& packed) const;

  ModeLayout layout_;
  int depth_ = 0;
  OptimizerConfig config_;
  Eigen::VectorXd energy_table_;  // basis-state energy per flat index
  std::uint64_t calls_ = 0;
};

// Convenience one-shot forms (exact mode).
double ansatz_cost(const Eigen::VectorXd& packed, const PauliZHamiltonian& h,
                   const ModeLayout& layout, int depth);
Eigen::VectorXd ansatz_gradient(const Eigen::VectorXd& packed,
                                const PauliZHamiltonian& h,
                                const ModeLayout& layout, int depth,
                                double grad_step = 1e-5);

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double argmax_probability = 0.0;
  BasisOutcome argmax;
  double grad_norm = 0.0;
};

struct OptimizationTrace {
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;  // iteration 0 = initial point
  Eigen::VectorXd final_parameters;
  MeasurementHistogram final_histogram;
  double final_energy = 0.0;
  int iterations = 0;
  bool converged = false;
  bool line_search_failed = false;
  double wall_seconds = 0.0;

  explicit OptimizationTrace(ModeLayout layout)
      : final_histogram(std::move(layout)) {}
};

// Random-start BFGS run. Angles start uniform in [0, 2 pi), displacement
// magnitudes uniform in [0, init_scale), drawn from mt19937_64(seed) in
// packed order.
OptimizationTrace run_ecd_vqe(const PauliZHamiltonian& h,
                              const ModeLayout& layout, int depth,
                              const OptimizerConfig& config);

// One independent run per seed (config.seed replaced); best = highest argmax
// probability of the final histogram, ties to the earlier seed.
struct MultiSeedResult {
  std::vector<OptimizationTrace> traces;
  std::size_t best_index = 0;

  const OptimizationTrace& best() const { return traces[best_index]; }
};

MultiSeedResult run_ecd_vqe_multi_seed(const PauliZHamiltonian& h,
                                       const ModeLayout& layout, int depth,
                                       const OptimizerConfig& config,
                                       const std::vector<std::uint64_t>& seeds);

// Argmax outcome decoded back to the original problem's variables.
struct SolutionRecord {
  BasisOutcome outcome;
  double probability = 0.0;
  std::vector<int> bits;          // primary variables only
  std::vector<int> bits_full;     // primary + slack
  double objective = 0.0;         // value under the problem's own sense
  bool feasible = false;
};

SolutionRecord extract_solution(const MeasurementHistogram& histogram,
                                const BinaryProblem& problem);

}  // namespace ecdvqe
