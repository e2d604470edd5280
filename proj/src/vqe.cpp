#include "ecdvqe/vqe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ecdvqe/rng.hpp"

namespace ecdvqe {

namespace {

Eigen::VectorXd basis_energy_table(const PauliZHamiltonian& h,
                                   const ModeLayout& layout) {
  if (layout.num_qubits() != h.num_qubits())
    throw std::invalid_argument("layout and Hamiltonian disagree on qubits");
  const auto dim = static_cast<Eigen::Index>(layout.dimension());
  Eigen::VectorXd table(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    table(i) = evaluate_bitstring(
        h, index_to_bits(static_cast<std::uint64_t>(i), layout.num_qubits()));
  return table;
}

}  // namespace

CostEvaluator::CostEvaluator(const PauliZHamiltonian& h, ModeLayout layout,
                             int depth, OptimizerConfig config)
    : layout_(std::move(layout)), depth_(depth), config_(std::move(config)) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (config_.shots < 0) throw std::invalid_argument("shots must be >= 0");
  energy_table_ = basis_energy_table(h, layout_);
}

Eigen::VectorXd CostEvaluator::probabilities(
    const Eigen::VectorXd& packed) const {
  const AnsatzParameters params =
      AnsatzParameters::unpack(packed, depth_, layout_.num_modes());
  const bool noisy = config_.noise.enabled() &&
                     !config_.freeze_noise_during_optimization;
  if (noisy)
    return evolve_noisy(params, layout_, config_.noise).rho.diagonal().real();
  return run_ansatz(params, layout_).amplitudes.cwiseAbs2();
}

double CostEvaluator::cost(const Eigen::VectorXd& packed) {
  const Eigen::VectorXd probs = probabilities(packed);
  if (config_.shots > 0) {
    // Fresh sub-stream per call so repeated draws are independent yet the
    // whole optimization is reproducible from the base seed.
    const std::uint64_t sub = mix_seed(config_.seed, calls_++);
    std::mt19937_64 rng(sub);
    std::vector<double> cumulative(static_cast<std::size_t>(probs.size()));
    double acc = 0.0;
    const double total = probs.sum();
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      acc += std::max(0.0, probs(i)) / total;
      cumulative[static_cast<std::size_t>(i)] = acc;
    }
    cumulative.back() = 1.0;
    double energy = 0.0;
    for (int s = 0; s < config_.shots; ++s) {
      const double u = uniform_double(rng);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      energy += energy_table_(static_cast<Eigen::Index>(it - cumulative.begin()));
    }
    return energy / config_.shots;
  }
  ++calls_;
  return energy_table_.dot(probs);
}

Eigen::VectorXd CostEvaluator::gradient(const Eigen::VectorXd& packed) {
  Eigen::VectorXd g(packed.size());
  Eigen::VectorXd x = packed;
  const double h = config_.grad_step;
  for (Eigen::Index i = 0; i < packed.size(); ++i) {
    const double saved = x(i);
    x(i) = saved + h;
    const double fp = cost(x);
    x(i) = saved - h;
    const double fm = cost(x);
    x(i) = saved;
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

MeasurementHistogram CostEvaluator::distribution(
    const Eigen::VectorXd& packed) const {
  const AnsatzParameters params =
      AnsatzParameters::unpack(packed, depth_, layout_.num_modes());
  if (config_.noise.enabled())
    return exact_probabilities(evolve_noisy(params, layout_, config_.noise));
  return exact_probabilities(run_ansatz(params, layout_));
}

double ansatz_cost(const Eigen::VectorXd& packed, const PauliZHamiltonian& h,
                   const ModeLayout& layout, int depth) {
  CostEvaluator eval(h, layout, depth, OptimizerConfig{});
  return eval.cost(packed);
}

Eigen::VectorXd ansatz_gradient(const Eigen::VectorXd& packed,
                                const PauliZHamiltonian& h,
                                const ModeLayout& layout, int depth,
                                double grad_step) {
  OptimizerConfig cfg;
  cfg.grad_step = grad_step;
  CostEvaluator eval(h, layout, depth, cfg);
  return eval.gradient(packed);
}

namespace {

Eigen::VectorXd initial_parameters(int depth, int num_modes,
                                   std::uint64_t seed, double init_scale) {
  std::mt19937_64 rng(seed);
  const double two_pi = 8.0 * std::atan(1.0);
  AnsatzParameters params(depth, num_modes);
  for (int block = 0; block < depth; ++block)
    for (int mode = 0; mode < num_modes; ++mode) {
      auto& p = params.at(block, mode);
      p.theta = two_pi * uniform_double(rng);
      p.phi = two_pi * uniform_double(rng);
      p.r = init_scale * uniform_double(rng);
      p.displacement_phase = two_pi * uniform_double(rng);
    }
  return params.pack();
}

}  // namespace

OptimizationTrace run_ecd_vqe(const PauliZHamiltonian& h,
                              const ModeLayout& layout, int depth,
                              const OptimizerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CostEvaluator evaluator(h, layout, depth, config);
  OptimizationTrace trace(layout);
  trace.seed = config.seed;

  BfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.grad_tol = config.grad_tol;
  options.energy_tol = config.energy_tol;

  const Eigen::VectorXd x0 = initial_parameters(
      depth, layout.num_modes(), config.seed, config.init_scale);

  auto record = [&](int iteration, const Eigen::VectorXd& x, double value,
                    double grad_norm) {
    IterationRecord rec;
    rec.iteration = iteration;
    rec.energy = value;
    rec.grad_norm = grad_norm;
    const MeasurementHistogram hist = evaluator.distribution(x);
    auto [outcome, p] = hist.argmax();
    rec.argmax = std::move(outcome);
    rec.argmax_probability = p;
    trace.records.push_back(std::move(rec));
  };

  BfgsResult result = minimize_bfgs(
      [&](const Eigen::VectorXd& x) { return evaluator.cost(x); },
      [&](const Eigen::VectorXd& x) { return evaluator.gradient(x); }, x0,
      options, record);

  trace.final_parameters = result.x;
  trace.final_histogram = evaluator.distribution(result.x);
  trace.final_energy = result.value;
  trace.iterations = result.iterations;
  trace.converged = result.converged;
  trace.line_search_failed = result.line_search_failed;
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace;
}

MultiSeedResult run_ecd_vqe_multi_seed(const PauliZHamiltonian& h,
                                       const ModeLayout& layout, int depth,
                                       const OptimizerConfig& config,
                                       const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("at least one seed required");
  MultiSeedResult result;
  double best_p = -1.0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    OptimizerConfig cfg = config;
    cfg.seed = seeds[i];
    result.traces.push_back(run_ecd_vqe(h, layout, depth, cfg));
    const double p = result.traces.back().final_histogram.argmax().second;
    if (p > best_p) {
      best_p = p;
      result.best_index = i;
    }
  }
  return result;
}

SolutionRecord extract_solution(const MeasurementHistogram& histogram,
                                const BinaryProblem& problem) {
  const ModeLayout& layout = histogram.layout();
  if (layout.num_qubits() != problem.total_variables())
    throw std::invalid_argument("layout does not match the reduced problem");
  SolutionRecord rec;
  auto [outcome, p] = histogram.argmax();
  rec.outcome = std::move(outcome);
  rec.probability = p;
  rec.bits_full = layout.decode(rec.outcome);
  rec.bits.assign(rec.bits_full.begin(),
                  rec.bits_full.begin() + problem.num_variables);
  rec.objective = problem.objective_value(rec.bits);
  rec.feasible = problem.feasible(rec.bits);
  return rec;
}

}  // namespace ecdvqe
