#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ecdvqe/bfgs.hpp"
#include "ecdvqe/qaoa.hpp"
#include "ecdvqe/rng.hpp"
#include "ecdvqe/vqe.hpp"
#include "frozen_values.hpp"

using namespace ecdvqe;

namespace {

PauliZHamiltonian knapsack_h() {
  return to_pauli_hamiltonian(to_unconstrained(frozen::knapsack_instance()));
}

// Tiny single-item instance: one primary bit, one slack bit; the item does
// not fit, and the penalty weight is large enough that packing it anyway
// costs more than leaving it out.
BinaryProblem tiny_instance() { return build_knapsack({3}, {2}, 1, 4); }

}  // namespace

TEST_CASE("quasi-Newton solves a convex quadratic to high accuracy") {
  Eigen::MatrixXd a(3, 3);
  a << 4, 1, 0, 1, 3, 1, 0, 1, 5;
  const Eigen::Vector3d b(1, -2, 0.5);
  auto f = [&](const Eigen::VectorXd& x) {
    return 0.5 * x.dot(a * x) - b.dot(x);
  };
  auto g = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return a * x - b;
  };
  BfgsOptions options;
  options.max_iterations = 100;
  const BfgsResult result = minimize_bfgs(f, g, Eigen::Vector3d(5, -5, 5), options);
  CHECK(result.converged);
  CHECK_FALSE(result.line_search_failed);
  CHECK((a * result.x - b).norm() < 1e-6);
  CHECK(result.iterations < 30);
}

TEST_CASE("quasi-Newton walks the banana valley") {
  auto f = [](const Eigen::VectorXd& x) {
    const double t1 = 1.0 - x(0), t2 = x(1) - x(0) * x(0);
    return t1 * t1 + 100.0 * t2 * t2;
  };
  auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd grad(2);
    const double t2 = x(1) - x(0) * x(0);
    grad(0) = -2.0 * (1.0 - x(0)) - 400.0 * x(0) * t2;
    grad(1) = 200.0 * t2;
    return grad;
  };
  BfgsOptions options;
  options.max_iterations = 500;
  options.grad_tol = 1e-6;
  const BfgsResult result =
      minimize_bfgs(f, g, Eigen::Vector2d(-1.2, 1.0), options);
  CHECK(result.converged);
  CHECK(std::abs(result.x(0) - 1.0) < 1e-5);
  CHECK(std::abs(result.x(1) - 1.0) < 1e-5);
}

TEST_CASE("callback reports the initial point and each accepted step") {
  auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return 2.0 * x; };
  std::vector<int> iterations;
  std::vector<double> values;
  BfgsOptions options;
  options.max_iterations = 50;
  minimize_bfgs(f, g, Eigen::Vector2d(3, 4), options,
                [&](int it, const Eigen::VectorXd&, double v, double) {
                  iterations.push_back(it);
                  values.push_back(v);
                });
  REQUIRE(iterations.size() >= 2);
  for (std::size_t i = 0; i < iterations.size(); ++i)
    CHECK(iterations[i] == static_cast<int>(i));
  for (std::size_t i = 1; i < values.size(); ++i)
    CHECK(values[i] <= values[i - 1]);  // Armijo steps never increase f
}

TEST_CASE("a lying gradient ends in a reported line-search failure") {
  auto f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  auto g = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return -2.0 * x;  // points uphill
  };
  BfgsOptions options;
  options.max_iterations = 10;
  const BfgsResult result =
      minimize_bfgs(f, g, Eigen::Vector2d(1, 1), options);
  CHECK(result.line_search_failed);
  CHECK_FALSE(result.converged);
  CHECK(result.iterations == 0);
}

TEST_CASE("an identity-only Hamiltonian stops the optimizer immediately") {
  const PauliZHamiltonian h(3, {{4.5, {}}});
  const ModeLayout layout = ModeLayout::create(3, {2, 2});
  OptimizerConfig config;
  config.seed = 2;
  const OptimizationTrace trace = run_ecd_vqe(h, layout, 2, config);
  CHECK(trace.converged);
  CHECK(trace.iterations == 0);
  REQUIRE(trace.records.size() == 1);
  CHECK(trace.records[0].energy == doctest::Approx(4.5));
  // The finite-difference gradient of a constant cost is zero up to float
  // cancellation (~1e-16 / step); the 1e-8 stop catches it at iteration 0.
  CHECK(trace.records[0].grad_norm < 1e-8);
  CHECK(trace.final_energy == doctest::Approx(4.5));
}

TEST_CASE("cost equals the histogram expectation at any parameter point") {
  const PauliZHamiltonian h = knapsack_h();
  const ModeLayout layout = ModeLayout::create(7, {8, 8});
  OptimizerConfig config;
  CostEvaluator evaluator(h, layout, 3, config);

  std::mt19937_64 rng(61);
  Eigen::VectorXd x(evaluator.parameter_count());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    x(i) = 2.0 * uniform_double(rng) - 1.0;

  const double direct = evaluator.cost(x);
  const double via_histogram =
      expectation_from_histogram(h, evaluator.distribution(x));
  CHECK(direct == doctest::Approx(via_histogram).epsilon(1e-10));
  CHECK(evaluator.cost(x) == direct);  // exact mode is deterministic
}

TEST_CASE("finite-shot costs are reproducible from the base seed") {
  const PauliZHamiltonian h = knapsack_h();
  const ModeLayout layout = ModeLayout::create(7, {8, 8});
  OptimizerConfig config;
  config.shots = 128;
  config.seed = 9;

  CostEvaluator first(h, layout, 2, config);
  CostEvaluator second(h, layout, 2, config);
  // A spread-out state: at the all-zero parameter point the outcome would be
  // deterministic and every shot batch identical.
  std::mt19937_64 rng(77);
  Eigen::VectorXd x(first.parameter_count());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform_double(rng);
  const double a1 = first.cost(x);
  const double a2 = first.cost(x);  // same point, fresh draw
  CHECK(first.cost_calls() == 2);
  CHECK(a1 != a2);
  CHECK(second.cost(x) == a1);  // identical call sequence, identical stream
  CHECK(second.cost(x) == a2);
}

TEST_CASE("variational run solves the single-item instance end to end") {
  const BinaryProblem problem = tiny_instance();
  const PauliZHamiltonian h = to_pauli_hamiltonian(to_unconstrained(problem));
  REQUIRE(h.num_qubits() == 2);
  const ModeLayout layout = ModeLayout::create(2, {2});

  OptimizerConfig config;
  config.max_iterations = 120;
  const MultiSeedResult result =
      run_ecd_vqe_multi_seed(h, layout, 2, config, {1, 2, 3});
  const OptimizationTrace& best = result.best();

  // Exact optimum: x = (0), slack 1: energy 0 at outcome (0, 1).
  const auto [bits, energy] = exact_ground_state(h);
  CHECK(bits == std::vector<int>{0, 1});
  CHECK(energy == doctest::Approx(0.0));
  CHECK(best.final_energy < 0.3);
  const auto [argmax, p] = best.final_histogram.argmax();
  CHECK(argmax == BasisOutcome{0, {1}});
  CHECK(p > 0.5);

  // Energies along the accepted-step trace never increase in exact mode.
  for (std::size_t i = 1; i < best.records.size(); ++i)
    CHECK(best.records[i].energy <= best.records[i - 1].energy + 1e-12);
  // Iterations are consecutive starting at zero.
  for (std::size_t i = 0; i < best.records.size(); ++i)
    CHECK(best.records[i].iteration == static_cast<int>(i));

  const SolutionRecord solution =
      extract_solution(best.final_histogram, problem);
  CHECK(solution.bits == std::vector<int>{0});
  CHECK(solution.bits_full == std::vector<int>{0, 1});
  CHECK(solution.objective == doctest::Approx(0.0));
  CHECK(solution.feasible);
}

TEST_CASE("identical seeds reproduce identical traces") {
  const PauliZHamiltonian h = knapsack_h();
  const ModeLayout layout = ModeLayout::create(7, {8, 8});
  OptimizerConfig config;
  config.max_iterations = 5;
  config.seed = 4;
  const OptimizationTrace a = run_ecd_vqe(h, layout, 2, config);
  const OptimizationTrace b = run_ecd_vqe(h, layout, 2, config);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].energy == b.records[i].energy);
    CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
    CHECK(a.records[i].argmax_probability == b.records[i].argmax_probability);
  }
  CHECK(a.final_parameters == b.final_parameters);
}

TEST_CASE("solution extraction flags infeasible argmax outcomes") {
  const BinaryProblem problem = frozen::knapsack_instance();
  const ModeLayout layout = ModeLayout::create(7, {8, 8});
  MeasurementHistogram hist(layout);
  hist.add(layout.encode({1, 1, 1, 1, 0, 0, 0}), 0.9);  // weight 13 > 7
  hist.add(layout.encode(frozen::knapsack_solution_bits()), 0.1);
  const SolutionRecord solution = extract_solution(hist, problem);
  CHECK(solution.bits == std::vector<int>{1, 1, 1, 1});
  CHECK_FALSE(solution.feasible);
  CHECK(solution.objective == doctest::Approx(17.0));
  CHECK(solution.probability == doctest::Approx(0.9));
}

TEST_CASE("uniform initial layers reproduce the identity-coefficient cost") {
  const PauliZHamiltonian h = knapsack_h();
  QaoaParameters params;
  params.gamma = Eigen::VectorXd::Zero(3);
  params.beta = Eigen::VectorXd::Zero(3);
  // gamma = beta = 0 leaves |+>^N untouched: <H> is the identity coefficient.
  CHECK(qaoa_cost(h, params) ==
        doctest::Approx(frozen::knapsack_uniform_expectation).epsilon(1e-10));
  const Eigen::VectorXcd psi = qaoa_state(h, params);
  CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    CHECK(std::abs(psi(i) - psi(0)) < 1e-12);
}

TEST_CASE("baseline state stays normalized and is seed-reproducible") {
  const PauliZHamiltonian h = to_pauli_hamiltonian(
      to_unconstrained(frozen::multi_constraint_instance()));
  std::mt19937_64 rng(71);
  QaoaParameters params;
  params.gamma = Eigen::VectorXd(4);
  params.beta = Eigen::VectorXd(4);
  for (int i = 0; i < 4; ++i) {
    params.gamma(i) = 6.28 * uniform_double(rng);
    params.beta(i) = 6.28 * uniform_double(rng);
  }
  CHECK(std::abs(qaoa_state(h, params).norm() - 1.0) < 1e-10);

  const Eigen::VectorXd packed = params.pack();
  const QaoaParameters again = QaoaParameters::unpack(packed);
  CHECK(again.gamma == params.gamma);
  CHECK(again.beta == params.beta);

  QaoaConfig config;
  config.seed = 3;
  config.max_iterations = 25;
  const QaoaRunResult a = run_qaoa(h, 2, 3, config);
  const QaoaRunResult b = run_qaoa(h, 2, 3, config);
  REQUIRE(a.trials.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(a.trials[t].energy == b.trials[t].energy);
    CHECK(a.trials[t].solution_probability == b.trials[t].solution_probability);
  }
  CHECK(a.best_index == b.best_index);
  for (const auto& trial : a.trials)
    CHECK(trial.solution_probability <= a.best().solution_probability);
  CHECK(a.solution_bits == frozen::multi_constraint_solution_bits());
}

TEST_CASE("baseline rejects oversized registers") {
  const PauliZHamiltonian h(17, {{1.0, {0}}});
  QaoaParameters params;
  params.gamma = Eigen::VectorXd::Zero(1);
  params.beta = Eigen::VectorXd::Zero(1);
  CHECK_THROWS_AS(qaoa_state(h, params), SizeGuardError);
}
