#include "ecdvqe/qaoa.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ecdvqe/bfgs.hpp"
#include "ecdvqe/rng.hpp"

namespace ecdvqe {

using Complex = std::complex<double>;

Eigen::VectorXd QaoaParameters::pack() const {
  if (beta.size() != gamma.size())
    throw std::invalid_argument("gamma and beta must have one entry per layer");
  Eigen::VectorXd packed(2 * gamma.size());
  packed << gamma, beta;
  return packed;
}

QaoaParameters QaoaParameters::unpack(const Eigen::VectorXd& packed) {
  if (packed.size() % 2 != 0)
    throw std::invalid_argument("packed length must be even");
  const Eigen::Index p = packed.size() / 2;
  return {packed.head(p), packed.tail(p)};
}

namespace {

class QaoaEngine {
 public:
  explicit QaoaEngine(const PauliZHamiltonian& h) : n_(h.num_qubits()) {
    if (n_ > 16)
      throw SizeGuardError("qubit-only statevector limited to 16 qubits");
    const Eigen::Index dim = Eigen::Index{1} << n_;
    energies_.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      energies_(i) =
          evaluate_bitstring(h, index_to_bits(static_cast<std::uint64_t>(i), n_));
  }

  int num_qubits() const { return n_; }
  const Eigen::VectorXd& energies() const { return energies_; }

  Eigen::VectorXcd state(const QaoaParameters& params) const {
    const Eigen::Index dim = energies_.size();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(
        dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
    for (int layer = 0; layer < params.layers(); ++layer) {
      const double gamma = params.gamma(layer);
      for (Eigen::Index i = 0; i < dim; ++i)
        psi(i) *= std::exp(Complex(0.0, -gamma * energies_(i)));
      apply_mixer(psi, params.beta(layer));
    }
    return psi;
  }

  double cost(const QaoaParameters& params) const {
    return state(params).cwiseAbs2().dot(energies_);
  }

 private:
  // e^{-i beta X} on every qubit: 2x2 [[cos b, -i sin b], [-i sin b, cos b]].
  void apply_mixer(Eigen::VectorXcd& psi, double beta) const {
    const double c = std::cos(beta), s = std::sin(beta);
    const Complex off(0.0, -s);
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (int q = 0; q < n_; ++q) {
      const std::uint64_t mask = std::uint64_t{1} << (n_ - 1 - q);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::uint64_t j = i | mask;
        const Complex x0 = psi(static_cast<Eigen::Index>(i));
        const Complex x1 = psi(static_cast<Eigen::Index>(j));
        psi(static_cast<Eigen::Index>(i)) = c * x0 + off * x1;
        psi(static_cast<Eigen::Index>(j)) = off * x0 + c * x1;
      }
    }
  }

  int n_;
  Eigen::VectorXd energies_;
};

}  // namespace

Eigen::VectorXcd qaoa_state(const PauliZHamiltonian& h,
                            const QaoaParameters& params) {
  return QaoaEngine(h).state(params);
}

double qaoa_cost(const PauliZHamiltonian& h, const QaoaParameters& params) {
  return QaoaEngine(h).cost(params);
}

QaoaRunResult run_qaoa(const PauliZHamiltonian& h, int layers, int trials,
                       const QaoaConfig& config) {
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const QaoaEngine engine(h);

  QaoaRunResult result;
  auto [solution_bits, solution_energy] = exact_ground_state(h);
  result.solution_bits = std::move(solution_bits);
  result.solution_energy = solution_energy;
  const auto solution_index =
      static_cast<Eigen::Index>(bits_to_index(result.solution_bits));

  auto objective = [&](const Eigen::VectorXd& x) {
    return engine.cost(QaoaParameters::unpack(x));
  };
  auto gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double saved = probe(i);
      probe(i) = saved + config.grad_step;
      const double fp = objective(probe);
      probe(i) = saved - config.grad_step;
      const double fm = objective(probe);
      probe(i) = saved;
      g(i) = (fp - fm) / (2.0 * config.grad_step);
    }
    return g;
  };

  BfgsOptions options;
  options.max_iterations = config.max_iterations;
  options.grad_tol = config.grad_tol;

  const double two_pi = 8.0 * std::atan(1.0);
  double best_p = -1.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(t)));
    Eigen::VectorXd x0(2 * layers);
    for (Eigen::Index i = 0; i < x0.size(); ++i)
      x0(i) = two_pi * uniform_double(rng);

    const BfgsResult run = minimize_bfgs(objective, gradient, x0, options);
    const Eigen::VectorXcd psi = engine.state(QaoaParameters::unpack(run.x));

    QaoaTrial trial;
    trial.seed = mix_seed(config.seed, static_cast<std::uint64_t>(t));
    trial.energy = run.value;
    trial.solution_probability = std::norm(psi(solution_index));
    trial.iterations = run.iterations;
    trial.parameters = QaoaParameters::unpack(run.x);
    result.trials.push_back(std::move(trial));

    if (result.trials.back().solution_probability > best_p) {
      best_p = result.trials.back().solution_probability;
      result.best_index = static_cast<std::size_t>(t);
      result.best_distribution = psi.cwiseAbs2();
    }
  }
  return result;
}

}  // namespace ecdvqe
