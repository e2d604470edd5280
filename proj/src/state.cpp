#include "ecdvqe/state.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "ecdvqe/rng.hpp"
#include "kernels.hpp"

namespace ecdvqe {

namespace detail {

void apply_qubit_gate(Complex* amp, const FlatDims& dims,
                      const Eigen::Matrix2cd& u) {
  for (std::size_t i = 0; i < dims.half; ++i) {
    const Complex x0 = amp[i], x1 = amp[i + dims.half];
    amp[i] = u(0, 0) * x0 + u(0, 1) * x1;
    amp[i + dims.half] = u(1, 0) * x0 + u(1, 1) * x1;
  }
}

void apply_conditional_displacement(Complex* amp, const FlatDims& dims,
                                    int mode, const Eigen::MatrixXcd& d_plus,
                                    const Eigen::MatrixXcd& d_minus) {
  const auto L = static_cast<std::size_t>(dims.cutoffs[mode]);
  const std::size_t s = dims.stride[mode];
  Eigen::VectorXcd v0(L), v1(L), w0(L), w1(L);
  const std::size_t outer_count = dims.half / L;
  for (std::size_t outer = 0; outer < outer_count; ++outer) {
    const std::size_t b0 = dims.slice_base(mode, outer);
    const std::size_t b1 = b0 + dims.half;
    for (std::size_t n = 0; n < L; ++n) {
      v0(n) = amp[b0 + n * s];
      v1(n) = amp[b1 + n * s];
    }
    w1.noalias() = d_plus * v0;   // |0> branch -> displaced, qubit flips to |1>
    w0.noalias() = d_minus * v1;  // |1> branch -> displaced, qubit flips to |0>
    for (std::size_t n = 0; n < L; ++n) {
      amp[b0 + n * s] = w0(n);
      amp[b1 + n * s] = w1(n);
    }
  }
}

void apply_mode_matrix(Complex* amp, const FlatDims& dims, int mode,
                       const Eigen::MatrixXcd& m) {
  const auto L = static_cast<std::size_t>(dims.cutoffs[mode]);
  const std::size_t s = dims.stride[mode];
  Eigen::VectorXcd v(L), w(L);
  const std::size_t outer_count = dims.total / L;
  for (std::size_t outer = 0; outer < outer_count; ++outer) {
    const std::size_t base = dims.slice_base(mode, outer);
    for (std::size_t n = 0; n < L; ++n) v(n) = amp[base + n * s];
    w.noalias() = m * v;
    for (std::size_t n = 0; n < L; ++n) amp[base + n * s] = w(n);
  }
}

void apply_mode_superdiagonal(Complex* amp, const FlatDims& dims, int mode,
                              int j, const Eigen::VectorXd& diag) {
  const auto L = static_cast<std::size_t>(dims.cutoffs[mode]);
  const std::size_t s = dims.stride[mode];
  const std::size_t keep = L - static_cast<std::size_t>(j);
  const std::size_t outer_count = dims.total / L;
  for (std::size_t outer = 0; outer < outer_count; ++outer) {
    const std::size_t base = dims.slice_base(mode, outer);
    for (std::size_t n = 0; n < keep; ++n)
      amp[base + n * s] = diag(static_cast<Eigen::Index>(n)) *
                          amp[base + (n + static_cast<std::size_t>(j)) * s];
    for (std::size_t n = keep; n < L; ++n) amp[base + n * s] = Complex(0, 0);
  }
}

}  // namespace detail

HybridPureState HybridPureState::vacuum(const ModeLayout& layout) {
  HybridPureState state{layout, Eigen::VectorXcd::Zero(
                                    static_cast<Eigen::Index>(layout.dimension()))};
  state.amplitudes(0) = Complex(1, 0);
  return state;
}

HybridDensityMatrix HybridDensityMatrix::vacuum(const ModeLayout& layout) {
  const auto d = static_cast<Eigen::Index>(layout.dimension());
  HybridDensityMatrix state{layout, Eigen::MatrixXcd::Zero(d, d)};
  state.rho(0, 0) = Complex(1, 0);
  return state;
}

HybridDensityMatrix HybridDensityMatrix::from_pure(const HybridPureState& state) {
  return {state.layout, state.amplitudes * state.amplitudes.adjoint()};
}

AnsatzParameters::AnsatzParameters(int depth, int num_modes)
    : depth_(depth), num_modes_(num_modes) {
  if (depth < 1 || num_modes < 1)
    throw std::invalid_argument("depth and mode count must be >= 1");
  entries_.resize(static_cast<std::size_t>(depth) * num_modes);
}

AnsatzParameters AnsatzParameters::unpack(const Eigen::VectorXd& packed,
                                          int depth, int num_modes) {
  AnsatzParameters p(depth, num_modes);
  if (packed.size() != 4 * static_cast<Eigen::Index>(p.entries_.size()))
    throw std::invalid_argument("packed parameter length mismatch");
  for (std::size_t e = 0; e < p.entries_.size(); ++e) {
    const auto o = static_cast<Eigen::Index>(4 * e);
    p.entries_[e] = {packed(o), packed(o + 1), packed(o + 2), packed(o + 3)};
  }
  return p;
}

Eigen::VectorXd AnsatzParameters::pack() const {
  Eigen::VectorXd packed(4 * static_cast<Eigen::Index>(entries_.size()));
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto o = static_cast<Eigen::Index>(4 * e);
    packed(o) = entries_[e].theta;
    packed(o + 1) = entries_[e].phi;
    packed(o + 2) = entries_[e].r;
    packed(o + 3) = entries_[e].displacement_phase;
  }
  return packed;
}

BlockModeParameters& AnsatzParameters::at(int block, int mode) {
  return entries_.at(static_cast<std::size_t>(block) * num_modes_ + mode);
}

const BlockModeParameters& AnsatzParameters::at(int block, int mode) const {
  return entries_.at(static_cast<std::size_t>(block) * num_modes_ + mode);
}

void apply_rotation(HybridPureState& state, double theta, double phi) {
  detail::FlatDims dims(state.layout);
  detail::apply_qubit_gate(state.amplitudes.data(), dims,
                           qubit_rotation(theta, phi));
}

void apply_ecd(HybridPureState& state, int mode, Complex beta) {
  detail::FlatDims dims(state.layout);
  const Eigen::MatrixXcd d_plus =
      displacement_matrix(beta / 2.0, state.layout.cutoffs().at(mode));
  detail::apply_conditional_displacement(state.amplitudes.data(), dims, mode,
                                         d_plus, d_plus.adjoint());
}

void apply_rotation(HybridDensityMatrix& state, double theta, double phi) {
  detail::FlatDims dims(state.layout);
  const Eigen::Matrix2cd u = qubit_rotation(theta, phi);
  detail::two_sided_apply(state.rho, [&](Complex* col) {
    detail::apply_qubit_gate(col, dims, u);
  });
}

void apply_ecd(HybridDensityMatrix& state, int mode, Complex beta) {
  detail::FlatDims dims(state.layout);
  const Eigen::MatrixXcd d_plus =
      displacement_matrix(beta / 2.0, state.layout.cutoffs().at(mode));
  const Eigen::MatrixXcd d_minus = d_plus.adjoint();
  detail::two_sided_apply(state.rho, [&](Complex* col) {
    detail::apply_conditional_displacement(col, dims, mode, d_plus, d_minus);
  });
}

HybridPureState run_ansatz(const AnsatzParameters& params,
                           const ModeLayout& layout) {
  if (params.num_modes() != layout.num_modes())
    throw std::invalid_argument("parameter and layout mode counts differ");
  HybridPureState state = HybridPureState::vacuum(layout);
  for (int block = 0; block < params.depth(); ++block)
    for (int mode = 0; mode < params.num_modes(); ++mode) {
      const auto& p = params.at(block, mode);
      apply_rotation(state, p.theta, p.phi);
      apply_ecd(state, mode, p.beta());
    }
  return state;
}

namespace {

MeasurementHistogram histogram_from_probabilities(const ModeLayout& layout,
                                                  const Eigen::VectorXd& probs) {
  MeasurementHistogram hist(layout);
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    // Clamp the tiny negatives a density-matrix diagonal can pick up.
    const double p = probs(i) < 0.0 ? 0.0 : probs(i);
    if (p > 0.0) hist.add_flat(static_cast<std::uint64_t>(i), p);
  }
  return hist;
}

MeasurementHistogram sample_from_probabilities(const ModeLayout& layout,
                                               Eigen::VectorXd probs,
                                               int shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  probs = probs.cwiseMax(0.0);
  const double total = probs.sum();
  if (total <= 0.0) throw std::invalid_argument("state has no probability mass");
  std::vector<double> cumulative(static_cast<std::size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    acc += probs(i) / total;
    cumulative[static_cast<std::size_t>(i)] = acc;
  }
  cumulative.back() = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> counts(cumulative.size(), 0);
  for (int s = 0; s < shots; ++s) {
    const double u = uniform_double(rng);
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  MeasurementHistogram hist(layout);
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0)
      hist.add_flat(i, static_cast<double>(counts[i]) / shots);
  return hist;
}

}  // namespace

MeasurementHistogram exact_probabilities(const HybridPureState& state) {
  return histogram_from_probabilities(state.layout,
                                      state.amplitudes.cwiseAbs2());
}

MeasurementHistogram exact_probabilities(const HybridDensityMatrix& state) {
  return histogram_from_probabilities(state.layout,
                                      state.rho.diagonal().real());
}

MeasurementHistogram sample_histogram(const HybridPureState& state, int shots,
                                      std::uint64_t seed) {
  return sample_from_probabilities(state.layout, state.amplitudes.cwiseAbs2(),
                                   shots, seed);
}

MeasurementHistogram sample_histogram(const HybridDensityMatrix& state,
                                      int shots, std::uint64_t seed) {
  return sample_from_probabilities(state.layout, state.rho.diagonal().real(),
                                   shots, seed);
}

}  // namespace ecdvqe
