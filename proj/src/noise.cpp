#include "ecdvqe/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "kernels.hpp"

namespace ecdvqe {

KrausSet::KrausSet(double kappa_tau, int cutoff,
                   std::vector<Eigen::VectorXd> diagonals)
    : kappa_tau_(kappa_tau), cutoff_(cutoff), diagonals_(std::move(diagonals)) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  if (diagonals_.empty() || static_cast<int>(diagonals_.size()) > cutoff)
    throw std::invalid_argument("need 1..cutoff Kraus operators");
  for (std::size_t j = 0; j < diagonals_.size(); ++j)
    if (diagonals_[j].size() != cutoff - static_cast<int>(j))
      throw std::invalid_argument("superdiagonal length mismatch");
}

Eigen::MatrixXd KrausSet::matrix(int j) const {
  const Eigen::VectorXd& d = diagonals_.at(j);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(cutoff_, cutoff_);
  for (Eigen::Index n = 0; n < d.size(); ++n) k(n, n + j) = d(n);
  return k;
}

double KrausSet::completeness_defect() const {
  // sum_j K_j^dag K_j is diagonal; entry m collects j with m - j >= 0.
  double worst = 0.0;
  for (int m = 0; m < cutoff_; ++m) {
    double s = 0.0;
    for (int j = 0; j < count() && j <= m; ++j) {
      const double e = diagonals_[j](m - j);
      s += e * e;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

KrausSet kraus_amplitude_damping(double kappa_tau, int cutoff) {
  if (kappa_tau < 0.0) throw std::invalid_argument("kappa_tau must be >= 0");
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const double gamma = 1.0 - std::exp(-kappa_tau);
  std::vector<Eigen::VectorXd> diagonals(static_cast<std::size_t>(cutoff));

  // j >= 1: <n-j|K_j|n> = sqrt(gamma^j / j!) e^{-kappa tau (n-j)/2}
  //                       sqrt(n!/(n-j)!); written with m = n - j.
  for (int j = 1; j < cutoff; ++j) {
    Eigen::VectorXd d(cutoff - j);
    for (int m = 0; m + j < cutoff; ++m) {
      double falling = 1.0;  // (m+j)! / m!
      for (int t = m + 1; t <= m + j; ++t) falling *= t;
      double log_fact_j = std::lgamma(double(j) + 1.0);
      d(m) = std::sqrt(std::pow(gamma, j) * falling / std::exp(log_fact_j)) *
             std::exp(-kappa_tau * m / 2.0);
    }
    diagonals[static_cast<std::size_t>(j)] = d;
  }

  // K_0: square root of the diagonal residual I - sum_{j>=1} K_j^dag K_j,
  // which keeps the set exactly complete despite the Fock truncation.
  Eigen::VectorXd d0(cutoff);
  for (int n = 0; n < cutoff; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n && j < cutoff; ++j) {
      const double e = diagonals[static_cast<std::size_t>(j)](n - j);
      s += e * e;
    }
    d0(n) = std::sqrt(std::max(0.0, 1.0 - s));
  }
  diagonals[0] = d0;
  return KrausSet(kappa_tau, cutoff, std::move(diagonals));
}

void apply_channel(HybridDensityMatrix& state, int mode,
                   const KrausSet& kraus) {
  if (mode < 0 || mode >= state.layout.num_modes())
    throw std::out_of_range("mode index out of range");
  if (kraus.cutoff() != state.layout.cutoffs()[mode])
    throw std::invalid_argument("Kraus cutoff does not match the mode");
  const detail::FlatDims dims(state.layout);
  const auto L = static_cast<std::size_t>(dims.cutoffs[mode]);
  const std::size_t s = dims.stride[mode];
  const std::size_t outer_count = dims.total / L;

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(state.rho.rows(), state.rho.cols());
  Eigen::MatrixXcd tmp(state.rho.rows(), state.rho.cols());
  for (int j = 0; j < kraus.count(); ++j) {
    const Eigen::VectorXd& d = kraus.diagonal(j);
    tmp = state.rho;
    // Left factor K_j, column by column.
    for (Eigen::Index c = 0; c < tmp.cols(); ++c)
      detail::apply_mode_superdiagonal(tmp.col(c).data(), dims, mode, j, d);
    // Right factor K_j^dag: column c of (A K_j^dag) is d(m) * A.col(c + j*s)
    // where m is the mode occupation encoded in column index c.
    const std::size_t keep = L - static_cast<std::size_t>(j);
    for (std::size_t outer = 0; outer < outer_count; ++outer) {
      const std::size_t base = dims.slice_base(mode, outer);
      for (std::size_t m = 0; m < keep; ++m)
        acc.col(static_cast<Eigen::Index>(base + m * s)) +=
            d(static_cast<Eigen::Index>(m)) *
            tmp.col(static_cast<Eigen::Index>(base + (m + j) * s));
    }
  }
  state.rho.swap(acc);
}

void apply_channel_multimode(HybridDensityMatrix& state,
                             const NoiseConfig& noise) {
  if (noise.kappa_tau < 0.0)
    throw std::invalid_argument("kappa_tau must be >= 0");
  if (!noise.enabled()) return;
  for (int mode = 0; mode < state.layout.num_modes(); ++mode)
    apply_channel(state, mode,
                  kraus_amplitude_damping(noise.kappa_tau,
                                          state.layout.cutoffs()[mode]));
}

HybridDensityMatrix evolve_noisy(const AnsatzParameters& params,
                                 const ModeLayout& layout,
                                 const NoiseConfig& noise) {
  if (params.num_modes() != layout.num_modes())
    throw std::invalid_argument("parameter and layout mode counts differ");
  // Kraus sets depend only on the cutoff; build one per distinct mode once.
  std::vector<KrausSet> kraus;
  kraus.reserve(static_cast<std::size_t>(layout.num_modes()));
  for (int mode = 0; mode < layout.num_modes(); ++mode)
    kraus.push_back(
        kraus_amplitude_damping(noise.kappa_tau, layout.cutoffs()[mode]));

  HybridDensityMatrix state = HybridDensityMatrix::vacuum(layout);
  for (int block = 0; block < params.depth(); ++block) {
    for (int mode = 0; mode < params.num_modes(); ++mode) {
      const auto& p = params.at(block, mode);
      apply_rotation(state, p.theta, p.phi);
      apply_ecd(state, mode, p.beta());
    }
    if (noise.enabled())  // photon loss after every block, the last included
      for (int mode = 0; mode < layout.num_modes(); ++mode)
        apply_channel(state, mode, kraus[static_cast<std::size_t>(mode)]);
  }
  return state;
}

}  // namespace ecdvqe
