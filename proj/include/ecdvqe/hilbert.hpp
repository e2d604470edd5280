#pragma once

// Mapping between N logical qubits and one physical qubit plus R qumodes
// with power-of-two Fock cutoffs, and Hamiltonian representations that act
// directly on measurement outcomes of the hybrid register.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ecdvqe/qubo.hpp"

namespace ecdvqe {

// A joint measurement outcome: qubit bit plus one Fock occupation per mode.
struct BasisOutcome {
  int qubit = 0;
  std::vector<int> occupations;

  friend bool operator==(const BasisOutcome& a, const BasisOutcome& b) {
    return a.qubit == b.qubit && a.occupations == b.occupations;
  }
};

// Slot assignment of N logical qubits onto the hybrid register. Slot 0 is the
// physical qubit; the remaining slots form one contiguous group per qumode,
// with the first slot of a group the most significant bit of its occupation.
class ModeLayout {
 public:
  static ModeLayout create(int num_qubits, const std::vector<int>& cutoffs);

  int num_qubits() const { return num_qubits_; }
  int num_modes() const { return static_cast<int>(cutoffs_.size()); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::uint64_t dimension() const { return dimension_; }  // 2 * prod cutoffs
  int group_start(int mode) const { return group_start_[mode]; }
  int group_size(int mode) const { return group_size_[mode]; }

  BasisOutcome encode(const std::vector<int>& bits) const;
  std::vector<int> decode(const BasisOutcome& outcome) const;

  // Flat basis index with the qubit slowest and modes in order; this equals
  // the big-endian integer of the decoded bitstring, so ascending flat order
  // is lexicographic bitstring order.
  std::uint64_t outcome_to_flat(const BasisOutcome& outcome) const;
  BasisOutcome flat_to_outcome(std::uint64_t index) const;

  friend bool operator==(const ModeLayout& a, const ModeLayout& b) {
    return a.num_qubits_ == b.num_qubits_ && a.cutoffs_ == b.cutoffs_;
  }

 private:
  ModeLayout() = default;

  int num_qubits_ = 0;
  std::vector<int> cutoffs_;
  std::vector<int> group_start_;
  std::vector<int> group_size_;
  std::uint64_t dimension_ = 0;
};

// Balanced two-mode cutoff suggestion for an N-qubit problem (N >= 3), with
// the smaller mode first when N - 1 is odd.
std::vector<int> suggested_cutoffs(int num_qubits);

// Sparse probability-mass table over basis outcomes of one layout.
class MeasurementHistogram {
 public:
  explicit MeasurementHistogram(ModeLayout layout);

  const ModeLayout& layout() const { return layout_; }
  void add(const BasisOutcome& outcome, double mass);
  void add_flat(std::uint64_t index, double mass);

  double total_mass() const { return mass_; }
  std::size_t size() const { return entries_.size(); }
  double probability(const BasisOutcome& outcome) const;
  const std::map<std::uint64_t, double>& entries() const { return entries_; }

  // Highest-mass outcome; ties resolve to the lexicographically smallest
  // decoded bitstring (= smallest flat index).
  std::pair<BasisOutcome, double> argmax() const;

 private:
  ModeLayout layout_;
  std::map<std::uint64_t, double> entries_;
  double mass_ = 0.0;
};

// <H> = sum_outcome p(outcome) * E(decoded bitstring); linear in the masses,
// no renormalization.
double expectation_from_histogram(const PauliZHamiltonian& h,
                                  const MeasurementHistogram& histogram);

// Diagonal Hamiltonian rewritten over subsystem occupations: one value table
// per subsystem (qubit = subsystem 0, mode k = subsystem k+1) plus pairwise
// tables for Z-words straddling two subsystems. Words spanning three or more
// subsystems are rejected; Hamiltonians reduced from quadratic binary
// polynomials have at most two slots per word and never trigger this.
class ProjectorHamiltonian {
 public:
  ProjectorHamiltonian(ModeLayout layout,
                       std::vector<Eigen::VectorXd> single_tables,
                       std::map<std::pair<int, int>, Eigen::MatrixXd> pair_tables);

  const ModeLayout& layout() const { return layout_; }
  const std::vector<Eigen::VectorXd>& single_tables() const {
    return single_tables_;
  }
  const std::map<std::pair<int, int>, Eigen::MatrixXd>& pair_tables() const {
    return pair_tables_;
  }

  double evaluate(const BasisOutcome& outcome) const;

 private:
  ModeLayout layout_;
  std::vector<Eigen::VectorXd> single_tables_;  // one per subsystem
  std::map<std::pair<int, int>, Eigen::MatrixXd> pair_tables_;
};

ProjectorHamiltonian project_hamiltonian(const PauliZHamiltonian& h,
                                         const ModeLayout& layout);

// Inequality-penalty energy written against slack numbers instead of slack
// bits: E = objective/equality part of the reduced polynomial evaluated on
// the primary bits, plus lambda * (residual - b)^2 per inequality, where the
// slack number b is read off the occupation of the qumode group holding that
// constraint's slack bits (binary weights follow the slot order of the
// reduction, so b is the plain group occupation only when the weights are
// aligned with the most-significant-first group encoding).
class SlackNumberForm {
 public:
  struct InequalityTerm {
    double lambda = 0.0;
    double offset = 0.0;  // residual = offset + sum_i c_i x_i
    std::vector<std::pair<int, double>> coeffs;
    int mode = 0;                      // qumode group carrying the slack bits
    std::vector<double> slot_weights;  // weight of each group slot in b
  };

  SlackNumberForm(ModeLayout layout, BinaryPolynomial primary_part,
                  std::vector<InequalityTerm> inequalities);

  const ModeLayout& layout() const { return layout_; }
  const BinaryPolynomial& primary_part() const { return primary_part_; }
  const std::vector<InequalityTerm>& inequalities() const {
    return inequalities_;
  }

  // Slack number encoded by a mode occupation under the stored weights.
  double slack_value(int inequality, int occupation) const;
  double evaluate(const BasisOutcome& outcome) const;
  // Direct functional form with the slack numbers supplied explicitly.
  double evaluate_with_slack_values(const std::vector<int>& primary_bits,
                                    const std::vector<double>& slack_values) const;

 private:
  ModeLayout layout_;
  BinaryPolynomial primary_part_;
  std::vector<InequalityTerm> inequalities_;
};

// Requires every inequality's slack bits to occupy exactly one full qumode
// group (cutoff 2^width); throws std::invalid_argument when slack bits are
// split across groups, share a group with other variables, or sit on the
// qubit slot.
SlackNumberForm slack_number_hamiltonian(const BinaryProblem& problem,
                                         const ModeLayout& layout);

}  // namespace ecdvqe
