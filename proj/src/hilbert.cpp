#include "ecdvqe/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace ecdvqe {

namespace {

int log2_exact(int value) {
  if (value < 2 || (value & (value - 1)) != 0)
    throw std::invalid_argument("cutoff must be a power of two >= 2");
  return std::bit_width(static_cast<unsigned>(value)) - 1;
}

}  // namespace

ModeLayout ModeLayout::create(int num_qubits, const std::vector<int>& cutoffs) {
  if (cutoffs.empty())
    throw std::invalid_argument("layout needs at least one qumode");
  ModeLayout layout;
  layout.num_qubits_ = num_qubits;
  layout.cutoffs_ = cutoffs;
  layout.dimension_ = 2;
  int slot = 1;  // slot 0 is the physical qubit
  for (int L : cutoffs) {
    int width = log2_exact(L);
    layout.group_start_.push_back(slot);
    layout.group_size_.push_back(width);
    slot += width;
    layout.dimension_ *= static_cast<std::uint64_t>(L);
  }
  if (slot != num_qubits)
    throw std::invalid_argument(
        "cutoffs encode " + std::to_string(slot) + " qubits, expected " +
        std::to_string(num_qubits));
  if (num_qubits > 62)
    throw SizeGuardError("layout exceeds 62 logical qubits");
  return layout;
}

BasisOutcome ModeLayout::encode(const std::vector<int>& bits) const {
  if (static_cast<int>(bits.size()) != num_qubits_)
    throw std::invalid_argument("bitstring length mismatch");
  BasisOutcome out;
  out.qubit = bits[0];
  if (out.qubit != 0 && out.qubit != 1)
    throw std::invalid_argument("bit must be 0 or 1");
  for (int k = 0; k < num_modes(); ++k) {
    int n = 0;  // first slot of the group is the most significant bit
    for (int s = 0; s < group_size_[k]; ++s) {
      int b = bits[group_start_[k] + s];
      if (b != 0 && b != 1) throw std::invalid_argument("bit must be 0 or 1");
      n = (n << 1) | b;
    }
    out.occupations.push_back(n);
  }
  return out;
}

std::vector<int> ModeLayout::decode(const BasisOutcome& outcome) const {
  if (static_cast<int>(outcome.occupations.size()) != num_modes())
    throw std::invalid_argument("occupation count mismatch");
  if (outcome.qubit != 0 && outcome.qubit != 1)
    throw std::invalid_argument("qubit outcome must be 0 or 1");
  std::vector<int> bits(num_qubits_);
  bits[0] = outcome.qubit;
  for (int k = 0; k < num_modes(); ++k) {
    int n = outcome.occupations[k];
    if (n < 0 || n >= cutoffs_[k])
      throw std::out_of_range("occupation exceeds cutoff");
    for (int s = 0; s < group_size_[k]; ++s)
      bits[group_start_[k] + s] = (n >> (group_size_[k] - 1 - s)) & 1;
  }
  return bits;
}

std::uint64_t ModeLayout::outcome_to_flat(const BasisOutcome& outcome) const {
  if (static_cast<int>(outcome.occupations.size()) != num_modes())
    throw std::invalid_argument("occupation count mismatch");
  if (outcome.qubit != 0 && outcome.qubit != 1)
    throw std::invalid_argument("qubit outcome must be 0 or 1");
  std::uint64_t idx = outcome.qubit;
  for (int k = 0; k < num_modes(); ++k) {
    int n = outcome.occupations[k];
    if (n < 0 || n >= cutoffs_[k])
      throw std::out_of_range("occupation exceeds cutoff");
    idx = idx * static_cast<std::uint64_t>(cutoffs_[k]) +
          static_cast<std::uint64_t>(n);
  }
  return idx;
}

BasisOutcome ModeLayout::flat_to_outcome(std::uint64_t index) const {
  if (index >= dimension_) throw std::out_of_range("flat index out of range");
  BasisOutcome out;
  out.occupations.resize(num_modes());
  for (int k = num_modes() - 1; k >= 0; --k) {
    auto L = static_cast<std::uint64_t>(cutoffs_[k]);
    out.occupations[k] = static_cast<int>(index % L);
    index /= L;
  }
  out.qubit = static_cast<int>(index);
  return out;
}

std::vector<int> suggested_cutoffs(int num_qubits) {
  if (num_qubits < 3)
    throw std::invalid_argument("two-mode layout needs at least 3 qubits");
  int low = (num_qubits - 1) / 2;
  return {1 << low, 1 << (num_qubits - 1 - low)};
}

MeasurementHistogram::MeasurementHistogram(ModeLayout layout)
    : layout_(std::move(layout)) {}

void MeasurementHistogram::add(const BasisOutcome& outcome, double mass) {
  add_flat(layout_.outcome_to_flat(outcome), mass);
}

void MeasurementHistogram::add_flat(std::uint64_t index, double mass) {
  if (index >= layout_.dimension())
    throw std::out_of_range("flat index out of range");
  if (mass < 0.0) throw std::invalid_argument("mass must be nonnegative");
  if (mass == 0.0) return;
  entries_[index] += mass;
  mass_ += mass;
}

double MeasurementHistogram::probability(const BasisOutcome& outcome) const {
  auto it = entries_.find(layout_.outcome_to_flat(outcome));
  return it == entries_.end() ? 0.0 : it->second;
}

std::pair<BasisOutcome, double> MeasurementHistogram::argmax() const {
  if (entries_.empty()) throw std::logic_error("histogram is empty");
  std::uint64_t best_idx = 0;
  double best = -1.0;
  for (const auto& [idx, p] : entries_) {
    if (p > best) {  // map iterates in ascending flat order: first wins ties
      best = p;
      best_idx = idx;
    }
  }
  return {layout_.flat_to_outcome(best_idx), best};
}

double expectation_from_histogram(const PauliZHamiltonian& h,
                                  const MeasurementHistogram& histogram) {
  const ModeLayout& layout = histogram.layout();
  if (layout.num_qubits() != h.num_qubits())
    throw std::invalid_argument("layout and Hamiltonian disagree on qubits");
  double e = 0.0;
  for (const auto& [idx, p] : histogram.entries())
    e += p * evaluate_bitstring(h, index_to_bits(idx, layout.num_qubits()));
  return e;
}

ProjectorHamiltonian::ProjectorHamiltonian(
    ModeLayout layout, std::vector<Eigen::VectorXd> single_tables,
    std::map<std::pair<int, int>, Eigen::MatrixXd> pair_tables)
    : layout_(std::move(layout)),
      single_tables_(std::move(single_tables)),
      pair_tables_(std::move(pair_tables)) {}

double ProjectorHamiltonian::evaluate(const BasisOutcome& outcome) const {
  layout_.outcome_to_flat(outcome);  // validates ranges
  // Subsystem values: qubit first, then mode occupations.
  std::vector<int> vals;
  vals.push_back(outcome.qubit);
  for (int n : outcome.occupations) vals.push_back(n);
  double e = 0.0;
  for (std::size_t s = 0; s < single_tables_.size(); ++s)
    e += single_tables_[s](vals[s]);
  for (const auto& [ij, table] : pair_tables_)
    e += table(vals[ij.first], vals[ij.second]);
  return e;
}

ProjectorHamiltonian project_hamiltonian(const PauliZHamiltonian& h,
                                         const ModeLayout& layout) {
  if (layout.num_qubits() != h.num_qubits())
    throw std::invalid_argument("layout and Hamiltonian disagree on qubits");
  const int R = layout.num_modes();
  // subsystem of each slot and bit position of the slot inside its subsystem
  std::vector<int> subsystem(layout.num_qubits());
  std::vector<int> shift(layout.num_qubits());
  subsystem[0] = 0;
  shift[0] = 0;
  for (int k = 0; k < R; ++k)
    for (int s = 0; s < layout.group_size(k); ++s) {
      int slot = layout.group_start(k) + s;
      subsystem[slot] = k + 1;
      shift[slot] = layout.group_size(k) - 1 - s;  // first slot most significant
    }

  std::vector<int> dims{2};
  for (int L : layout.cutoffs()) dims.push_back(L);

  std::vector<Eigen::VectorXd> singles;
  for (int d : dims) singles.push_back(Eigen::VectorXd::Zero(d));
  std::map<std::pair<int, int>, Eigen::MatrixXd> pairs;

  // Z eigenvalue of subsystem value v for the slots of the word inside it.
  auto sign_in = [&](const std::vector<int>& slots, int v) {
    int parity = 0;
    for (int slot : slots) parity ^= (v >> shift[slot]) & 1;
    return parity ? -1.0 : 1.0;
  };

  for (const auto& term : h.terms()) {
    std::map<int, std::vector<int>> by_subsystem;
    for (int q : term.qubits) by_subsystem[subsystem[q]].push_back(q);
    if (by_subsystem.size() > 2)
      throw std::invalid_argument(
          "Z term spans more than two subsystems; no projector form");
    if (by_subsystem.empty()) {
      singles[0].array() += term.coef;  // identity folded into the qubit table
    } else if (by_subsystem.size() == 1) {
      auto& [s, slots] = *by_subsystem.begin();
      for (int v = 0; v < dims[s]; ++v)
        singles[s](v) += term.coef * sign_in(slots, v);
    } else {
      auto it = by_subsystem.begin();
      auto& [si, slots_i] = *it;
      auto& [sj, slots_j] = *std::next(it);
      auto& table = pairs.try_emplace({si, sj},
                                      Eigen::MatrixXd::Zero(dims[si], dims[sj]))
                        .first->second;
      for (int vi = 0; vi < dims[si]; ++vi)
        for (int vj = 0; vj < dims[sj]; ++vj)
          table(vi, vj) +=
              term.coef * sign_in(slots_i, vi) * sign_in(slots_j, vj);
    }
  }
  return ProjectorHamiltonian(layout, std::move(singles), std::move(pairs));
}

SlackNumberForm::SlackNumberForm(ModeLayout layout,
                                 BinaryPolynomial primary_part,
                                 std::vector<InequalityTerm> inequalities)
    : layout_(std::move(layout)),
      primary_part_(std::move(primary_part)),
      inequalities_(std::move(inequalities)) {}

double SlackNumberForm::slack_value(int inequality, int occupation) const {
  const auto& ineq = inequalities_.at(inequality);
  const int width = static_cast<int>(ineq.slot_weights.size());
  if (occupation < 0 || occupation >= (1 << width))
    throw std::out_of_range("occupation exceeds cutoff");
  double b = 0.0;  // first slot of the group holds the most significant bit
  for (int s = 0; s < width; ++s)
    b += ineq.slot_weights[s] * ((occupation >> (width - 1 - s)) & 1);
  return b;
}

double SlackNumberForm::evaluate(const BasisOutcome& outcome) const {
  std::vector<int> bits = layout_.decode(outcome);
  bits.resize(primary_part_.num_variables());
  std::vector<double> slack;
  slack.reserve(inequalities_.size());
  for (std::size_t c = 0; c < inequalities_.size(); ++c)
    slack.push_back(slack_value(static_cast<int>(c),
                                outcome.occupations[inequalities_[c].mode]));
  return evaluate_with_slack_values(bits, slack);
}

double SlackNumberForm::evaluate_with_slack_values(
    const std::vector<int>& primary_bits,
    const std::vector<double>& slack_values) const {
  if (slack_values.size() != inequalities_.size())
    throw std::invalid_argument("one slack value per inequality required");
  double e = primary_part_.evaluate(primary_bits);
  for (std::size_t c = 0; c < inequalities_.size(); ++c) {
    const auto& ineq = inequalities_[c];
    double residual = ineq.offset;
    for (const auto& [i, coef] : ineq.coeffs) residual += coef * primary_bits[i];
    double d = residual - slack_values[c];
    e += ineq.lambda * d * d;
  }
  return e;
}

SlackNumberForm slack_number_hamiltonian(const BinaryProblem& problem,
                                         const ModeLayout& layout) {
  if (layout.num_qubits() != problem.total_variables())
    throw std::invalid_argument("layout size does not match reduced problem");

  // Objective plus equality penalties over the primary variables only.
  BinaryPolynomial primary(problem.num_variables);
  double sign = (problem.sense == Sense::Maximize) ? -1.0 : 1.0;
  for (const auto& [i, c] : problem.objective) primary.add_linear(i, sign * c);

  auto spans = slack_spans(problem);
  std::vector<SlackNumberForm::InequalityTerm> inequalities;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& con = problem.constraints[k];
    if (con.relation == Relation::Equal) {
      std::vector<std::pair<int, double>> affine = con.coeffs;
      primary.add_squared_affine(con.lambda, -con.rhs, affine);
      continue;
    }
    auto [start, width] = spans[k];
    if (width == 0) {  // no slack bits: behaves like an equality penalty
      std::vector<std::pair<int, double>> affine = con.coeffs;
      if (con.relation == Relation::LessEq)
        for (auto& [i, c] : affine) c = -c;
      primary.add_squared_affine(
          con.lambda, con.relation == Relation::LessEq ? con.rhs : -con.rhs,
          affine);
      continue;
    }
    // The span must coincide with one full qumode group.
    int mode = -1;
    for (int m = 0; m < layout.num_modes(); ++m)
      if (layout.group_start(m) == start && layout.group_size(m) == width)
        mode = m;
    if (mode < 0)
      throw std::invalid_argument(
          "slack bits of a constraint are split across groups or share a "
          "group; give each inequality a qumode of cutoff 2^(slack bits)");

    SlackNumberForm::InequalityTerm ineq;
    ineq.lambda = con.lambda;
    ineq.mode = mode;
    if (con.relation == Relation::LessEq) {
      ineq.offset = con.rhs;
      for (const auto& [i, c] : con.coeffs) ineq.coeffs.emplace_back(i, -c);
    } else {
      ineq.offset = -con.rhs;
      ineq.coeffs = con.coeffs;
    }
    // Binary weight 2^j of slack bit j, stored per group slot.
    ineq.slot_weights.resize(width);
    for (int j = 0; j < width; ++j) ineq.slot_weights[j] = std::ldexp(1.0, j);
    inequalities.push_back(std::move(ineq));
  }
  return SlackNumberForm(layout, std::move(primary), std::move(inequalities));
}

}  // namespace ecdvqe
