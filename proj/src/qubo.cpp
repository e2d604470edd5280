#include "ecdvqe/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace ecdvqe {

std::uint64_t bits_to_index(const std::vector<int>& bits) {
  std::uint64_t idx = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bit must be 0 or 1");
    idx = (idx << 1) | static_cast<std::uint64_t>(b);
  }
  return idx;
}

std::vector<int> index_to_bits(std::uint64_t index, int num_bits) {
  if (num_bits < 0 || num_bits > 63)
    throw std::invalid_argument("num_bits out of range");
  if (num_bits < 64 && (index >> num_bits) != 0)
    throw std::invalid_argument("index does not fit in num_bits");
  std::vector<int> bits(num_bits);
  for (int i = 0; i < num_bits; ++i)
    bits[i] = static_cast<int>((index >> (num_bits - 1 - i)) & 1u);
  return bits;
}

namespace {

double linear_form(const std::vector<std::pair<int, double>>& coeffs,
                   const std::vector<int>& bits) {
  double v = 0.0;
  for (const auto& [i, c] : coeffs) {
    if (i < 0 || i >= static_cast<int>(bits.size()))
      throw std::out_of_range("variable index outside bitstring");
    v += c * bits[i];
  }
  return v;
}

int bits_for_range(double range) {
  if (range <= 0.0) return 0;
  int w = 0;
  // smallest w with 2^w - 1 >= range (integer ranges in practice)
  while (std::ldexp(1.0, w) - 1.0 < range - 1e-9) ++w;
  return w;
}

}  // namespace

int LinearConstraint::default_slack_bits() const {
  if (relation == Relation::Equal) return 0;
  double pos = 0.0, neg = 0.0;
  for (const auto& [i, c] : coeffs) {
    (void)i;
    if (c > 0)
      pos += c;
    else
      neg += c;
  }
  // Achievable residual range of the satisfied side of the inequality.
  double range = (relation == Relation::LessEq) ? rhs - neg : pos - rhs;
  return bits_for_range(range);
}

int LinearConstraint::effective_slack_bits() const {
  if (relation == Relation::Equal) return 0;
  if (slack_bits) {
    if (*slack_bits < 0) throw std::invalid_argument("slack_bits must be >= 0");
    return *slack_bits;
  }
  return default_slack_bits();
}

double LinearConstraint::lhs_value(const std::vector<int>& bits) const {
  return linear_form(coeffs, bits);
}

bool LinearConstraint::satisfied(const std::vector<int>& bits,
                                 double tol) const {
  double lhs = lhs_value(bits);
  switch (relation) {
    case Relation::LessEq:
      return lhs <= rhs + tol;
    case Relation::Equal:
      return std::abs(lhs - rhs) <= tol;
    case Relation::GreaterEq:
      return lhs >= rhs - tol;
  }
  return false;
}

void BinaryProblem::validate() const {
  if (num_variables <= 0)
    throw std::invalid_argument("problem must have at least one variable");
  auto check_vars = [&](const std::vector<std::pair<int, double>>& terms,
                        const char* where) {
    std::set<int> seen;
    for (const auto& [i, c] : terms) {
      (void)c;
      if (i < 0 || i >= num_variables)
        throw std::invalid_argument(std::string(where) +
                                    ": variable index out of range");
      if (!seen.insert(i).second)
        throw std::invalid_argument(std::string(where) +
                                    ": duplicate variable index");
    }
  };
  check_vars(objective, "objective");
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    const auto& con = constraints[k];
    check_vars(con.coeffs, "constraint");
    if (con.coeffs.empty())
      throw std::invalid_argument("constraint has no variables");
    if (!(con.lambda > 0.0))
      throw std::invalid_argument("constraint penalty weight must be > 0");
    con.effective_slack_bits();  // validates an explicit override
  }
}

double BinaryProblem::objective_value(const std::vector<int>& bits) const {
  return linear_form(objective, bits);
}

bool BinaryProblem::feasible(const std::vector<int>& bits, double tol) const {
  for (const auto& con : constraints)
    if (!con.satisfied(bits, tol)) return false;
  return true;
}

int BinaryProblem::total_variables() const {
  int n = num_variables;
  for (const auto& con : constraints) n += con.effective_slack_bits();
  return n;
}

std::vector<std::pair<int, int>> slack_spans(const BinaryProblem& problem) {
  std::vector<std::pair<int, int>> spans;
  int next = problem.num_variables;
  for (const auto& con : problem.constraints) {
    int w = con.effective_slack_bits();
    spans.emplace_back(next, w);
    next += w;
  }
  return spans;
}

BinaryProblem build_knapsack(const std::vector<double>& values,
                             const std::vector<double>& weights,
                             double capacity, double lambda) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("values and weights must match and be nonempty");
  BinaryProblem p;
  p.sense = Sense::Maximize;
  p.num_variables = static_cast<int>(values.size());
  LinearConstraint con;
  con.relation = Relation::LessEq;
  con.rhs = capacity;
  con.lambda = lambda;
  for (int i = 0; i < p.num_variables; ++i) {
    p.objective.emplace_back(i, values[i]);
    con.coeffs.emplace_back(i, weights[i]);
  }
  p.constraints.push_back(std::move(con));
  p.validate();
  return p;
}

BinaryPolynomial::BinaryPolynomial(int num_variables)
    : num_variables_(num_variables) {
  if (num_variables <= 0)
    throw std::invalid_argument("polynomial needs at least one variable");
}

void BinaryPolynomial::check_index(int i) const {
  if (i < 0 || i >= num_variables_)
    throw std::out_of_range("variable index out of range");
}

void BinaryPolynomial::add_constant(double c) { constant_ += c; }

void BinaryPolynomial::add_linear(int i, double c) {
  check_index(i);
  double& v = linear_[i];
  v += c;
  if (v == 0.0) linear_.erase(i);
}

void BinaryPolynomial::add_quadratic(int i, int j, double c) {
  check_index(i);
  check_index(j);
  if (i == j) {  // x_i^2 = x_i
    add_linear(i, c);
    return;
  }
  auto key = std::minmax(i, j);
  double& v = quadratic_[{key.first, key.second}];
  v += c;
  if (v == 0.0) quadratic_.erase({key.first, key.second});
}

void BinaryPolynomial::add_squared_affine(
    double weight, double offset,
    const std::vector<std::pair<int, double>>& coeffs) {
  add_constant(weight * offset * offset);
  for (std::size_t a = 0; a < coeffs.size(); ++a) {
    const auto& [i, ci] = coeffs[a];
    add_linear(i, weight * (2.0 * offset * ci + ci * ci));  // cross + square
    for (std::size_t b = a + 1; b < coeffs.size(); ++b) {
      const auto& [j, cj] = coeffs[b];
      add_quadratic(i, j, weight * 2.0 * ci * cj);
    }
  }
}

double BinaryPolynomial::evaluate(const std::vector<int>& bits) const {
  if (static_cast<int>(bits.size()) != num_variables_)
    throw std::invalid_argument("bitstring length mismatch");
  double v = constant_;
  for (const auto& [i, c] : linear_) v += c * bits[i];
  for (const auto& [ij, c] : quadratic_) v += c * bits[ij.first] * bits[ij.second];
  return v;
}

PauliZHamiltonian::PauliZHamiltonian(int num_qubits, std::vector<ZTerm> terms)
    : num_qubits_(num_qubits) {
  if (num_qubits <= 0)
    throw std::invalid_argument("Hamiltonian needs at least one qubit");
  std::map<std::vector<int>, double> merged;
  for (auto& t : terms) {
    std::sort(t.qubits.begin(), t.qubits.end());
    if (std::adjacent_find(t.qubits.begin(), t.qubits.end()) != t.qubits.end())
      throw std::invalid_argument("repeated qubit in Z term");
    for (int q : t.qubits)
      if (q < 0 || q >= num_qubits)
        throw std::invalid_argument("qubit index out of range");
    merged[t.qubits] += t.coef;
  }
  for (auto& [qs, g] : merged)
    if (g != 0.0) terms_.push_back({g, qs});
}

double PauliZHamiltonian::constant_term() const {
  if (!terms_.empty() && terms_.front().qubits.empty())
    return terms_.front().coef;
  return 0.0;
}

double PauliZHamiltonian::coefficient(std::vector<int> qubits) const {
  std::sort(qubits.begin(), qubits.end());
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), qubits,
      [](const ZTerm& t, const std::vector<int>& q) { return t.qubits < q; });
  if (it != terms_.end() && it->qubits == qubits) return it->coef;
  return 0.0;
}

BinaryPolynomial to_unconstrained(const BinaryProblem& problem) {
  problem.validate();
  BinaryPolynomial poly(problem.total_variables());
  double sign = (problem.sense == Sense::Maximize) ? -1.0 : 1.0;
  for (const auto& [i, c] : problem.objective) poly.add_linear(i, sign * c);

  auto spans = slack_spans(problem);
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& con = problem.constraints[k];
    auto [start, width] = spans[k];
    std::vector<std::pair<int, double>> affine;
    double offset = 0.0;
    switch (con.relation) {
      case Relation::LessEq:  // rhs - lhs - sum 2^j y_j
        offset = con.rhs;
        for (const auto& [i, c] : con.coeffs) affine.emplace_back(i, -c);
        for (int j = 0; j < width; ++j)
          affine.emplace_back(start + j, -std::ldexp(1.0, j));
        break;
      case Relation::GreaterEq:  // lhs - sum 2^j y_j - rhs
        offset = -con.rhs;
        for (const auto& [i, c] : con.coeffs) affine.emplace_back(i, c);
        for (int j = 0; j < width; ++j)
          affine.emplace_back(start + j, -std::ldexp(1.0, j));
        break;
      case Relation::Equal:  // lhs - rhs
        offset = -con.rhs;
        for (const auto& [i, c] : con.coeffs) affine.emplace_back(i, c);
        break;
    }
    poly.add_squared_affine(con.lambda, offset, affine);
  }
  return poly;
}

PauliZHamiltonian to_pauli_hamiltonian(const BinaryPolynomial& poly) {
  // x_i = (I - Z_i)/2, x_i x_j = (I - Z_i - Z_j + Z_i Z_j)/4
  std::map<std::vector<int>, double> acc;
  acc[{}] = poly.constant();
  for (const auto& [i, c] : poly.linear()) {
    acc[{}] += c / 2.0;
    acc[{i}] -= c / 2.0;
  }
  for (const auto& [ij, c] : poly.quadratic()) {
    auto [i, j] = ij;
    acc[{}] += c / 4.0;
    acc[{i}] -= c / 4.0;
    acc[{j}] -= c / 4.0;
    acc[{i, j}] += c / 4.0;
  }
  std::vector<ZTerm> terms;
  for (const auto& [qs, g] : acc)
    if (g != 0.0) terms.push_back({g, qs});
  return PauliZHamiltonian(poly.num_variables(), std::move(terms));
}

double evaluate_bitstring(const PauliZHamiltonian& h,
                          const std::vector<int>& bits) {
  if (static_cast<int>(bits.size()) != h.num_qubits())
    throw std::invalid_argument("bitstring length mismatch");
  double e = 0.0;
  for (const auto& t : h.terms()) {
    int parity = 0;
    for (int q : t.qubits) parity ^= bits[q];
    e += parity ? -t.coef : t.coef;
  }
  return e;
}

std::pair<std::vector<int>, double> exact_ground_state(
    const PauliZHamiltonian& h) {
  const int n = h.num_qubits();
  if (n > 24)
    throw SizeGuardError("exhaustive enumeration limited to 24 variables");
  // Bit masks in index space (bit 0 of the string is the most significant).
  std::vector<std::uint64_t> masks;
  std::vector<double> coefs;
  double constant = 0.0;
  for (const auto& t : h.terms()) {
    if (t.qubits.empty()) {
      constant += t.coef;
      continue;
    }
    std::uint64_t m = 0;
    for (int q : t.qubits) m |= std::uint64_t{1} << (n - 1 - q);
    masks.push_back(m);
    coefs.push_back(t.coef);
  }
  std::uint64_t best_idx = 0;
  double best = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    double e = constant;
    for (std::size_t t = 0; t < masks.size(); ++t)
      e += (std::popcount(idx & masks[t]) & 1) ? -coefs[t] : coefs[t];
    if (idx == 0 || e < best) {  // strict < keeps the lexicographically first
      best = e;
      best_idx = idx;
    }
  }
  return {index_to_bits(best_idx, n), best};
}

}  // namespace ecdvqe
