#pragma once

// Constrained binary optimization problems and their reduction to
// quadratic unconstrained binary form and diagonal Pauli-Z Hamiltonians.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecdvqe {

// Thrown when an operation would exceed its hard size limit
// (exhaustive enumeration, statevector construction).
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, Equal, GreaterEq };

// Big-endian bitstring <-> integer index: bits[0] is the most significant bit,
// so ascending index order equals lexicographic bitstring order.
std::uint64_t bits_to_index(const std::vector<int>& bits);
std::vector<int> index_to_bits(std::uint64_t index, int num_bits);

// One linear constraint sum_i c_i x_i (<= | = | >=) rhs, enforced through a
// quadratic penalty of weight lambda. Inequalities consume ancillary slack
// bits; `slack_bits` overrides the synthesized width when set.
struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
  double lambda = 0.0;
  std::optional<int> slack_bits;

  // Smallest width w with 2^w - 1 >= achievable slack range; 0 for equalities.
  int default_slack_bits() const;
  int effective_slack_bits() const;
  double lhs_value(const std::vector<int>& bits) const;
  bool satisfied(const std::vector<int>& bits, double tol = 1e-9) const;
};

// A linear objective over binary variables plus linear constraints.
struct BinaryProblem {
  Sense sense = Sense::Minimize;
  int num_variables = 0;  // primary variables x_0 .. x_{num_variables-1}
  std::vector<std::pair<int, double>> objective;
  std::vector<LinearConstraint> constraints;

  void validate() const;
  double objective_value(const std::vector<int>& bits) const;
  bool feasible(const std::vector<int>& bits, double tol = 1e-9) const;
  int total_variables() const;  // primary + slack over all constraints
};

// Slack variables are appended after the primary variables in constraint
// order; returns one (first index, width) span per constraint.
std::vector<std::pair<int, int>> slack_spans(const BinaryProblem& problem);

// 0/1 knapsack: maximize sum v_j x_j subject to sum w_j x_j <= capacity.
BinaryProblem build_knapsack(const std::vector<double>& values,
                             const std::vector<double>& weights,
                             double capacity, double lambda);

// Real polynomial of degree <= 2 over binary variables, kept in normal form
// under the idempotence rule x^2 = x: a constant, a linear map, and a
// quadratic map over index pairs i < j. Zero coefficients are dropped.
class BinaryPolynomial {
 public:
  explicit BinaryPolynomial(int num_variables);

  int num_variables() const { return num_variables_; }
  double constant() const { return constant_; }
  const std::map<int, double>& linear() const { return linear_; }
  const std::map<std::pair<int, int>, double>& quadratic() const {
    return quadratic_;
  }

  void add_constant(double c);
  void add_linear(int i, double c);
  void add_quadratic(int i, int j, double c);  // i == j folds into linear
  // Adds weight * (offset + sum_k c_k x_{i_k})^2, fully expanded.
  void add_squared_affine(double weight, double offset,
                          const std::vector<std::pair<int, double>>& coeffs);

  double evaluate(const std::vector<int>& bits) const;

 private:
  void check_index(int i) const;

  int num_variables_ = 0;
  double constant_ = 0.0;
  std::map<int, double> linear_;
  std::map<std::pair<int, int>, double> quadratic_;
};

// One product of Pauli-Z factors with a real coefficient. An empty index set
// denotes the identity term.
struct ZTerm {
  double coef = 0.0;
  std::vector<int> qubits;  // strictly increasing
};

// Diagonal Hamiltonian sum_mu g_mu prod_{q in S_mu} Z_q. Terms are merged,
// sorted by index set, and zero coefficients dropped.
class PauliZHamiltonian {
 public:
  PauliZHamiltonian(int num_qubits, std::vector<ZTerm> terms);

  int num_qubits() const { return num_qubits_; }
  const std::vector<ZTerm>& terms() const { return terms_; }
  double constant_term() const;                       // identity coefficient
  double coefficient(std::vector<int> qubits) const;  // 0 if term absent

 private:
  int num_qubits_ = 0;
  std::vector<ZTerm> terms_;
};

// Penalty reduction: objective (negated when maximizing) plus, per constraint,
//   <=  : lambda * (rhs - lhs - sum_j 2^j y_j)^2
//   >=  : lambda * (lhs - sum_j 2^j y_j - rhs)^2
//   =   : lambda * (lhs - rhs)^2
// with slack bits y appended after the primary variables in constraint order.
BinaryPolynomial to_unconstrained(const BinaryProblem& problem);

// Substitutes x_i = (I - Z_i)/2 and collects Z-words.
PauliZHamiltonian to_pauli_hamiltonian(const BinaryPolynomial& poly);

// Energy of a computational basis state given as a bitstring (x=1 -> Z=-1).
double evaluate_bitstring(const PauliZHamiltonian& h,
                          const std::vector<int>& bits);

// Exhaustive minimization over all 2^N bitstrings (N <= 24). Ties resolve to
// the lexicographically smallest bitstring.
std::pair<std::vector<int>, double> exact_ground_state(
    const PauliZHamiltonian& h);

}  // namespace ecdvqe
