#pragma once

// Problem-file parsing with field-level diagnostics, JSON/TSV exports for
// Hamiltonians, histograms, traces and solutions, and the run manifest that
// every output file embeds.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecdvqe/hilbert.hpp"
#include "ecdvqe/qaoa.hpp"
#include "ecdvqe/qubo.hpp"
#include "ecdvqe/vqe.hpp"

namespace ecdvqe {

// Malformed input file or invalid run configuration.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem files:
// {
//   "sense": "max" | "min",
//   "objective": [[index, coefficient], ...],
//   "constraints": [
//     {"coeffs": [[index, coefficient], ...], "sense": "<=" | "=" | ">=",
//      "rhs": number, "lambda": number, "slack_bits": integer (optional)},
//     ...
//   ],
//   "num_variables": integer (optional; inferred from the largest index)
// }
BinaryProblem problem_from_json(const nlohmann::json& j);
BinaryProblem load_problem(const std::string& path);
nlohmann::json problem_to_json(const BinaryProblem& problem);

// [{"coef": g, "z": [qubit indices]}, ...] in the Hamiltonian's term order.
nlohmann::json hamiltonian_to_json(const PauliZHamiltonian& h);

// [{"q": bit, "occ": [n per mode], "p": mass}, ...] sorted by descending
// mass, ties by ascending flat index.
nlohmann::json histogram_to_json(const MeasurementHistogram& histogram);

// Layout-free distribution over raw bitstrings, same ordering rules.
nlohmann::json bitstring_distribution_to_json(const Eigen::VectorXd& probs,
                                              int num_qubits);

nlohmann::json solution_to_json(const SolutionRecord& solution);

// Everything needed to reproduce a run; embedded in every output file.
struct RunManifest {
  std::string command;
  std::string problem_path;
  std::string solver;  // "ecd-vqe" | "qaoa" | "exact"
  std::vector<int> cutoffs;
  int depth = 5;
  int layers = 20;
  int trials = 50;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  int shots = 0;
  double kappa_tau = 0.0;
  bool freeze_noise = false;
  int max_iterations = 200;
  double init_scale = 0.2;
  std::string axis;            // sweep only
  std::vector<double> values;  // sweep only

  nlohmann::json to_json() const;
};

// Tab-separated iteration table: iteration, energy, argmax probability,
// argmax outcome "(q,n1,...,nR)", gradient norm; the manifest rides along in
// a leading comment line. Timing is deliberately omitted so reruns are
// byte-identical.
std::string trace_to_tsv(const OptimizationTrace& trace,
                         const RunManifest& manifest);

// Per-trial table for the qubit-only baseline: trial, seed, final energy,
// solution probability, accepted iterations.
std::string qaoa_trials_to_tsv(const QaoaRunResult& result,
                               const RunManifest& manifest);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);
std::string format_outcome(const BasisOutcome& outcome);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ecdvqe
