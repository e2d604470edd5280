#include "ecdvqe/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ecdvqe {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

const json& member(const json& j, const std::string& where,
                   const std::string& key) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing required field");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer_at(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<std::pair<int, double>> pairs_at(const json& j,
                                             const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of [index, coefficient]");
  std::vector<std::pair<int, double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const json& entry = j[i];
    if (!entry.is_array() || entry.size() != 2)
      fail(at, "expected a pair [index, coefficient]");
    out.emplace_back(integer_at(entry[0], at + "[0]"),
                     number_at(entry[1], at + "[1]"));
  }
  return out;
}

}  // namespace

BinaryProblem problem_from_json(const json& j) {
  BinaryProblem p;

  const json& sense = member(j, "problem", "sense");
  if (!sense.is_string()) fail("problem.sense", "expected \"max\" or \"min\"");
  const std::string s = sense.get<std::string>();
  if (s == "max")
    p.sense = Sense::Maximize;
  else if (s == "min")
    p.sense = Sense::Minimize;
  else
    fail("problem.sense", "expected \"max\" or \"min\", got \"" + s + "\"");

  p.objective = pairs_at(member(j, "problem", "objective"), "objective");

  const json& cons = member(j, "problem", "constraints");
  if (!cons.is_array()) fail("constraints", "expected an array");
  for (std::size_t c = 0; c < cons.size(); ++c) {
    const std::string at = "constraints[" + std::to_string(c) + "]";
    const json& jc = cons[c];
    LinearConstraint con;
    con.coeffs = pairs_at(member(jc, at, "coeffs"), at + ".coeffs");
    const json& rel = member(jc, at, "sense");
    if (!rel.is_string()) fail(at + ".sense", "expected \"<=\", \"=\" or \">=\"");
    const std::string r = rel.get<std::string>();
    if (r == "<=")
      con.relation = Relation::LessEq;
    else if (r == "=")
      con.relation = Relation::Equal;
    else if (r == ">=")
      con.relation = Relation::GreaterEq;
    else
      fail(at + ".sense", "expected \"<=\", \"=\" or \">=\", got \"" + r + "\"");
    con.rhs = number_at(member(jc, at, "rhs"), at + ".rhs");
    con.lambda = number_at(member(jc, at, "lambda"), at + ".lambda");
    if (!(con.lambda > 0.0)) fail(at + ".lambda", "must be > 0");
    if (auto it = jc.find("slack_bits"); it != jc.end()) {
      con.slack_bits = integer_at(*it, at + ".slack_bits");
      if (*con.slack_bits < 0) fail(at + ".slack_bits", "must be >= 0");
    }
    p.constraints.push_back(std::move(con));
  }

  int max_index = -1;
  for (const auto& [i, c] : p.objective) max_index = std::max(max_index, i);
  for (const auto& con : p.constraints)
    for (const auto& [i, c] : con.coeffs) max_index = std::max(max_index, i);
  p.num_variables = max_index + 1;
  if (auto it = j.find("num_variables"); it != j.end()) {
    const int n = integer_at(*it, "num_variables");
    if (n < p.num_variables)
      fail("num_variables", "smaller than the largest index used");
    p.num_variables = n;
  }

  try {
    p.validate();
  } catch (const std::exception& e) {
    fail("problem", e.what());
  }
  return p;
}

BinaryProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  try {
    return problem_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

json problem_to_json(const BinaryProblem& problem) {
  json j;
  j["sense"] = problem.sense == Sense::Maximize ? "max" : "min";
  j["num_variables"] = problem.num_variables;
  j["objective"] = json::array();
  for (const auto& [i, c] : problem.objective)
    j["objective"].push_back(json::array({i, c}));
  j["constraints"] = json::array();
  for (const auto& con : problem.constraints) {
    json jc;
    jc["coeffs"] = json::array();
    for (const auto& [i, c] : con.coeffs)
      jc["coeffs"].push_back(json::array({i, c}));
    jc["sense"] = con.relation == Relation::LessEq  ? "<="
                  : con.relation == Relation::Equal ? "="
                                                    : ">=";
    jc["rhs"] = con.rhs;
    jc["lambda"] = con.lambda;
    if (con.slack_bits) jc["slack_bits"] = *con.slack_bits;
    j["constraints"].push_back(std::move(jc));
  }
  return j;
}

json hamiltonian_to_json(const PauliZHamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms()) {
    json jt;
    jt["coef"] = t.coef;
    jt["z"] = t.qubits;
    terms.push_back(std::move(jt));
  }
  return terms;
}

namespace {

// Descending mass, ascending flat index on ties.
template <typename Entry>
void sort_entries(std::vector<Entry>& entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
}

}  // namespace

json histogram_to_json(const MeasurementHistogram& histogram) {
  std::vector<std::pair<std::uint64_t, double>> entries(
      histogram.entries().begin(), histogram.entries().end());
  sort_entries(entries);
  json out = json::array();
  for (const auto& [idx, p] : entries) {
    const BasisOutcome outcome = histogram.layout().flat_to_outcome(idx);
    json je;
    je["q"] = outcome.qubit;
    je["occ"] = outcome.occupations;
    je["p"] = p;
    out.push_back(std::move(je));
  }
  return out;
}

json bitstring_distribution_to_json(const Eigen::VectorXd& probs,
                                    int num_qubits) {
  std::vector<std::pair<std::uint64_t, double>> entries;
  for (Eigen::Index i = 0; i < probs.size(); ++i)
    if (probs(i) > 0.0) entries.emplace_back(static_cast<std::uint64_t>(i), probs(i));
  sort_entries(entries);
  json out = json::array();
  for (const auto& [idx, p] : entries) {
    std::string bits;
    for (int b : index_to_bits(idx, num_qubits)) bits += char('0' + b);
    json je;
    je["bits"] = bits;
    je["p"] = p;
    out.push_back(std::move(je));
  }
  return out;
}

json solution_to_json(const SolutionRecord& solution) {
  json j;
  j["bits"] = solution.bits;
  j["bits_full"] = solution.bits_full;
  j["outcome"]["q"] = solution.outcome.qubit;
  j["outcome"]["occ"] = solution.outcome.occupations;
  j["probability"] = solution.probability;
  j["objective"] = solution.objective;
  j["feasible"] = solution.feasible;
  return j;
}

json RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["problem"] = problem_path;
  j["solver"] = solver;
  j["cutoffs"] = cutoffs;
  j["depth"] = depth;
  j["layers"] = layers;
  j["trials"] = trials;
  j["seeds"] = seeds;
  j["shots"] = shots;
  j["kappa_tau"] = kappa_tau;
  j["freeze_noise"] = freeze_noise;
  j["max_iterations"] = max_iterations;
  j["init_scale"] = init_scale;
  if (!axis.empty()) {
    j["axis"] = axis;
    j["values"] = values;
  }
  return j;
}

std::string format_double(double value) { return json(value).dump(); }

std::string format_outcome(const BasisOutcome& outcome) {
  std::string s = "(" + std::to_string(outcome.qubit);
  for (int n : outcome.occupations) s += "," + std::to_string(n);
  return s + ")";
}

std::string trace_to_tsv(const OptimizationTrace& trace,
                         const RunManifest& manifest) {
  std::ostringstream out;
  out << "# manifest: " << manifest.to_json().dump() << "\n";
  out << "# seed: " << trace.seed << "\n";
  out << "iteration\tenergy\tp_argmax\targmax\tgrad_norm\n";
  for (const auto& rec : trace.records)
    out << rec.iteration << '\t' << format_double(rec.energy) << '\t'
        << format_double(rec.argmax_probability) << '\t'
        << format_outcome(rec.argmax) << '\t' << format_double(rec.grad_norm)
        << '\n';
  return out.str();
}

std::string qaoa_trials_to_tsv(const QaoaRunResult& result,
                               const RunManifest& manifest) {
  std::ostringstream out;
  out << "# manifest: " << manifest.to_json().dump() << "\n";
  out << "trial\tseed\tenergy\tp_solution\titerations\n";
  for (std::size_t t = 0; t < result.trials.size(); ++t) {
    const auto& trial = result.trials[t];
    out << t << '\t' << trial.seed << '\t' << format_double(trial.energy)
        << '\t' << format_double(trial.solution_probability) << '\t'
        << trial.iterations << '\n';
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace ecdvqe
