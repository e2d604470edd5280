// Command-line front end: encode a problem file to its diagonal Hamiltonian,
// solve it with the hybrid variational solver / qubit-only baseline / exact
// enumeration, or sweep one axis of a run configuration.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecdvqe/io.hpp"
#include "ecdvqe/noise.hpp"
#include "ecdvqe/qaoa.hpp"
#include "ecdvqe/vqe.hpp"

namespace {

using ecdvqe::BinaryProblem;
using ecdvqe::ModeLayout;
using ecdvqe::PauliZHamiltonian;
using ecdvqe::RunManifest;
using ecdvqe::SchemaError;
using nlohmann::json;

struct Options {
  std::string problem_path;
  std::string solver = "ecd-vqe";
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
  std::string axis;
  std::vector<double> values;
  std::string out_dir;
};

RunManifest make_manifest(const Options& opt, const std::string& command) {
  RunManifest m;
  m.command = command;
  m.problem_path = opt.problem_path;
  m.solver = opt.solver;
  m.cutoffs = opt.cutoffs;
  m.depth = opt.depth;
  m.layers = opt.layers;
  m.trials = opt.trials;
  m.seeds = opt.seeds;
  m.shots = opt.shots;
  m.kappa_tau = opt.kappa_tau;
  m.freeze_noise = opt.freeze_noise;
  m.max_iterations = opt.max_iterations;
  m.init_scale = opt.init_scale;
  m.axis = opt.axis;
  m.values = opt.values;
  return m;
}

// Layout suggestions: a balanced two-mode split, plus a slack-aligned layout
// giving every inequality's slack bits their own qumode when that tiles the
// register.
std::vector<std::vector<int>> layout_suggestions(const BinaryProblem& problem) {
  const int n = problem.total_variables();
  std::vector<std::vector<int>> out;
  if (n == 2) {
    out.push_back({2});
    return out;
  }
  if (n >= 3) out.push_back(ecdvqe::suggested_cutoffs(n));
  std::vector<int> aligned;
  if (problem.num_variables >= 2)
    aligned.push_back(1 << (problem.num_variables - 1));
  bool ok = problem.num_variables >= 1;
  for (const auto& [start, width] : ecdvqe::slack_spans(problem)) {
    (void)start;
    if (width > 0) aligned.push_back(1 << width);
  }
  if (ok && !aligned.empty() &&
      (out.empty() || aligned != out.front()))
    out.push_back(aligned);
  return out;
}

void ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw SchemaError("--out: output directory required");
  std::filesystem::create_directories(dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

ModeLayout layout_for(const Options& opt, int num_qubits) {
  std::vector<int> cutoffs =
      opt.cutoffs.empty() ? ecdvqe::suggested_cutoffs(num_qubits) : opt.cutoffs;
  try {
    return ModeLayout::create(num_qubits, cutoffs);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("--cutoffs: ") + e.what());
  }
}

int cmd_encode(const Options& opt) {
  const BinaryProblem problem = ecdvqe::load_problem(opt.problem_path);
  const ecdvqe::BinaryPolynomial poly = ecdvqe::to_unconstrained(problem);
  const PauliZHamiltonian h = ecdvqe::to_pauli_hamiltonian(poly);

  json out;
  out["manifest"] = make_manifest(opt, "encode").to_json();
  out["num_variables"] = problem.num_variables;
  out["num_qubits"] = h.num_qubits();
  out["slack"] = json::array();
  const auto spans = ecdvqe::slack_spans(problem);
  for (std::size_t k = 0; k < spans.size(); ++k)
    out["slack"].push_back(
        {{"constraint", k}, {"start", spans[k].first}, {"bits", spans[k].second}});
  out["terms"] = ecdvqe::hamiltonian_to_json(h);
  out["suggested_cutoffs"] = layout_suggestions(problem);

  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (!opt.out_dir.empty()) {
    ensure_out_dir(opt.out_dir);
    ecdvqe::write_text_file(join_path(opt.out_dir, "hamiltonian.json"), text);
  }
  return 0;
}

json seed_summary(const ecdvqe::MultiSeedResult& result) {
  json arr = json::array();
  for (const auto& trace : result.traces) {
    json js;
    js["seed"] = trace.seed;
    js["final_energy"] = trace.final_energy;
    js["p_argmax"] = trace.final_histogram.argmax().second;
    js["iterations"] = trace.iterations;
    js["converged"] = trace.converged;
    js["line_search_failed"] = trace.line_search_failed;
    arr.push_back(std::move(js));
  }
  return arr;
}

int solve_ecd_vqe(const Options& opt, const BinaryProblem& problem,
                  const PauliZHamiltonian& h, const RunManifest& manifest) {
  const ModeLayout layout = layout_for(opt, h.num_qubits());
  ecdvqe::OptimizerConfig cfg;
  cfg.max_iterations = opt.max_iterations;
  cfg.init_scale = opt.init_scale;
  cfg.shots = opt.shots;
  cfg.noise.kappa_tau = opt.kappa_tau;
  cfg.freeze_noise_during_optimization = opt.freeze_noise;

  const auto result =
      ecdvqe::run_ecd_vqe_multi_seed(h, layout, opt.depth, cfg, opt.seeds);
  const auto& best = result.best();
  const ecdvqe::SolutionRecord solution =
      ecdvqe::extract_solution(best.final_histogram, problem);

  ecdvqe::write_text_file(join_path(opt.out_dir, "trace.tsv"),
                          ecdvqe::trace_to_tsv(best, manifest));

  json hist;
  hist["manifest"] = manifest.to_json();
  hist["entries"] = ecdvqe::histogram_to_json(best.final_histogram);
  ecdvqe::write_text_file(join_path(opt.out_dir, "histogram.json"),
                          hist.dump(2) + "\n");

  json sol;
  sol["manifest"] = manifest.to_json();
  sol["solution"] = ecdvqe::solution_to_json(solution);
  sol["final_energy"] = best.final_energy;
  sol["best_seed"] = best.seed;
  sol["seeds"] = seed_summary(result);
  ecdvqe::write_text_file(join_path(opt.out_dir, "solution.json"),
                          sol.dump(2) + "\n");

  json meta;
  meta["manifest"] = manifest.to_json();
  double total = 0.0;
  meta["wall_seconds_per_seed"] = json::array();
  for (const auto& trace : result.traces) {
    meta["wall_seconds_per_seed"].push_back(trace.wall_seconds);
    total += trace.wall_seconds;
  }
  meta["wall_seconds"] = total;
  ecdvqe::write_text_file(join_path(opt.out_dir, "metadata.json"),
                          meta.dump(2) + "\n");

  std::cout << "best seed " << best.seed << ": energy "
            << ecdvqe::format_double(best.final_energy) << ", argmax "
            << ecdvqe::format_outcome(solution.outcome) << " (p="
            << ecdvqe::format_double(solution.probability) << "), objective "
            << ecdvqe::format_double(solution.objective)
            << (solution.feasible ? ", feasible" : ", infeasible") << "\n";
  return 0;
}

int solve_qaoa(const Options& opt, const BinaryProblem& problem,
               const PauliZHamiltonian& h, const RunManifest& manifest) {
  if (opt.kappa_tau > 0.0)
    throw SchemaError("--kappa-tau: photon loss applies to the qumode solver only");
  if (opt.shots > 0)
    throw SchemaError("--shots: sampling is not available for the baseline");

  const auto start = std::chrono::steady_clock::now();
  ecdvqe::QaoaConfig cfg;
  cfg.seed = opt.seeds.front();
  cfg.max_iterations = opt.max_iterations;
  const ecdvqe::QaoaRunResult result =
      ecdvqe::run_qaoa(h, opt.layers, opt.trials, cfg);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  ecdvqe::write_text_file(join_path(opt.out_dir, "trace.tsv"),
                          ecdvqe::qaoa_trials_to_tsv(result, manifest));

  json hist;
  hist["manifest"] = manifest.to_json();
  hist["entries"] = ecdvqe::bitstring_distribution_to_json(
      result.best_distribution, h.num_qubits());
  ecdvqe::write_text_file(join_path(opt.out_dir, "histogram.json"),
                          hist.dump(2) + "\n");

  // Solution record from the argmax of the best trial's distribution.
  Eigen::Index argmax = 0;
  result.best_distribution.maxCoeff(&argmax);
  const auto bits_full = ecdvqe::index_to_bits(
      static_cast<std::uint64_t>(argmax), h.num_qubits());
  std::vector<int> bits(bits_full.begin(),
                        bits_full.begin() + problem.num_variables);
  json sol;
  sol["manifest"] = manifest.to_json();
  sol["solution"]["bits"] = bits;
  sol["solution"]["bits_full"] = bits_full;
  sol["solution"]["probability"] = result.best_distribution(argmax);
  sol["solution"]["objective"] = problem.objective_value(bits);
  sol["solution"]["feasible"] = problem.feasible(bits);
  sol["best_trial"] = result.best_index;
  sol["best_energy"] = result.best().energy;
  sol["p_solution"] = result.best().solution_probability;
  std::string solution_bits;
  for (int b : result.solution_bits) solution_bits += char('0' + b);
  sol["exact_solution_bits"] = solution_bits;
  sol["exact_solution_energy"] = result.solution_energy;
  ecdvqe::write_text_file(join_path(opt.out_dir, "solution.json"),
                          sol.dump(2) + "\n");

  json meta;
  meta["manifest"] = manifest.to_json();
  meta["wall_seconds"] = wall;
  ecdvqe::write_text_file(join_path(opt.out_dir, "metadata.json"),
                          meta.dump(2) + "\n");

  std::cout << "best trial " << result.best_index << ": energy "
            << ecdvqe::format_double(result.best().energy) << ", p_solution "
            << ecdvqe::format_double(result.best().solution_probability)
            << "\n";
  return 0;
}

int solve_exact(const Options& opt, const BinaryProblem& problem,
                const PauliZHamiltonian& h, const RunManifest& manifest) {
  const auto start = std::chrono::steady_clock::now();
  const auto [bits_full, energy] = ecdvqe::exact_ground_state(h);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::vector<int> bits(bits_full.begin(),
                        bits_full.begin() + problem.num_variables);

  json sol;
  sol["manifest"] = manifest.to_json();
  sol["solution"]["bits"] = bits;
  sol["solution"]["bits_full"] = bits_full;
  sol["solution"]["objective"] = problem.objective_value(bits);
  sol["solution"]["feasible"] = problem.feasible(bits);
  sol["energy"] = energy;
  ecdvqe::write_text_file(join_path(opt.out_dir, "solution.json"),
                          sol.dump(2) + "\n");

  json meta;
  meta["manifest"] = manifest.to_json();
  meta["wall_seconds"] = wall;
  ecdvqe::write_text_file(join_path(opt.out_dir, "metadata.json"),
                          meta.dump(2) + "\n");

  std::cout << "ground state energy " << ecdvqe::format_double(energy)
            << ", objective " << ecdvqe::format_double(problem.objective_value(bits))
            << "\n";
  return 0;
}

int cmd_solve(const Options& opt) {
  ensure_out_dir(opt.out_dir);
  const BinaryProblem problem = ecdvqe::load_problem(opt.problem_path);
  const PauliZHamiltonian h =
      ecdvqe::to_pauli_hamiltonian(ecdvqe::to_unconstrained(problem));
  const RunManifest manifest = make_manifest(opt, "solve");
  if (opt.solver == "ecd-vqe") return solve_ecd_vqe(opt, problem, h, manifest);
  if (opt.solver == "qaoa") return solve_qaoa(opt, problem, h, manifest);
  if (opt.solver == "exact") return solve_exact(opt, problem, h, manifest);
  throw SchemaError("--solver: expected ecd-vqe, qaoa or exact, got \"" +
                    opt.solver + "\"");
}

int cmd_sweep(const Options& opt) {
  ensure_out_dir(opt.out_dir);
  if (opt.values.empty()) throw SchemaError("--values: at least one value required");
  const BinaryProblem problem = ecdvqe::load_problem(opt.problem_path);
  const PauliZHamiltonian h =
      ecdvqe::to_pauli_hamiltonian(ecdvqe::to_unconstrained(problem));
  const RunManifest manifest = make_manifest(opt, "sweep");
  const auto start = std::chrono::steady_clock::now();

  std::ostringstream table;
  table << "# manifest: " << manifest.to_json().dump() << "\n";

  if (opt.axis == "kappa-tau" || opt.axis == "depth") {
    if (opt.solver != "ecd-vqe")
      throw SchemaError("--axis " + opt.axis + " requires --solver ecd-vqe");
    const ModeLayout layout = layout_for(opt, h.num_qubits());
    const auto [solution_bits, solution_energy] = ecdvqe::exact_ground_state(h);
    const auto solution_outcome = layout.encode(solution_bits);

    table << "value\tenergy\tp_argmax\targmax\tp_solution\tobjective\tfeasible\n";
    for (double value : opt.values) {
      ecdvqe::OptimizerConfig cfg;
      cfg.max_iterations = opt.max_iterations;
      cfg.init_scale = opt.init_scale;
      cfg.shots = opt.shots;
      cfg.noise.kappa_tau = opt.kappa_tau;
      cfg.freeze_noise_during_optimization = opt.freeze_noise;
      int depth = opt.depth;
      if (opt.axis == "kappa-tau") {
        cfg.noise.kappa_tau = value;
      } else {
        depth = static_cast<int>(value);
        if (depth < 1 || double(depth) != value)
          throw SchemaError("--values: depth values must be positive integers");
      }
      const auto result =
          ecdvqe::run_ecd_vqe_multi_seed(h, layout, depth, cfg, opt.seeds);
      const auto& best = result.best();
      const auto solution = ecdvqe::extract_solution(best.final_histogram, problem);
      table << ecdvqe::format_double(value) << '\t'
            << ecdvqe::format_double(best.final_energy) << '\t'
            << ecdvqe::format_double(solution.probability) << '\t'
            << ecdvqe::format_outcome(solution.outcome) << '\t'
            << ecdvqe::format_double(
                   best.final_histogram.probability(solution_outcome))
            << '\t' << ecdvqe::format_double(solution.objective) << '\t'
            << (solution.feasible ? 1 : 0) << '\n';
    }
  } else if (opt.axis == "layers") {
    if (opt.solver != "qaoa")
      throw SchemaError("--axis layers requires --solver qaoa");
    table << "value\tenergy\tp_solution\tsuboptimal_mass\n";
    for (double value : opt.values) {
      const int layers = static_cast<int>(value);
      if (layers < 1 || double(layers) != value)
        throw SchemaError("--values: layer counts must be positive integers");
      ecdvqe::QaoaConfig cfg;
      cfg.seed = opt.seeds.front();
      cfg.max_iterations = opt.max_iterations;
      const auto result = ecdvqe::run_qaoa(h, layers, opt.trials, cfg);
      table << layers << '\t'
            << ecdvqe::format_double(result.best().energy) << '\t'
            << ecdvqe::format_double(result.best().solution_probability) << '\t'
            << ecdvqe::format_double(1.0 - result.best().solution_probability)
            << '\n';
    }
  } else {
    throw SchemaError("--axis: expected kappa-tau, depth or layers, got \"" +
                      opt.axis + "\"");
  }

  ecdvqe::write_text_file(join_path(opt.out_dir, "sweep.tsv"), table.str());
  json meta;
  meta["manifest"] = manifest.to_json();
  meta["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  ecdvqe::write_text_file(join_path(opt.out_dir, "metadata.json"),
                          meta.dump(2) + "\n");
  std::cout << table.str();
  return 0;
}

void add_common_options(CLI::App* cmd, Options& opt, bool needs_out) {
  cmd->add_option("--problem", opt.problem_path, "Problem JSON file")
      ->required();
  cmd->add_option("--solver", opt.solver, "ecd-vqe | qaoa | exact");
  cmd->add_option("--cutoffs", opt.cutoffs,
                   "Fock cutoffs per qumode (powers of two)")
      ->delimiter(',');
  cmd->add_option("--depth", opt.depth, "Ansatz blocks");
  cmd->add_option("--layers", opt.layers, "Baseline layers");
  cmd->add_option("--trials", opt.trials, "Baseline random restarts");
  cmd->add_option("--seeds", opt.seeds, "Seeds, one optimizer run each")
      ->delimiter(',');
  cmd->add_option("--shots", opt.shots, "Samples per cost evaluation (0 = exact)");
  cmd->add_option("--kappa-tau", opt.kappa_tau,
                   "Photon-loss strength per block");
  cmd->add_flag("--freeze-noise", opt.freeze_noise,
                 "Optimize noiselessly, evaluate final parameters under loss");
  cmd->add_option("--max-iters", opt.max_iterations, "Optimizer iteration cap");
  cmd->add_option("--init-scale", opt.init_scale,
                   "Upper bound of initial displacement magnitudes");
  auto* out = cmd->add_option("--out", opt.out_dir, "Output directory");
  if (needs_out) out->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid qubit-qumode variational solver for constrained binary "
               "optimization"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* encode = app.add_subcommand(
      "encode", "Reduce a problem file to its diagonal Hamiltonian");
  add_common_options(encode, opt, false);

  CLI::App* solve = app.add_subcommand("solve", "Optimize a problem file");
  add_common_options(solve, opt, true);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Re-run the solver along one configuration axis");
  add_common_options(sweep, opt, true);
  sweep->add_option("--axis", opt.axis, "kappa-tau | depth | layers")
      ->required();
  sweep->add_option("--values", opt.values, "Axis values")
      ->required()
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (encode->parsed()) return cmd_encode(opt);
    if (solve->parsed()) return cmd_solve(opt);
    return cmd_sweep(opt);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ecdvqe::SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
