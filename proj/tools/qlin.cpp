// qlin: QUBO-based division and linear-system solving on a simulated annealer.
#include "qlin/anneal.hpp"
#include "qlin/chimera.hpp"
#include "qlin/division.hpp"
#include "qlin/encoding.hpp"
#include "qlin/landscape.hpp"
#include "qlin/linear_system.hpp"
#include "qlin/qubo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitSingular = 4;
constexpr int kExitBrokenChains = 5;

struct CommonOpts {
  int R = 4;
  double c = 2.0;
  double d = 1.0;
  double alpha = 20.0;
  std::string solver = "brute";
  int reads = 100;
  int sweeps = 1000;
  std::uint64_t seed = 12345;
  double tol = 1e-6;
  int max_iter = 100;
  std::string policy = "discard";
  std::string out;
};

void attach_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--R", opts.R, "bits per encoded value")->envname("QL_R");
  cmd->add_option("--c", opts.c, "encoding scale c")->envname("QL_C");
  cmd->add_option("--d", opts.d, "encoding offset d")->envname("QL_D");
  cmd->add_option("--alpha", opts.alpha, "chain penalty strength")->envname("QL_ALPHA");
  cmd->add_option("--solver", opts.solver, "brute | sa")
      ->check(CLI::IsMember({"brute", "sa"}))
      ->envname("QL_SOLVER");
  cmd->add_option("--reads", opts.reads, "annealing reads")->envname("QL_READS");
  cmd->add_option("--sweeps", opts.sweeps, "sweeps per read")->envname("QL_SWEEPS");
  cmd->add_option("--seed", opts.seed, "sampler seed")->envname("QL_SEED");
  cmd->add_option("--tol", opts.tol, "iteration tolerance")->envname("QL_TOL");
  cmd->add_option("--max-iter", opts.max_iter, "iteration cap")->envname("QL_MAX_ITER");
  cmd->add_option("--policy", opts.policy, "broken-chain policy: discard | majority")
      ->check(CLI::IsMember({"discard", "majority"}))
      ->envname("QL_POLICY");
  cmd->add_option("--out", opts.out, "write the report/CSV here plus <out>.manifest.json")
      ->envname("QL_OUT");
}

qlin::BinaryEncoding encoding_of(const CommonOpts& opts) {
  qlin::BinaryEncoding enc;
  enc.resolution = opts.R;
  enc.c = opts.c;
  enc.d = opts.d;
  if (!enc.admissible()) throw CLI::ValidationError("--R/--c/--d", "inadmissible encoding");
  return enc;
}

qlin::SamplerConfig sampler_of(const CommonOpts& opts) {
  qlin::SamplerConfig config;
  config.reads = opts.reads;
  config.sweeps = opts.sweeps;
  config.seed = opts.seed;
  return config;
}

qlin::SolveOptions solve_options_of(const CommonOpts& opts) {
  qlin::SolveOptions options;
  options.solver = opts.solver == "sa" ? qlin::SolverChoice::kAnneal : qlin::SolverChoice::kBrute;
  options.sampler = sampler_of(opts);
  options.alpha = opts.alpha;
  options.policy =
      opts.policy == "majority" ? qlin::UnembedPolicy::kMajority : qlin::UnembedPolicy::kDiscard;
  return options;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("file", "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json common_json(const CommonOpts& opts) {
  return json{{"R", opts.R},           {"c", opts.c},
              {"d", opts.d},           {"alpha", opts.alpha},
              {"solver", opts.solver}, {"reads", opts.reads},
              {"sweeps", opts.sweeps}, {"seed", opts.seed},
              {"tol", opts.tol},       {"max_iter", opts.max_iter},
              {"policy", opts.policy}};
}

// Report goes to stdout always; with --out it is also written to the file,
// with a manifest of the run at <out>.manifest.json.
void emit(const CommonOpts& opts, const std::string& subcommand, const std::string& report,
          const std::string& input_hashed) {
  std::cout << report;
  if (opts.out.empty()) return;
  {
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) throw CLI::ValidationError("--out", "cannot write " + opts.out);
    file << report;
  }
  json manifest{{"subcommand", subcommand},
                {"params", common_json(opts)},
                {"input_fnv1a", hex64(fnv1a(input_hashed))},
                {"outputs", json::array({opts.out})}};
  std::ofstream mf(opts.out + ".manifest.json", std::ios::binary);
  if (!mf) throw CLI::ValidationError("--out", "cannot write " + opts.out + ".manifest.json");
  mf << manifest.dump(2) << '\n';
}

std::string format_vector(const std::vector<double>& x) {
  std::ostringstream out;
  out << std::setprecision(17) << '(';
  for (std::size_t i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
  out << ')';
  return out.str();
}

int run_divide(const CommonOpts& opts, double m, double y, bool iterate) {
  std::ostringstream report;
  report << std::setprecision(17);
  qlin::DivisionProblem problem{m, y, encoding_of(opts)};
  const bool sa = opts.solver == "sa";
  const qlin::GroundSolver solver =
      sa ? qlin::annealing_solver(sampler_of(opts)) : qlin::brute_force_solver();
  if (iterate) {
    const qlin::IterationTrace trace =
        qlin::iterate_division(y, m, opts.tol, opts.max_iter, solver, problem.enc);
    report << "x = " << trace.x << '\n'
           << "iterations = " << trace.iterations() << '\n'
           << "residual = " << trace.final_error << '\n'
           << "converged = " << (trace.converged ? "yes" : "no") << '\n'
           << "solver = " << opts.solver << '\n';
    emit(opts, "divide", report.str(), report.str());
    return trace.converged ? 0 : kExitSolverFailure;
  }
  const qlin::DivisionResult result = qlin::solve_division(problem, solver);
  report << "x = " << result.x << '\n'
         << "bits = " << qlin::format_bits(result.bits) << '\n'
         << "scaled energy = " << result.scaled_energy << '\n'
         << "objective = " << result.raw_objective << '\n'
         << "solver = " << opts.solver << '\n';
  emit(opts, "divide", report.str(), report.str());
  return 0;
}

// The problem file's own `R` wins unless --R was given on the command line.
qlin::BinaryEncoding merge_encoding(const CommonOpts& opts, bool r_explicit, int file_resolution) {
  qlin::BinaryEncoding enc;
  enc.resolution = r_explicit ? opts.R : file_resolution;
  enc.c = opts.c;
  enc.d = opts.d;
  if (!enc.admissible()) throw CLI::ValidationError("--R/--c/--d", "inadmissible encoding");
  return enc;
}

int run_solve(const CommonOpts& opts, bool r_explicit, const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  qlin::MatrixProblem problem = qlin::load_problem(in);
  problem.enc = merge_encoding(opts, r_explicit, problem.enc.resolution);

  const qlin::LinearOutcome outcome = qlin::solve_linear(problem, solve_options_of(opts));
  if (!outcome.solved) {
    std::cerr << "broken chains: every read broke (fraction "
              << outcome.chain_break_fraction << ")\n";
    return kExitBrokenChains;
  }
  std::ostringstream report;
  report << std::setprecision(17);
  report << "x = " << format_vector(outcome.solution.x) << '\n'
         << "bits = " << qlin::format_bits(outcome.solution.bits) << '\n'
         << "residual norm = " << outcome.solution.residual_norm << '\n'
         << "scaled energy = " << outcome.solution.scaled_energy << '\n'
         << "solver = " << opts.solver << '\n';
  if (opts.solver == "sa")
    report << "chain-break fraction = " << outcome.chain_break_fraction << '\n';
  emit(opts, "solve", report.str(), bytes);
  return 0;
}

int run_invert(const CommonOpts& opts, bool r_explicit, const std::string& path) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  const qlin::MatrixProblem loaded = qlin::load_matrix(in);
  if (qlin::is_singular(loaded.M)) {
    std::cerr << "singular matrix\n";
    return kExitSingular;
  }
  const qlin::InversionReport inverse = qlin::invert_matrix(
      loaded.M, merge_encoding(opts, r_explicit, loaded.enc.resolution), solve_options_of(opts));
  std::ostringstream report;
  report << std::setprecision(17);
  for (const auto& row : inverse.inverse) {
    for (std::size_t j = 0; j < row.size(); ++j) report << (j ? " " : "") << row[j];
    report << '\n';
  }
  for (const auto& failure : inverse.failures) report << "failed: " << failure << '\n';
  emit(opts, "invert", report.str(), bytes);
  return inverse.ok() ? 0 : kExitSolverFailure;
}

int run_landscape(const CommonOpts& opts, bool r_explicit, const std::string& path,
                  double window_fraction) {
  const std::string bytes = read_file(path);
  std::istringstream in(bytes);
  qlin::MatrixProblem problem = qlin::load_problem(in);
  problem.enc = merge_encoding(opts, r_explicit, problem.enc.resolution);

  const qlin::QuboModel scaled = qlin::scale_by_max_coupling(qlin::build_linear_qubo(problem));
  const qlin::GrayProjection projection = qlin::gray_projection(scaled);
  std::ostringstream csv;
  qlin::write_gray_csv(csv, projection);

  const qlin::Spectrum spectrum = qlin::brute_force_solve(scaled);
  const double window = qlin::fractional_window(spectrum, window_fraction);
  const qlin::DegeneracyReport degeneracy = qlin::degeneracy_report(scaled, window);
  std::cerr << std::setprecision(17) << "ground = " << degeneracy.ground_energy
            << "  gap = " << degeneracy.gap << "  states within " << window_fraction
            << " of range = " << degeneracy.near_ground_count << '\n';
  emit(opts, "landscape", csv.str(), bytes);
  return 0;
}

int run_spectrum(const CommonOpts& opts, int chain) {
  if (chain < 1 || chain > 20) throw CLI::ValidationError("--chain", "want 1..20");
  // Counter-term ladder for one logical variable of weight 0 spread over a
  // `chain`-qubit chain: weights 2(N-1)alpha/N each, consecutive bonds -alpha.
  qlin::QuboModel model(chain);
  const double weight = 2.0 * (chain - 1) * opts.alpha / chain;
  for (int q = 0; q < chain; ++q) model.weights[q] = weight;
  for (int q = 0; q + 1 < chain; ++q) model.set_coupling(q, q + 1, -opts.alpha);
  std::ostringstream report;
  report << std::setprecision(17) << "bits,energy\n";
  const std::vector<double> energies = qlin::enumerate_all_energies(model);
  for (std::uint64_t k = 0; k < energies.size(); ++k)
    report << qlin::format_bits(qlin::index_to_state(k, chain)) << ',' << energies[k] << '\n';
  emit(opts, "spectrum", report.str(), report.str());
  return 0;
}

int run_embed_info(const CommonOpts& opts, int k, int rows, int cols) {
  if (k < 1) throw CLI::ValidationError("--k", "want k >= 1");
  const int t = (k + 3) / 4;
  if (rows == 0) rows = std::max(1, t);
  if (cols == 0) cols = std::max(1, t);
  const qlin::ChimeraGraph graph = qlin::build_chimera(rows, cols);
  const qlin::Embedding embedding = qlin::embed_complete_graph(k, graph);

  qlin::QuboModel complete(k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) complete.set_coupling(a, b, 1.0);
  const qlin::EmbeddingReport check = qlin::verify_embedding(embedding, complete, graph);

  std::ostringstream report;
  report << "chimera " << rows << "x" << cols << " (" << graph.num_qubits() << " qubits)\n"
         << qlin::embedding_to_string(embedding) << "max chain length = "
         << embedding.max_chain_length() << '\n'
         << "physical qubits used = " << embedding.num_physical() << '\n'
         << "verified = " << (check.ok() ? "yes" : "no") << '\n';
  for (const auto& violation : check.violations) report << "violation: " << violation << '\n';
  emit(opts, "embed-info", report.str(), report.str());
  return check.ok() ? 0 : kExitSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QUBO compilation and annealing for division and linear systems"};
  app.require_subcommand(1);
  std::cout << std::setprecision(17);

  CommonOpts opts;

  auto* divide = app.add_subcommand("divide", "solve m * x = y for x");
  double m = 1.0, y = 0.0;
  bool iterate = false;
  divide->add_option("--m", m, "coefficient m")->required();
  divide->add_option("--y", y, "target y")->required();
  divide->add_flag("--iterate", iterate, "refine the quantized result iteratively");
  attach_common(divide, opts);

  auto* solve = app.add_subcommand("solve", "solve M x = Y from a problem file");
  std::string solve_path;
  solve->add_option("file", solve_path, "problem file")->required();
  attach_common(solve, opts);

  auto* invert = app.add_subcommand("invert", "invert the matrix of a problem file");
  std::string invert_path;
  invert->add_option("file", invert_path, "matrix file")->required();
  attach_common(invert, opts);

  auto* landscape = app.add_subcommand("landscape", "Gray-order energy CSV of a problem's QUBO");
  std::string landscape_path;
  double window_fraction = 0.05;
  landscape->add_option("file", landscape_path, "problem file")->required();
  landscape->add_option("--window", window_fraction, "near-ground window as a range fraction");
  attach_common(landscape, opts);

  auto* spectrum = app.add_subcommand("spectrum", "counter-term ladder of a single chain");
  int chain = 2;
  spectrum->add_option("--chain", chain, "chain length")->required();
  attach_common(spectrum, opts);

  auto* embed_info = app.add_subcommand("embed-info", "complete-graph embedding summary");
  int k = 4, rows = 0, cols = 0;
  embed_info->add_option("--k", k, "logical variables")->required();
  embed_info->add_option("--rows", rows, "cell rows (default: fit)");
  embed_info->add_option("--cols", cols, "cell cols (default: fit)");
  attach_common(embed_info, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (divide->parsed()) return run_divide(opts, m, y, iterate);
    if (solve->parsed()) return run_solve(opts, solve->count("--R") > 0, solve_path);
    if (invert->parsed()) return run_invert(opts, invert->count("--R") > 0, invert_path);
    if (landscape->parsed())
      return run_landscape(opts, landscape->count("--R") > 0, landscape_path, window_fraction);
    if (spectrum->parsed()) return run_spectrum(opts, chain);
    if (embed_info->parsed()) return run_embed_info(opts, k, rows, cols);
  } catch (const CLI::ValidationError& err) {
    std::cerr << err.what() << '\n';
    return kExitUsage;
  } catch (const qlin::SingularMatrixError& err) {
    std::cerr << "singular matrix: " << err.what() << '\n';
    return kExitSingular;
  } catch (const std::invalid_argument& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << '\n';
    return kExitSolverFailure;
  }
  return kExitUsage;
}
