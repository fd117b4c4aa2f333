#include "qlin/linear_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace qlin {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<std::vector<double>>& M) {
  const int n = static_cast<int>(M.size());
  Eigen::MatrixXd A(n, std::max(n, 1));
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(M[i].size()) != n) throw std::invalid_argument("matrix is not square");
    for (int j = 0; j < n; ++j) A(i, j) = M[i][j];
  }
  return A;
}

double sigma_ratio(const Eigen::MatrixXd& A) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sigma = svd.singularValues();
  if (sigma(0) == 0.0) return 0.0;
  return sigma(sigma.size() - 1) / sigma(0);
}

constexpr double kSingularScreen = 1e-12;

double infinity_norm(const std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm = std::max(norm, std::abs(x));
  return norm;
}

std::vector<double> multiply(const std::vector<std::vector<double>>& M,
                             const std::vector<double>& x) {
  std::vector<double> out(M.size(), 0.0);
  for (std::size_t k = 0; k < M.size(); ++k)
    for (std::size_t j = 0; j < x.size(); ++j) out[k] += M[k][j] * x[j];
  return out;
}

bool skip_comments(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    line = line.substr(start);
    return true;
  }
  return false;
}

std::vector<double> parse_row(const std::string& line, int expected, const char* what) {
  std::istringstream row(line);
  std::vector<double> values;
  double v;
  while (row >> v) values.push_back(v);
  if (static_cast<int>(values.size()) != expected)
    throw std::runtime_error(std::string("expected ") + std::to_string(expected) + " values in " +
                             what + " line: " + line);
  return values;
}

MatrixProblem parse_problem(std::istream& in, bool require_y) {
  std::string line;
  if (!skip_comments(in, line)) throw std::runtime_error("empty problem file");
  int n = 0, resolution = 0;
  {
    std::istringstream header(line);
    if (!(header >> n >> resolution) || n < 1 || resolution < 1)
      throw std::runtime_error("bad header line (want `N R`): " + line);
  }
  MatrixProblem p;
  p.enc.resolution = resolution;
  for (int i = 0; i < n; ++i) {
    if (!skip_comments(in, line)) throw std::runtime_error("missing matrix row " + std::to_string(i));
    p.M.push_back(parse_row(line, n, "matrix"));
  }
  if (skip_comments(in, line)) {
    p.Y = parse_row(line, n, "right-hand-side");
  } else if (require_y) {
    throw std::runtime_error("missing right-hand-side line");
  } else {
    p.Y.assign(n, 0.0);
  }
  return p;
}

MatrixProblem from_file(const std::string& path, bool require_y) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return parse_problem(in, require_y);
}

}  // namespace

void validate(const MatrixProblem& p) {
  const int n = p.size();
  if (n < 1) throw std::invalid_argument("empty matrix");
  for (const auto& row : p.M)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("matrix is not square");
  if (static_cast<int>(p.Y.size()) != n)
    throw std::invalid_argument("right-hand side length does not match the matrix");
  if (!p.enc.admissible()) throw std::invalid_argument("inadmissible encoding");
  if (sigma_ratio(to_eigen(p.M)) < kSingularScreen)
    throw SingularMatrixError("matrix is singular to working precision");
}

int linear_index(int i, int r, int R) {
  if (R < 1 || i < 0 || r < 0 || r >= R) throw std::invalid_argument("index out of range");
  return i * R + r;
}

std::pair<int, int> inverse_index(int l, int R) {
  if (R < 1 || l < 0) throw std::invalid_argument("index out of range");
  return {l / R, l % R};
}

QuboModel build_linear_qubo(const MatrixProblem& p) {
  validate(p);
  const int n = p.size();
  const int R = p.enc.resolution;
  const double c = p.enc.c;
  const double d = p.enc.d;

  std::vector<double> T(n, 0.0);  // T_k = d * sum_j M_kj + Y_k
  for (int k = 0; k < n; ++k) {
    double row_sum = 0.0;
    for (int j = 0; j < n; ++j) row_sum += p.M[k][j];
    T[k] = d * row_sum + p.Y[k];
  }

  QuboModel model(n * R);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < R; ++r) {
      const double cr = c * std::ldexp(1.0, -r);
      double w = 0.0;
      for (int k = 0; k < n; ++k) w += p.M[k][i] * (cr * p.M[k][i] - 2.0 * T[k]);
      model.weights[linear_index(i, r, R)] = cr * w;
    }

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += p.M[k][i] * p.M[k][j];
      if (dot == 0.0) continue;
      for (int r = 0; r < R; ++r)
        for (int s = (i == j ? r + 1 : 0); s < R; ++s)
          model.set_coupling(linear_index(i, r, R), linear_index(j, s, R),
                             c * c * std::ldexp(1.0, -(r + s)) * dot);
    }

  double constant = 0.0;
  for (int k = 0; k < n; ++k) constant += T[k] * T[k];
  model.constant = constant;
  return model;
}

std::vector<double> reconstruct_solution(const BinaryState& bits, int n,
                                         const BinaryEncoding& enc) {
  const int R = enc.resolution;
  if (static_cast<int>(bits.size()) != n * R)
    throw std::invalid_argument("bit count does not match N*R");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    BinaryState piece(bits.begin() + i * R, bits.begin() + (i + 1) * R);
    x[i] = decode(piece, enc);
  }
  return x;
}

LinearOutcome solve_linear(const MatrixProblem& p, const SolveOptions& options) {
  const QuboModel raw = build_linear_qubo(p);
  LinearOutcome outcome;

  BinaryState bits;
  double scaled_energy = 0.0;
  if (options.solver == SolverChoice::kBrute) {
    const QuboModel scaled = scale_by_max_coupling(raw);
    std::tie(bits, scaled_energy) = find_ground_state(scaled);
  } else if (options.embed) {
    const int t = (raw.num_vars + 3) / 4;
    const ChimeraGraph graph = build_chimera(std::max(1, t), std::max(1, t));
    const EmbeddedSampleResult run =
        sample_embedded(raw, graph, options.alpha, options.sampler, options.policy);
    outcome.chain_break_fraction = run.break_fraction();
    if (run.logical.empty()) {
      outcome.broken_chains = true;
      return outcome;
    }
    bits = run.logical.best().state;
    scaled_energy = run.logical.best().energy / scale_by_max_coupling(raw).scale;
  } else {
    const QuboModel scaled = scale_by_max_coupling(raw);
    const SampleSet set = sample(scaled, options.sampler);
    bits = set.best().state;
    scaled_energy = set.best().energy;
  }

  outcome.solved = true;
  outcome.solution.bits = bits;
  outcome.solution.scaled_energy = scaled_energy;
  outcome.solution.x = reconstruct_solution(bits, p.size(), p.enc);
  const std::vector<double> residual_vec = multiply(p.M, outcome.solution.x);
  double norm2 = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    const double r = residual_vec[k] - p.Y[k];
    norm2 += r * r;
  }
  outcome.solution.residual_norm = std::sqrt(norm2);
  return outcome;
}

InversionReport invert_matrix(const std::vector<std::vector<double>>& M, const BinaryEncoding& enc,
                              const SolveOptions& options) {
  const int n = static_cast<int>(M.size());
  InversionReport report;
  report.inverse.assign(n, std::vector<double>(n, 0.0));
  report.column_ok.assign(n, false);
  for (int j = 0; j < n; ++j) {
    MatrixProblem column{M, std::vector<double>(n, 0.0), enc};
    column.Y[j] = 1.0;
    try {
      const LinearOutcome outcome = solve_linear(column, options);
      if (!outcome.solved) {
        report.failures.push_back("column " + std::to_string(j) + ": broken chains");
        continue;
      }
      for (int i = 0; i < n; ++i) report.inverse[i][j] = outcome.solution.x[i];
      report.column_ok[j] = true;
    } catch (const std::exception& err) {
      report.failures.push_back("column " + std::to_string(j) + ": " + err.what());
    }
  }
  return report;
}

double condition_number(const std::vector<std::vector<double>>& M) {
  const Eigen::MatrixXd A = to_eigen(M);
  if (A.rows() != A.cols() || A.rows() < 1) throw std::invalid_argument("matrix is not square");
  const Eigen::EigenSolver<Eigen::MatrixXd> eigen(A, /*computeEigenvectors=*/false);
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.rows(); ++i) {
    const double magnitude = std::abs(eigen.eigenvalues()(i));
    largest = std::max(largest, magnitude);
    smallest = std::min(smallest, magnitude);
  }
  if (smallest == 0.0 || largest / smallest > 1.0 / kSingularScreen)
    return std::numeric_limits<double>::infinity();
  return largest / smallest;
}

bool is_singular(const std::vector<std::vector<double>>& M) {
  return sigma_ratio(to_eigen(M)) < kSingularScreen;
}

LinearIterationTrace iterate_linear(const MatrixProblem& p, double tol, int max_iter,
                                    const SolveOptions& options) {
  validate(p);
  if (tol <= 0.0 || max_iter < 1) throw std::invalid_argument("bad tolerance or iteration cap");
  const int n = p.size();
  LinearIterationTrace trace;
  trace.x.assign(n, 0.0);
  std::vector<double> residual = p.Y;
  const double stop = tol * std::max(1.0, infinity_norm(p.Y));

  for (int round = 0; round < max_iter && infinity_norm(residual) > stop; ++round) {
    const int offset = floor_exponent(infinity_norm(residual)) + 1;
    MatrixProblem sub = p;
    for (int k = 0; k < n; ++k) sub.Y[k] = std::ldexp(residual[k], -offset);
    const LinearOutcome outcome = solve_linear(sub, options);
    if (!outcome.solved) break;  // trace stays unconverged
    LinearIterationRecord record;
    record.offset = offset;
    record.step.resize(n);
    for (int i = 0; i < n; ++i) {
      record.step[i] = std::ldexp(outcome.solution.x[i], offset);
      trace.x[i] += record.step[i];
    }
    const std::vector<double> moved = multiply(p.M, record.step);
    for (int k = 0; k < n; ++k) residual[k] -= moved[k];
    record.residual_norm = infinity_norm(residual);
    trace.records.push_back(std::move(record));
  }
  trace.final_error = infinity_norm(residual);
  trace.converged = trace.final_error <= stop;
  return trace;
}

MatrixProblem load_problem(std::istream& in) { return parse_problem(in, /*require_y=*/true); }

MatrixProblem load_problem_file(const std::string& path) { return from_file(path, true); }

MatrixProblem load_matrix(std::istream& in) { return parse_problem(in, /*require_y=*/false); }

MatrixProblem load_matrix_file(const std::string& path) { return from_file(path, false); }

void save_problem(std::ostream& out, const MatrixProblem& p) {
  out << std::setprecision(17);
  out << p.size() << ' ' << p.enc.resolution << '\n';
  for (const auto& row : p.M) {
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
  for (std::size_t k = 0; k < p.Y.size(); ++k) out << (k ? " " : "") << p.Y[k];
  out << '\n';
}

}  // namespace qlin
