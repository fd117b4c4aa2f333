#pragma once

#include "qlin/anneal.hpp"
#include "qlin/chimera.hpp"
#include "qlin/encoding.hpp"
#include "qlin/qubo.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlin {

// Linear system M x = Y with every component of x carried by `enc.resolution`
// bits of the shared encoding.
struct MatrixProblem {
  std::vector<std::vector<double>> M;
  std::vector<double> Y;
  BinaryEncoding enc{};

  int size() const { return static_cast<int>(M.size()); }
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape checks plus the singularity screen (reject when sigma_min/sigma_max
// < 1e-12).  Throws std::invalid_argument / SingularMatrixError.
void validate(const MatrixProblem& p);

// Bit l = i * R + r carries weight c * 2^{-r} toward x_i.
int linear_index(int i, int r, int R);
std::pair<int, int> inverse_index(int l, int R);

// Minimises ||M x - Y||^2 over encoded x.  With S_k = sum_j M_kj and
// T_k = d * S_k + Y_k:
//   weight(i,r)       = c 2^{-r} sum_k M_ki (c 2^{-r} M_ki - 2 T_k)
//   coupling(ir, js)  = c^2 2^{-(r+s)} sum_k M_ki M_kj   (both i != j and
//                       i = j with r != s; exact zeros omitted)
//   constant          = sum_k T_k^2
// giving energy(bits) + constant == ||M * reconstruct(bits) - Y||^2.
QuboModel build_linear_qubo(const MatrixProblem& p);

// x_i = c * sum_r 2^{-r} bits[i * R + r] - d.
std::vector<double> reconstruct_solution(const BinaryState& bits, int n, const BinaryEncoding& enc);

struct LinearSolution {
  std::vector<double> x;
  BinaryState bits;
  double scaled_energy = 0.0;
  double residual_norm = 0.0;  // ||M x - Y||_2
};

enum class SolverChoice { kBrute, kAnneal };

struct SolveOptions {
  SolverChoice solver = SolverChoice::kBrute;
  SamplerConfig sampler{};
  double alpha = 20.0;  // chain penalty when sampling through an embedding
  UnembedPolicy policy = UnembedPolicy::kDiscard;
  bool embed = true;    // sampler path: anneal the Chimera-embedded model
};

struct LinearOutcome {
  bool solved = false;
  bool broken_chains = false;  // sampler path: every read broke
  LinearSolution solution;     // valid when solved
  double chain_break_fraction = 0.0;
};

// Brute path: exact ground state of the lambda-scaled model.  Sampler path:
// embeds the raw model on the smallest square Chimera that fits the complete
// graph, anneals, unembeds, and decodes the best intact sample; reports the
// broken-chain outcome when nothing survives.
LinearOutcome solve_linear(const MatrixProblem& p, const SolveOptions& options = {});

// Inverse column by column: column j solves M x = e_j.  Failed columns are
// zero-filled and reported.
struct InversionReport {
  std::vector<std::vector<double>> inverse;
  std::vector<bool> column_ok;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

InversionReport invert_matrix(const std::vector<std::vector<double>>& M, const BinaryEncoding& enc,
                              const SolveOptions& options = {});

// Ratio of extreme eigenvalue magnitudes |lambda|_max / |lambda|_min (equal to
// the singular-value ratio for symmetric matrices); +infinity when singular.
double condition_number(const std::vector<std::vector<double>>& M);

bool is_singular(const std::vector<std::vector<double>>& M);

// Iterated refinement: solve M dx = residual * 2^{-offset} with
// offset = floor_exponent(||residual||_inf) + 1, accumulate x += 2^offset dx,
// update the residual exactly, stop at tol * max(1, ||Y||_inf).
struct LinearIterationRecord {
  std::vector<double> step;   // contribution added this round
  int offset = 0;
  double residual_norm = 0.0; // ||Y - M x||_inf after the step
};

struct LinearIterationTrace {
  std::vector<LinearIterationRecord> records;
  std::vector<double> x;
  double final_error = 0.0;
  bool converged = false;

  int iterations() const { return static_cast<int>(records.size()); }
};

LinearIterationTrace iterate_linear(const MatrixProblem& p, double tol, int max_iter,
                                    const SolveOptions& options = {});

// Problem file: first data line `N R`, then N rows of N values, then the Y
// line.  `#` starts a comment, blank lines are skipped.  load_matrix accepts
// a file with or without the trailing Y line (Y defaults to zero).
MatrixProblem load_problem(std::istream& in);
MatrixProblem load_problem_file(const std::string& path);
MatrixProblem load_matrix(std::istream& in);
MatrixProblem load_matrix_file(const std::string& path);
void save_problem(std::ostream& out, const MatrixProblem& p);

}  // namespace qlin
