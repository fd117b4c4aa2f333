#pragma once

#include "qlin/encoding.hpp"
#include "qlin/qubo.hpp"

#include <vector>

namespace qlin {

// Division m * x = y, solved by minimising H(x) = (m*x - y)^2 over the
// encoded values of x.
struct DivisionProblem {
  double m = 1.0;
  double y = 0.0;
  BinaryEncoding enc{};
};

// Expanding H over the bits gives, with p = m*c and t = m*d + y,
//   weight_r   = p * 2^{-r} * (p * 2^{-r} - 2 t)     (idempotency folds r = s)
//   coupling_{rs} = p^2 * 2^{-(r+s)}                 (complete graph, r != s)
//   constant   = t^2
// so that energy(bits) + constant == (m * decode(bits) - y)^2.
QuboModel build_division_qubo(const DivisionProblem& p);

struct DivisionResult {
  double x = 0.0;             // decoded solution, times 2^offset_applied
  BinaryState bits;           // solver's ground state of the scaled model
  double scaled_energy = 0.0; // energy reported by the solver on the scaled model
  double raw_objective = 0.0; // (m*x - y)^2 evaluated directly
  int offset_applied = 0;     // always 0 for direct solves
};

DivisionResult solve_division(const DivisionProblem& p,
                              const GroundSolver& solver = brute_force_solver());

// One round of the iterated solver.
struct IterationRecord {
  double decoded = 0.0;   // subproblem solution in [-d, 2c - d)
  int offset = 0;         // power-of-two rescale applied this round
  double step = 0.0;      // contribution 2^offset * decoded
  double residual = 0.0;  // dividend remaining after the step
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  double x = 0.0;            // accumulated solution, sum of steps
  double final_error = 0.0;  // |last residual|
  bool converged = false;

  int iterations() const { return static_cast<int>(records.size()); }
};

// Repeatedly solves m * dx = residual * 2^{-offset} with the offset chosen by
// exponent_offset so the scaled ratio is always representable, accumulating
// x += 2^offset * dx until |residual| <= tol * max(1, |y|) or max_iter rounds.
// A zero dividend converges immediately with no records.
IterationTrace iterate_division(double y, double m, double tol, int max_iter,
                                const GroundSolver& solver = brute_force_solver(),
                                const BinaryEncoding& enc = {});

}  // namespace qlin
