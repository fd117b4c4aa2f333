#include "qlin/division.hpp"

#include <cmath>
#include <stdexcept>

namespace qlin {

QuboModel build_division_qubo(const DivisionProblem& p) {
  if (!p.enc.admissible()) throw std::invalid_argument("inadmissible encoding");
  if (p.m == 0.0 || !std::isfinite(p.m) || !std::isfinite(p.y))
    throw std::invalid_argument("divisor must be finite and nonzero");
  const int R = p.enc.resolution;
  const double mc = p.m * p.enc.c;
  const double t = p.m * p.enc.d + p.y;
  QuboModel model(R);
  for (int r = 0; r < R; ++r) {
    const double pr = mc * std::ldexp(1.0, -r);
    model.weights[r] = pr * (pr - 2.0 * t);
  }
  for (int r = 0; r < R; ++r)
    for (int s = r + 1; s < R; ++s)
      model.set_coupling(r, s, mc * mc * std::ldexp(1.0, -(r + s)));
  model.constant = t * t;
  return model;
}

DivisionResult solve_division(const DivisionProblem& p, const GroundSolver& solver) {
  const QuboModel scaled = scale_by_max_coupling(build_division_qubo(p));
  auto [bits, scaled_energy] = solver(scaled);
  DivisionResult result;
  result.bits = std::move(bits);
  result.scaled_energy = scaled_energy;
  result.x = decode(result.bits, p.enc);
  result.raw_objective = (p.m * result.x - p.y) * (p.m * result.x - p.y);
  return result;
}

IterationTrace iterate_division(double y, double m, double tol, int max_iter,
                                const GroundSolver& solver, const BinaryEncoding& enc) {
  if (m == 0.0 || !std::isfinite(m) || !std::isfinite(y))
    throw std::invalid_argument("divisor must be finite and nonzero");
  if (tol <= 0.0 || max_iter < 1) throw std::invalid_argument("bad tolerance or iteration cap");
  IterationTrace trace;
  const double stop = tol * std::max(1.0, std::abs(y));
  double residual = y;
  double x = 0.0;
  for (int round = 0; round < max_iter && std::abs(residual) > stop; ++round) {
    const ExponentOffset shift = exponent_offset(residual, m);
    // shift.exact_zero cannot trigger here: a zero residual already stopped.
    DivisionProblem sub{m, std::ldexp(residual, -shift.offset), enc};
    const DivisionResult partial = solve_division(sub, solver);
    IterationRecord record;
    record.decoded = partial.x;
    record.offset = shift.offset;
    record.step = std::ldexp(partial.x, shift.offset);
    residual -= m * record.step;
    record.residual = residual;
    x += record.step;
    trace.records.push_back(record);
  }
  trace.x = x;
  trace.final_error = std::abs(residual);
  trace.converged = trace.final_error <= stop;
  return trace;
}

}  // namespace qlin
