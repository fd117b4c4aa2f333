#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qlin {

// One binary assignment, bits[0] being the most significant digit when the
// state is read as an integer.
using BinaryState = std::vector<std::uint8_t>;

std::uint64_t state_to_index(const BinaryState& state);
BinaryState index_to_state(std::uint64_t index, int num_vars);
std::string format_bits(const BinaryState& state);  // e.g. "0101"

// Quadratic model over binary variables.  The energy convention counts every
// unordered pair twice with the stored ordered-pair coefficient:
//
//   E(q) = sum_r weights[r] q_r + sum_{r != s} coupling(r,s) q_r q_s
//
// so a stored coupling b contributes 2*b when both endpoints are 1.  The
// constant is bookkeeping (completes an external objective) and is never part
// of the reported energy.  `scale` records the divisor applied by
// scale_by_max_coupling; coefficients of a scaled model are already divided.
struct QuboModel {
  int num_vars = 0;
  std::vector<double> weights;
  std::map<std::pair<int, int>, double> couplings;  // keyed (min,max), distinct pairs only
  double constant = 0.0;
  double scale = 1.0;

  QuboModel() = default;
  explicit QuboModel(int n) : num_vars(n), weights(n, 0.0) {}

  double coupling(int a, int b) const;            // 0 when absent
  void set_coupling(int a, int b, double value);  // overwrite
  void add_coupling(int a, int b, double value);  // accumulate
  double max_abs_coefficient() const;             // over weights and couplings
};

double energy(const QuboModel& model, const BinaryState& state);

// Spin formulation over J = Q - 1/2 (spins are +-1/2).  ising_energy uses the
// same convention as energy(): pair terms counted twice, constant excluded.
struct IsingModel {
  int num_vars = 0;
  std::vector<double> fields;
  std::map<std::pair<int, int>, double> spin_couplings;
  double constant = 0.0;
};

IsingModel to_ising(const QuboModel& model);
double ising_energy(const IsingModel& model, const BinaryState& state);

// Divides all coefficients and the constant by lambda = max |coupling| over
// distinct pairs and records lambda in `scale`.  A model with no couplings is
// returned unchanged (scale 1); `no_couplings`, when given, reports that case.
QuboModel scale_by_max_coupling(const QuboModel& model, bool* no_couplings = nullptr);

// Full exhaustive spectrum, levels sorted by energy with ties in increasing
// state-integer order.  Refuses num_vars > max_vars.
struct Spectrum {
  int num_vars = 0;
  std::vector<std::pair<std::uint32_t, double>> levels;  // (state index, energy)

  double ground_energy() const { return levels.front().second; }
  double first_excited_energy() const { return levels[1].second; }
  double max_energy() const;  // max over levels (they are sorted)
  BinaryState state_at(std::size_t level) const;
};

inline constexpr int kBruteForceMaxVars = 24;

// All 2^n energies indexed by state integer, computed by an incremental
// Gray-order walk (one coefficient row per step).  Spectrum and Gray
// projections both read from this, so their values agree bitwise.
std::vector<double> enumerate_all_energies(const QuboModel& model,
                                           int max_vars = kBruteForceMaxVars);

Spectrum brute_force_solve(const QuboModel& model, int max_vars = kBruteForceMaxVars);

// Ground state only; same enumeration order and tie-break as the spectrum but
// without materialising 2^n energies.
std::pair<BinaryState, double> find_ground_state(const QuboModel& model,
                                                 int max_vars = kBruteForceMaxVars);

// Anything that can map a model to (state, energy); lets the linear-system and
// division layers swap brute force for the annealing sampler.
using GroundSolver = std::function<std::pair<BinaryState, double>(const QuboModel&)>;

GroundSolver brute_force_solver(int max_vars = kBruteForceMaxVars);

// Text form: header line `n`, then `w <index> <value>` and `c <i> <j> <value>`
// lines, plus `k <value>` / `s <value>` for a nonzero constant or non-unit
// scale, all at 17 significant digits (lossless round trip).  `#` starts a
// comment.
void save_qubo(std::ostream& out, const QuboModel& model);
QuboModel load_qubo(std::istream& in);
std::string qubo_to_string(const QuboModel& model);
QuboModel qubo_from_string(const std::string& text);

}  // namespace qlin
