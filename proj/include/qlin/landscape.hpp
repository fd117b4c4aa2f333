#pragma once

#include "qlin/chimera.hpp"
#include "qlin/qubo.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qlin {

// Reflected binary Gray code as n-bit states (bits[0] = MSB): entry g is the
// binary expansion of g ^ (g >> 1).  Consecutive entries differ in exactly one
// bit, including the wrap-around.  n up to kBruteForceMaxVars.
std::vector<BinaryState> gray_sequence(int n);

// The model's energies visited in Gray order; a permutation of the exhaustive
// spectrum (identical values, identical multiplicities).
struct GrayProjection {
  int num_vars = 0;
  std::vector<std::uint32_t> states;  // state integer at each Gray position
  std::vector<double> energies;
};

GrayProjection gray_projection(const QuboModel& model);

// CSV schema: gray_index,bits,energy
void write_gray_csv(std::ostream& out, const GrayProjection& projection);

// Count of states with E <= E0 + window.  window = 0 counts the exact ground
// multiplicity.
struct DegeneracyReport {
  double ground_energy = 0.0;
  double first_excited_energy = 0.0;
  double gap = 0.0;
  double window = 0.0;
  std::uint64_t near_ground_count = 0;
};

DegeneracyReport degeneracy_report(const QuboModel& model, double window);

// Absolute window spanning `fraction` of the spectral range (E_max - E_0).
double fractional_window(const Spectrum& spectrum, double fraction);

// Logical landscape against the embedded one, evaluated on intact chain
// states in logical Gray order.  `embedded` uses the full counter-terms (it
// must equal `logical` exactly); `no_counter_weight` drops the 2(N-1)alpha/N
// weight compensation while keeping the -alpha bonds, showing the
// state-dependent offsets the compensation exists to cancel.
struct LandscapeOverlay {
  std::vector<std::uint32_t> states;
  std::vector<double> logical;
  std::vector<double> embedded;
  std::vector<double> no_counter_weight;
};

LandscapeOverlay compare_embedded_landscape(const QuboModel& logical, const Embedding& embedding,
                                            const ChimeraGraph& graph, double alpha);

// CSV schema: gray_index,bits,logical,embedded,no_counter_weight
void write_overlay_csv(std::ostream& out, const LandscapeOverlay& overlay);

}  // namespace qlin
