#include "qlin/landscape.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace qlin {

std::vector<BinaryState> gray_sequence(int n) {
  if (n < 1 || n > kBruteForceMaxVars) throw std::invalid_argument("bad variable count");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<BinaryState> sequence;
  sequence.reserve(total);
  for (std::uint64_t g = 0; g < total; ++g) sequence.push_back(index_to_state(g ^ (g >> 1), n));
  return sequence;
}

GrayProjection gray_projection(const QuboModel& model) {
  const std::vector<double> by_state = enumerate_all_energies(model);
  GrayProjection projection;
  projection.num_vars = model.num_vars;
  const std::uint64_t total = std::uint64_t{1} << model.num_vars;
  projection.states.reserve(total);
  projection.energies.reserve(total);
  for (std::uint64_t g = 0; g < total; ++g) {
    const std::uint64_t state = g ^ (g >> 1);
    projection.states.push_back(static_cast<std::uint32_t>(state));
    projection.energies.push_back(by_state[state]);
  }
  return projection;
}

void write_gray_csv(std::ostream& out, const GrayProjection& projection) {
  out << "gray_index,bits,energy\n" << std::setprecision(17);
  for (std::size_t g = 0; g < projection.states.size(); ++g)
    out << g << ',' << format_bits(index_to_state(projection.states[g], projection.num_vars))
        << ',' << projection.energies[g] << '\n';
}

DegeneracyReport degeneracy_report(const QuboModel& model, double window) {
  if (window < 0.0) throw std::invalid_argument("window must be non-negative");
  const Spectrum spectrum = brute_force_solve(model);
  DegeneracyReport report;
  report.ground_energy = spectrum.ground_energy();
  report.first_excited_energy = spectrum.first_excited_energy();
  report.gap = report.first_excited_energy - report.ground_energy;
  report.window = window;
  const double cutoff = report.ground_energy + window;
  for (const auto& [state, e] : spectrum.levels) {
    if (e > cutoff) break;  // levels are sorted
    ++report.near_ground_count;
  }
  return report;
}

double fractional_window(const Spectrum& spectrum, double fraction) {
  if (fraction < 0.0) throw std::invalid_argument("fraction must be non-negative");
  return fraction * (spectrum.max_energy() - spectrum.ground_energy());
}

LandscapeOverlay compare_embedded_landscape(const QuboModel& logical, const Embedding& embedding,
                                            const ChimeraGraph& graph, double alpha) {
  const EmbeddedModel full = embed_hamiltonian(logical, embedding, graph, ChainPenalty{alpha});

  // Same chains and bonds but without the per-qubit weight compensation, so
  // every chain set to 1 keeps its uncancelled -alpha bonds.
  QuboModel bare = full.model;
  for (const auto& chain : full.chains) {
    const double n = static_cast<double>(chain.size());
    for (int q : chain) bare.weights[q] -= 2.0 * (n - 1.0) * alpha / n;
  }

  LandscapeOverlay overlay;
  for (const BinaryState& state : gray_sequence(logical.num_vars)) {
    BinaryState physical(full.model.num_vars, 0);
    for (int v = 0; v < logical.num_vars; ++v)
      for (int q : full.chains[v]) physical[q] = state[v];
    overlay.states.push_back(static_cast<std::uint32_t>(state_to_index(state)));
    overlay.logical.push_back(energy(logical, state));
    overlay.embedded.push_back(energy(full.model, physical));
    overlay.no_counter_weight.push_back(energy(bare, physical));
  }
  return overlay;
}

void write_overlay_csv(std::ostream& out, const LandscapeOverlay& overlay) {
  out << "gray_index,bits,logical,embedded,no_counter_weight\n" << std::setprecision(17);
  const int n = overlay.states.empty()
                    ? 0
                    : static_cast<int>(std::log2(static_cast<double>(overlay.states.size())) + 0.5);
  for (std::size_t g = 0; g < overlay.states.size(); ++g)
    out << g << ',' << format_bits(index_to_state(overlay.states[g], n)) << ','
        << overlay.logical[g] << ',' << overlay.embedded[g] << ',' << overlay.no_counter_weight[g]
        << '\n';
}

}  // namespace qlin
