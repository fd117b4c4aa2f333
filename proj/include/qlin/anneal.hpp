#pragma once

#include "qlin/chimera.hpp"
#include "qlin/qubo.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qlin {

// Single-bit-flip Metropolis annealing with a geometric temperature schedule.
// Temperatures <= 0 auto-derive from the model: t_hot = 10 * max |coefficient|,
// t_cold = 0.01 * min nonzero |coefficient| (fallback 1.0 / 0.1 for an
// all-zero model).  Each read seeds its own generator from
// splitmix64(seed ^ read_index), so results are deterministic and the first k
// reads of a larger run are exactly the k-read run.
struct SamplerConfig {
  int reads = 100;
  int sweeps = 1000;
  double t_hot = 0.0;
  double t_cold = 0.0;
  std::uint64_t seed = 12345;
};

struct SampleRow {
  BinaryState state;
  double energy = 0.0;
  int count = 0;
  bool broken = false;  // only set by embedded sampling
};

struct SampleSet {
  std::vector<SampleRow> rows;  // sorted by energy, ties by state integer
  int total_reads = 0;

  const SampleRow& best() const { return rows.front(); }
  bool empty() const { return rows.empty(); }
};

SampleSet sample(const QuboModel& model, const SamplerConfig& config);

// CSV schema: state,energy,count,broken
void write_sample_csv(std::ostream& out, const SampleSet& samples);

// Embeds the logical model (as given, unscaled) on the graph with chain
// penalty alpha, anneals the physical model, and unembeds each read under the
// policy.  With kDiscard, broken reads are dropped from `logical`; a run where
// every read broke leaves `logical` empty (the broken-chain outcome).
struct EmbeddedSampleResult {
  SampleSet logical;
  Embedding embedding;
  int reads = 0;
  int broken_reads = 0;

  double break_fraction() const { return reads ? double(broken_reads) / reads : 0.0; }
  bool all_broken() const { return reads > 0 && broken_reads == reads; }
};

EmbeddedSampleResult sample_embedded(const QuboModel& logical, const ChimeraGraph& graph,
                                     double alpha, const SamplerConfig& config,
                                     UnembedPolicy policy = UnembedPolicy::kDiscard);

// GroundSolver adapter: returns the best sampled row; throws on an empty
// sample set.
GroundSolver annealing_solver(const SamplerConfig& config);

}  // namespace qlin
