#include "qlin/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <utility>

namespace qlin {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Schedule {
  double t_hot;
  double t_cold;
};

Schedule resolve_schedule(const QuboModel& model, const SamplerConfig& config) {
  double t_hot = config.t_hot;
  double t_cold = config.t_cold;
  if (t_hot <= 0.0 || t_cold <= 0.0) {
    double max_abs = 0.0;
    double min_abs = 0.0;
    for (double w : model.weights)
      if (w != 0.0) {
        max_abs = std::max(max_abs, std::abs(w));
        min_abs = min_abs == 0.0 ? std::abs(w) : std::min(min_abs, std::abs(w));
      }
    for (const auto& [pair, value] : model.couplings) {
      (void)pair;
      if (value != 0.0) {
        max_abs = std::max(max_abs, std::abs(value));
        min_abs = min_abs == 0.0 ? std::abs(value) : std::min(min_abs, std::abs(value));
      }
    }
    if (max_abs == 0.0) {  // all-zero model: flat landscape, any schedule works
      max_abs = 0.1;
      min_abs = 10.0;
    }
    if (t_hot <= 0.0) t_hot = 10.0 * max_abs;
    if (t_cold <= 0.0) t_cold = 0.01 * min_abs;
  }
  if (!(t_hot > 0.0) || !(t_cold > 0.0) || t_cold > t_hot)
    throw std::invalid_argument("invalid schedule: need t_hot >= t_cold > 0");
  return {t_hot, t_cold};
}

struct FlipRows {
  std::vector<int> offsets;
  std::vector<int> neighbor;
  std::vector<double> twice_coupling;
};

FlipRows build_rows(const QuboModel& m) {
  FlipRows rows;
  std::vector<int> degree(m.num_vars, 0);
  for (const auto& [pair, value] : m.couplings) {
    (void)value;
    ++degree[pair.first];
    ++degree[pair.second];
  }
  rows.offsets.assign(m.num_vars + 1, 0);
  std::partial_sum(degree.begin(), degree.end(), rows.offsets.begin() + 1);
  rows.neighbor.resize(rows.offsets.back());
  rows.twice_coupling.resize(rows.offsets.back());
  std::vector<int> fill(m.num_vars, 0);
  for (const auto& [pair, value] : m.couplings) {
    auto [a, b] = pair;
    int ia = rows.offsets[a] + fill[a]++;
    int ib = rows.offsets[b] + fill[b]++;
    rows.neighbor[ia] = b;
    rows.twice_coupling[ia] = 2.0 * value;
    rows.neighbor[ib] = a;
    rows.twice_coupling[ib] = 2.0 * value;
  }
  return rows;
}

BinaryState anneal_one_read(const QuboModel& model, const FlipRows& rows,
                            const Schedule& schedule, const SamplerConfig& config,
                            std::uint64_t read_index) {
  std::mt19937_64 rng(splitmix64(config.seed ^ read_index));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int n = model.num_vars;
  BinaryState q(n);
  for (int v = 0; v < n; ++v) q[v] = static_cast<std::uint8_t>(rng() & 1u);
  const double ratio = schedule.t_cold / schedule.t_hot;
  const double denom = std::max(1, config.sweeps - 1);
  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    const double temperature = schedule.t_hot * std::pow(ratio, sweep / denom);
    for (int v = 0; v < n; ++v) {
      double delta = model.weights[v];
      for (int e = rows.offsets[v]; e < rows.offsets[v + 1]; ++e)
        delta += rows.twice_coupling[e] * q[rows.neighbor[e]];
      if (q[v]) delta = -delta;
      if (delta <= 0.0 || uniform(rng) < std::exp(-delta / temperature)) q[v] ^= 1u;
    }
  }
  return q;
}

std::vector<BinaryState> run_reads(const QuboModel& model, const SamplerConfig& config) {
  if (model.num_vars < 1) throw std::invalid_argument("model has no variables");
  if (config.reads < 1 || config.sweeps < 1)
    throw std::invalid_argument("reads and sweeps must be positive");
  const Schedule schedule = resolve_schedule(model, config);
  const FlipRows rows = build_rows(model);
  std::vector<BinaryState> reads;
  reads.reserve(config.reads);
  for (int read = 0; read < config.reads; ++read)
    reads.push_back(anneal_one_read(model, rows, schedule, config, std::uint64_t(read)));
  return reads;
}

void sort_rows(SampleSet& set) {
  std::sort(set.rows.begin(), set.rows.end(), [](const SampleRow& a, const SampleRow& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.state != b.state) return a.state < b.state;  // MSB-first = integer order
    return a.broken < b.broken;
  });
}

}  // namespace

SampleSet sample(const QuboModel& model, const SamplerConfig& config) {
  std::map<BinaryState, int> tally;
  for (BinaryState& state : run_reads(model, config)) ++tally[std::move(state)];
  SampleSet set;
  set.total_reads = config.reads;
  for (const auto& [state, count] : tally) {
    SampleRow row;
    row.state = state;
    row.energy = energy(model, state);
    row.count = count;
    set.rows.push_back(std::move(row));
  }
  sort_rows(set);
  return set;
}

void write_sample_csv(std::ostream& out, const SampleSet& samples) {
  out << "state,energy,count,broken\n" << std::setprecision(17);
  for (const SampleRow& row : samples.rows)
    out << format_bits(row.state) << ',' << row.energy << ',' << row.count << ','
        << (row.broken ? 1 : 0) << '\n';
}

EmbeddedSampleResult sample_embedded(const QuboModel& logical, const ChimeraGraph& graph,
                                     double alpha, const SamplerConfig& config,
                                     UnembedPolicy policy) {
  EmbeddedSampleResult result;
  result.embedding = embed_complete_graph(logical.num_vars, graph);
  const EmbeddedModel embedded =
      embed_hamiltonian(logical, result.embedding, graph, ChainPenalty{alpha});
  result.reads = config.reads;

  std::map<std::pair<BinaryState, bool>, int> tally;
  int kept = 0;
  for (const BinaryState& physical : run_reads(embedded.model, config)) {
    const UnembedResult read = unembed(physical, embedded.chains, policy);
    const bool broke = !read.broken.empty();
    if (broke) ++result.broken_reads;
    if (read.rejected) continue;
    ++kept;
    ++tally[{read.state, broke}];
  }
  result.logical.total_reads = kept;
  for (const auto& [key, count] : tally) {
    SampleRow row;
    row.state = key.first;
    row.energy = energy(logical, key.first);
    row.count = count;
    row.broken = key.second;
    result.logical.rows.push_back(std::move(row));
  }
  sort_rows(result.logical);
  return result;
}

GroundSolver annealing_solver(const SamplerConfig& config) {
  return [config](const QuboModel& model) -> std::pair<BinaryState, double> {
    const SampleSet set = sample(model, config);
    if (set.empty()) throw std::runtime_error("sampler returned no samples");
    return {set.best().state, set.best().energy};
  };
}

}  // namespace qlin
