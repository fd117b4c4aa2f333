#include "qlin/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qlin {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

void check_pair(const QuboModel& m, int a, int b) {
  if (a == b) throw std::invalid_argument("coupling endpoints must be distinct");
  if (a < 0 || b < 0 || a >= m.num_vars || b >= m.num_vars)
    throw std::invalid_argument("coupling index out of range");
}

// Neighbour rows with premultiplied 2*b, for O(degree) flip deltas.
struct AdjacencyRows {
  std::vector<int> offsets;
  std::vector<int> neighbor;
  std::vector<double> twice_coupling;
};

AdjacencyRows build_rows(const QuboModel& m) {
  AdjacencyRows rows;
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

void check_enumerable(const QuboModel& m, int max_vars) {
  if (m.num_vars < 1) throw std::invalid_argument("model has no variables");
  int cap = std::min(max_vars, kBruteForceMaxVars);
  if (m.num_vars > cap)
    throw std::length_error("model too large for exhaustive enumeration (" +
                            std::to_string(m.num_vars) + " > " + std::to_string(cap) +
                            " variables); use the annealing sampler");
}

}  // namespace

std::uint64_t state_to_index(const BinaryState& state) {
  if (state.size() > 64) throw std::length_error("state too long for a 64-bit index");
  std::uint64_t index = 0;
  for (std::uint8_t bit : state) index = (index << 1) | (bit & 1u);
  return index;
}

BinaryState index_to_state(std::uint64_t index, int num_vars) {
  if (num_vars < 0 || num_vars > 64) throw std::invalid_argument("state width out of range");
  BinaryState state(num_vars);
  for (int r = 0; r < num_vars; ++r)
    state[r] = static_cast<std::uint8_t>((index >> (num_vars - 1 - r)) & 1u);
  return state;
}

std::string format_bits(const BinaryState& state) {
  std::string text(state.size(), '0');
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i]) text[i] = '1';
  return text;
}

double QuboModel::coupling(int a, int b) const {
  check_pair(*this, a, b);
  auto it = couplings.find(ordered(a, b));
  return it == couplings.end() ? 0.0 : it->second;
}

void QuboModel::set_coupling(int a, int b, double value) {
  check_pair(*this, a, b);
  couplings[ordered(a, b)] = value;
}

void QuboModel::add_coupling(int a, int b, double value) {
  check_pair(*this, a, b);
  couplings[ordered(a, b)] += value;
}

double QuboModel::max_abs_coefficient() const {
  double m = 0.0;
  for (double w : weights) m = std::max(m, std::abs(w));
  for (const auto& [pair, value] : couplings) {
    (void)pair;
    m = std::max(m, std::abs(value));
  }
  return m;
}

double energy(const QuboModel& model, const BinaryState& state) {
  if (static_cast<int>(state.size()) != model.num_vars)
    throw std::invalid_argument("state length does not match the model");
  double e = 0.0;
  for (int r = 0; r < model.num_vars; ++r)
    if (state[r]) e += model.weights[r];
  for (const auto& [pair, value] : model.couplings)
    if (state[pair.first] && state[pair.second]) e += 2.0 * value;
  return e;
}

IsingModel to_ising(const QuboModel& model) {
  IsingModel ising;
  ising.num_vars = model.num_vars;
  ising.fields = model.weights;
  ising.spin_couplings = model.couplings;
  ising.constant = model.constant;
  // Substituting Q = J + 1/2: pair terms leave b J_r J_s behind plus field and
  // constant shifts.
  for (const auto& [pair, value] : model.couplings) {
    ising.fields[pair.first] += value;
    ising.fields[pair.second] += value;
    ising.constant += value / 2.0;
  }
  for (double w : model.weights) ising.constant += w / 2.0;
  return ising;
}

double ising_energy(const IsingModel& model, const BinaryState& state) {
  if (static_cast<int>(state.size()) != model.num_vars)
    throw std::invalid_argument("state length does not match the model");
  auto spin = [&](int r) { return state[r] ? 0.5 : -0.5; };
  double e = 0.0;
  for (int r = 0; r < model.num_vars; ++r) e += model.fields[r] * spin(r);
  for (const auto& [pair, value] : model.spin_couplings)
    e += 2.0 * value * spin(pair.first) * spin(pair.second);
  return e;
}

QuboModel scale_by_max_coupling(const QuboModel& model, bool* no_couplings) {
  double lambda = 0.0;
  for (const auto& [pair, value] : model.couplings) {
    (void)pair;
    lambda = std::max(lambda, std::abs(value));
  }
  if (no_couplings) *no_couplings = (lambda == 0.0);
  if (lambda == 0.0) return model;
  QuboModel scaled = model;
  for (double& w : scaled.weights) w /= lambda;
  for (auto& [pair, value] : scaled.couplings) {
    (void)pair;
    value /= lambda;
  }
  scaled.constant /= lambda;
  scaled.scale = model.scale * lambda;
  return scaled;
}

std::vector<double> enumerate_all_energies(const QuboModel& model, int max_vars) {
  check_enumerable(model, max_vars);
  const int n = model.num_vars;
  const AdjacencyRows rows = build_rows(model);
  std::vector<double> energies(std::size_t{1} << n);
  std::vector<std::uint8_t> q(n, 0);
  double current = 0.0;
  std::uint32_t code = 0;
  energies[0] = 0.0;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t k = 1; k < total; ++k) {
    const int j = std::countr_zero(k);  // Gray walk flips this integer bit
    const int v = n - 1 - j;
    double delta = model.weights[v];
    for (int e = rows.offsets[v]; e < rows.offsets[v + 1]; ++e)
      delta += rows.twice_coupling[e] * q[rows.neighbor[e]];
    current += q[v] ? -delta : delta;
    q[v] ^= 1u;
    code ^= 1u << j;
    energies[code] = current;
  }
  return energies;
}

Spectrum brute_force_solve(const QuboModel& model, int max_vars) {
  std::vector<double> energies = enumerate_all_energies(model, max_vars);
  Spectrum spectrum;
  spectrum.num_vars = model.num_vars;
  spectrum.levels.resize(energies.size());
  for (std::uint32_t s = 0; s < energies.size(); ++s) spectrum.levels[s] = {s, energies[s]};
  std::sort(spectrum.levels.begin(), spectrum.levels.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second < b.second;
              return a.first < b.first;
            });
  return spectrum;
}

double Spectrum::max_energy() const { return levels.back().second; }

BinaryState Spectrum::state_at(std::size_t level) const {
  return index_to_state(levels.at(level).first, num_vars);
}

std::pair<BinaryState, double> find_ground_state(const QuboModel& model, int max_vars) {
  check_enumerable(model, max_vars);
  const int n = model.num_vars;
  const AdjacencyRows rows = build_rows(model);
  std::vector<std::uint8_t> q(n, 0);
  double current = 0.0;
  std::uint32_t code = 0;
  double best = 0.0;
  std::uint32_t best_code = 0;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t k = 1; k < total; ++k) {
    const int j = std::countr_zero(k);
    const int v = n - 1 - j;
    double delta = model.weights[v];
    for (int e = rows.offsets[v]; e < rows.offsets[v + 1]; ++e)
      delta += rows.twice_coupling[e] * q[rows.neighbor[e]];
    current += q[v] ? -delta : delta;
    q[v] ^= 1u;
    code ^= 1u << j;
    if (current < best || (current == best && code < best_code)) {
      best = current;
      best_code = code;
    }
  }
  BinaryState state = index_to_state(best_code, n);
  return {state, energy(model, state)};  // fresh evaluation, no walk drift
}

GroundSolver brute_force_solver(int max_vars) {
  return [max_vars](const QuboModel& model) { return find_ground_state(model, max_vars); };
}

void save_qubo(std::ostream& out, const QuboModel& model) {
  out << std::setprecision(17);
  out << model.num_vars << '\n';
  for (int r = 0; r < model.num_vars; ++r)
    if (model.weights[r] != 0.0) out << "w " << r << ' ' << model.weights[r] << '\n';
  for (const auto& [pair, value] : model.couplings)
    out << "c " << pair.first << ' ' << pair.second << ' ' << value << '\n';
  if (model.constant != 0.0) out << "k " << model.constant << '\n';
  if (model.scale != 1.0) out << "s " << model.scale << '\n';
}

QuboModel load_qubo(std::istream& in) {
  auto next_data_line = [&](std::string& line) {
    while (std::getline(in, line)) {
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      line = line.substr(start);
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_data_line(line)) throw std::runtime_error("empty model text");
  int n = 0;
  {
    std::istringstream header(line);
    if (!(header >> n) || n < 0) throw std::runtime_error("bad variable count: " + line);
  }
  QuboModel model(n);
  while (next_data_line(line)) {
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    if (tag == "w") {
      int r;
      double value;
      if (!(row >> r >> value) || r < 0 || r >= n)
        throw std::runtime_error("bad weight line: " + line);
      model.weights[r] = value;
    } else if (tag == "c") {
      int a, b;
      double value;
      if (!(row >> a >> b >> value)) throw std::runtime_error("bad coupling line: " + line);
      model.set_coupling(a, b, value);
    } else if (tag == "k") {
      if (!(row >> model.constant)) throw std::runtime_error("bad constant line: " + line);
    } else if (tag == "s") {
      if (!(row >> model.scale)) throw std::runtime_error("bad scale line: " + line);
    } else {
      throw std::runtime_error("unknown directive: " + line);
    }
  }
  return model;
}

std::string qubo_to_string(const QuboModel& model) {
  std::ostringstream out;
  save_qubo(out, model);
  return out.str();
}

QuboModel qubo_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_qubo(in);
}

}  // namespace qlin
