#include "qlin/chimera.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qlin {

namespace {

void add_edge(ChimeraGraph& g, int a, int b) {
  g.edges.emplace_back(std::min(a, b), std::max(a, b));
}

std::string chain_name(int v) { return "L" + std::to_string(v); }

}  // namespace

bool ChimeraGraph::has_edge(int a, int b) const {
  if (a == b) return false;
  const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
  return std::binary_search(edges.begin(), edges.end(), key);
}

ChimeraGraph build_chimera(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be positive");
  ChimeraGraph g;
  g.rows = rows;
  g.cols = cols;
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      for (int a = 0; a < 4; ++a)
        for (int b = 4; b < 8; ++b) add_edge(g, g.qubit_id(row, col, a), g.qubit_id(row, col, b));
      if (row + 1 < rows)
        for (int k = 0; k < 4; ++k)
          add_edge(g, g.qubit_id(row, col, k), g.qubit_id(row + 1, col, k));
      if (col + 1 < cols)
        for (int k = 4; k < 8; ++k)
          add_edge(g, g.qubit_id(row, col, k), g.qubit_id(row, col + 1, k));
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.adjacency.resize(g.num_qubits());
  for (const auto& [a, b] : g.edges) {
    g.adjacency[a].push_back(b);
    g.adjacency[b].push_back(a);
  }
  for (auto& list : g.adjacency) std::sort(list.begin(), list.end());
  return g;
}

int Embedding::num_physical() const {
  int total = 0;
  for (const auto& chain : chains) total += static_cast<int>(chain.size());
  return total;
}

int Embedding::max_chain_length() const {
  int longest = 0;
  for (const auto& chain : chains) longest = std::max(longest, static_cast<int>(chain.size()));
  return longest;
}

Embedding embed_complete_graph(int n, const ChimeraGraph& graph) {
  if (n < 1) throw std::invalid_argument("need at least one logical variable");
  Embedding embedding;
  if (n <= 4) {
    static const std::vector<std::vector<int>> cell_pattern = {{4}, {1}, {0, 5}, {2, 7}};
    embedding.chains.assign(cell_pattern.begin(), cell_pattern.begin() + n);
    return embedding;
  }
  const int t = (n + 3) / 4;
  if (graph.rows < t || graph.cols < t)
    throw std::invalid_argument("graph too small: K_" + std::to_string(n) + " needs a " +
                                std::to_string(t) + "x" + std::to_string(t) + " cell block");
  for (int v = 0; v < n; ++v) {
    const int a = v / 4;
    const int b = v % 4;
    std::vector<int> chain;
    for (int col = 0; col <= a; ++col) chain.push_back(graph.qubit_id(a, col, 4 + b));
    for (int row = a; row < t; ++row) chain.push_back(graph.qubit_id(row, a, b));
    embedding.chains.push_back(std::move(chain));
  }
  return embedding;
}

EmbeddingReport verify_embedding(const Embedding& embedding, const QuboModel& logical,
                                 const ChimeraGraph& graph) {
  EmbeddingReport report;
  auto complain = [&](const std::string& text) { report.violations.push_back(text); };

  if (embedding.num_logical() < logical.num_vars)
    complain("embedding has " + std::to_string(embedding.num_logical()) + " chains for " +
             std::to_string(logical.num_vars) + " logical variables");

  std::set<int> used;
  for (int v = 0; v < embedding.num_logical(); ++v) {
    const auto& chain = embedding.chains[v];
    if (chain.empty()) {
      complain(chain_name(v) + ": empty chain");
      continue;
    }
    for (int q : chain) {
      if (q < 0 || q >= graph.num_qubits()) {
        complain(chain_name(v) + ": qubit " + std::to_string(q) + " outside the graph");
      } else if (!used.insert(q).second) {
        complain(chain_name(v) + ": qubit " + std::to_string(q) + " already used");
      }
    }
    // Connectivity of the chain's induced subgraph.
    std::set<int> members(chain.begin(), chain.end());
    std::vector<int> frontier{chain.front()};
    std::set<int> seen{chain.front()};
    while (!frontier.empty()) {
      const int q = frontier.back();
      frontier.pop_back();
      if (q < 0 || q >= graph.num_qubits()) continue;
      for (int peer : graph.adjacency[q])
        if (members.count(peer) && seen.insert(peer).second) frontier.push_back(peer);
    }
    if (seen.size() != members.size()) complain(chain_name(v) + ": chain is not connected");
  }

  for (const auto& [pair, value] : logical.couplings) {
    (void)value;
    const auto [u, w] = pair;
    if (u >= embedding.num_logical() || w >= embedding.num_logical()) continue;
    bool reachable = false;
    for (int a : embedding.chains[u]) {
      for (int b : embedding.chains[w])
        if (graph.has_edge(a, b)) {
          reachable = true;
          break;
        }
      if (reachable) break;
    }
    if (!reachable)
      complain("no physical edge for logical coupling " + chain_name(u) + "-" + chain_name(w));
  }
  return report;
}

EmbeddedModel embed_hamiltonian(const QuboModel& logical, const Embedding& embedding,
                                const ChimeraGraph& graph, ChainPenalty penalty) {
  if (penalty.alpha < 0.0) throw std::invalid_argument("chain penalty must be nonnegative");
  if (embedding.num_logical() < logical.num_vars)
    throw std::invalid_argument("embedding covers fewer chains than logical variables");
  const EmbeddingReport report = verify_embedding(embedding, logical, graph);
  if (!report.ok()) throw std::invalid_argument("invalid embedding: " + report.violations.front());

  EmbeddedModel out;
  std::map<int, int> qubit_to_var;
  for (int v = 0; v < logical.num_vars; ++v) {
    std::vector<int> compact;
    for (int q : embedding.chains[v]) {
      qubit_to_var.emplace(q, static_cast<int>(out.var_to_qubit.size()));
      compact.push_back(qubit_to_var.at(q));
      out.var_to_qubit.push_back(q);
    }
    out.chains.push_back(std::move(compact));
  }

  out.model = QuboModel(static_cast<int>(out.var_to_qubit.size()));
  for (int v = 0; v < logical.num_vars; ++v) {
    const auto& chain = out.chains[v];
    const double n = static_cast<double>(chain.size());
    for (int var : chain)
      out.model.weights[var] = logical.weights[v] / n + 2.0 * (n - 1.0) * penalty.alpha / n;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const int a = out.var_to_qubit[chain[i]];
      const int b = out.var_to_qubit[chain[i + 1]];
      if (!graph.has_edge(a, b))
        throw std::invalid_argument("chain for " + chain_name(v) + " is not a path in list order");
      if (penalty.alpha != 0.0) out.model.add_coupling(chain[i], chain[i + 1], -penalty.alpha);
    }
  }

  for (const auto& [pair, value] : logical.couplings) {
    const auto [u, w] = pair;
    std::pair<int, int> slot{-1, -1};
    for (int a : embedding.chains[u])
      for (int b : embedding.chains[w]) {
        if (!graph.has_edge(a, b)) continue;
        const std::pair<int, int> candidate{std::min(a, b), std::max(a, b)};
        if (slot.first < 0 || candidate < slot) slot = candidate;
      }
    // verify_embedding above guarantees slot is set.
    out.model.add_coupling(qubit_to_var.at(slot.first), qubit_to_var.at(slot.second), value);
  }
  return out;
}

std::vector<int> detect_broken_chains(const BinaryState& state,
                                      const std::vector<std::vector<int>>& chains) {
  std::vector<int> broken;
  for (std::size_t v = 0; v < chains.size(); ++v) {
    const auto& chain = chains[v];
    if (chain.empty()) continue;
    const std::uint8_t first = state.at(chain.front());
    for (int q : chain)
      if (state.at(q) != first) {
        broken.push_back(static_cast<int>(v));
        break;
      }
  }
  return broken;
}

UnembedResult unembed(const BinaryState& physical, const std::vector<std::vector<int>>& chains,
                      UnembedPolicy policy) {
  UnembedResult result;
  result.broken = detect_broken_chains(physical, chains);
  if (policy == UnembedPolicy::kDiscard && !result.broken.empty()) {
    result.rejected = true;
    return result;
  }
  result.state.resize(chains.size());
  for (std::size_t v = 0; v < chains.size(); ++v) {
    const auto& chain = chains[v];
    int ones = 0;
    for (int q : chain) ones += physical.at(q);
    const int zeros = static_cast<int>(chain.size()) - ones;
    result.state[v] = static_cast<std::uint8_t>(ones > zeros ? 1 : 0);  // tie -> 0
  }
  return result;
}

std::string embedding_to_string(const Embedding& embedding) {
  std::ostringstream out;
  for (int v = 0; v < embedding.num_logical(); ++v) {
    out << chain_name(v) << ':';
    for (int q : embedding.chains[v]) out << ' ' << q;
    out << '\n';
  }
  return out.str();
}

}  // namespace qlin
