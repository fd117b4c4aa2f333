#pragma once

#include "qlin/qubo.hpp"

#include <string>
#include <vector>

namespace qlin {

// Chimera hardware graph: a rows x cols grid of 8-qubit bipartite cells.
// Qubit id = 8 * (row * cols + col) + k.  Within a cell, shores {0..3} and
// {4..7} are fully connected (16 edges).  Shore 0..3 qubits couple to the same
// k in the cell below (across rows); shore 4..7 couple to the same k in the
// cell to the right (across cols).
struct ChimeraGraph {
  int rows = 0;
  int cols = 0;
  std::vector<std::pair<int, int>> edges;   // sorted, a < b
  std::vector<std::vector<int>> adjacency;  // sorted neighbour lists

  int num_qubits() const { return 8 * rows * cols; }
  int qubit_id(int row, int col, int k) const { return 8 * (row * cols + col) + k; }
  bool has_edge(int a, int b) const;
};

ChimeraGraph build_chimera(int rows, int cols);

// chains[v] is the ordered path of physical qubits holding logical variable v.
struct Embedding {
  std::vector<std::vector<int>> chains;

  int num_logical() const { return static_cast<int>(chains.size()); }
  int num_physical() const;
  int max_chain_length() const;
};

// Complete-graph embedding.  n <= 4 fits one cell with the fixed pattern
// {4}, {1}, {0,5}, {2,7}; larger n uses the triangular clique layout on
// t = ceil(n/4) rows/cols of cells: logical v = 4a + b follows horizontal
// qubits (shore offset 4 + b) through cells (a, 0..a), then vertical qubits
// (shore offset b) through cells (a..t-1, a), a path of t + 1 qubits meeting
// itself at cell (a, a).  Requires graph dimensions >= t.
Embedding embed_complete_graph(int n, const ChimeraGraph& graph);

struct EmbeddingReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks chain coverage of the model's variables, in-range ids, vertex
// disjointness, chain connectivity (induced subgraph), and that every logical
// coupling has at least one physical edge between its two chains.
EmbeddingReport verify_embedding(const Embedding& embedding, const QuboModel& logical,
                                 const ChimeraGraph& graph);

// Chain counter-terms: each qubit of an N-qubit chain for variable t carries
// weight A_t/N + 2(N-1)alpha/N, and consecutive chain qubits couple with
// -alpha.  An intact chain then reproduces A_t exactly (the 2(N-1)alpha/N
// weights cancel against the N-1 bonds), and the cheapest chain break costs
// 2*alpha/N.  alpha = 0 disables the penalty (diagnostic use); negative alpha
// is invalid.
struct ChainPenalty {
  double alpha = 20.0;
};

// Physical model restricted to the qubits the embedding uses.  Variable i of
// `model` corresponds to physical qubit var_to_qubit[i]; `chains` re-indexes
// the embedding into that compact space.
struct EmbeddedModel {
  QuboModel model;
  std::vector<int> var_to_qubit;
  std::vector<std::vector<int>> chains;
};

// Maps a logical model through an embedding: chain weights and counter-terms
// as above, and each logical coupling placed on the lexicographically first
// physical edge between the two chains.
EmbeddedModel embed_hamiltonian(const QuboModel& logical, const Embedding& embedding,
                                const ChimeraGraph& graph, ChainPenalty penalty);

// Indices of chains whose qubits disagree in `state` (state indexed like the
// ids stored in `chains`).
std::vector<int> detect_broken_chains(const BinaryState& state,
                                      const std::vector<std::vector<int>>& chains);

enum class UnembedPolicy { kDiscard, kMajority };

struct UnembedResult {
  bool rejected = false;       // discard policy and at least one break
  BinaryState state;           // logical state (empty when rejected)
  std::vector<int> broken;     // chains that disagreed
};

// kDiscard rejects any broken sample; kMajority takes the majority value per
// chain, ties (even splits) resolving to 0.
UnembedResult unembed(const BinaryState& physical, const std::vector<std::vector<int>>& chains,
                      UnembedPolicy policy);

// One line per logical variable: "L<v>: q0 q1 ...".
std::string embedding_to_string(const Embedding& embedding);

}  // namespace qlin
