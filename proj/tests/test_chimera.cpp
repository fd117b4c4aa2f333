#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlin/chimera.hpp"
#include "qlin/qubo.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

using namespace qlin;

namespace {

QuboModel complete_model(int n, double value) {
  QuboModel model(n);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) model.set_coupling(a, b, value);
  return model;
}

}  // namespace

TEST_CASE("cell and lattice wiring") {
  const ChimeraGraph one = build_chimera(1, 1);
  CHECK(one.num_qubits() == 8);
  CHECK(one.edges.size() == 16);
  for (int a = 0; a < 4; ++a)
    for (int b = 4; b < 8; ++b) CHECK(one.has_edge(a, b));
  CHECK_FALSE(one.has_edge(0, 1));
  CHECK_FALSE(one.has_edge(4, 5));

  const ChimeraGraph grid = build_chimera(2, 2);
  CHECK(grid.num_qubits() == 32);
  CHECK(grid.edges.size() == 4 * 16 + 8 + 8);
  CHECK(grid.qubit_id(1, 0, 0) == 16);
  CHECK(grid.has_edge(0, 16));        // shore 0..3 couples across rows
  CHECK(grid.has_edge(4, 12));        // shore 4..7 couples across cols
  CHECK_FALSE(grid.has_edge(0, 8));   // vertical qubits do not couple across cols
  CHECK_FALSE(grid.has_edge(4, 20));  // horizontal qubits do not couple across rows

  const ChimeraGraph wide = build_chimera(3, 3);
  CHECK(wide.edges.size() == 9 * 16 + 24 + 24);
}

TEST_CASE("adjacency lists mirror the edge list") {
  const ChimeraGraph graph = build_chimera(2, 2);
  std::size_t degree_sum = 0;
  for (int q = 0; q < graph.num_qubits(); ++q) {
    degree_sum += graph.adjacency[q].size();
    CHECK(std::is_sorted(graph.adjacency[q].begin(), graph.adjacency[q].end()));
    for (int peer : graph.adjacency[q]) CHECK(graph.has_edge(q, peer));
  }
  CHECK(degree_sum == 2 * graph.edges.size());
}

TEST_CASE("single-cell complete graphs use the fixed pattern") {
  const ChimeraGraph one = build_chimera(1, 1);
  const Embedding k4 = embed_complete_graph(4, one);
  REQUIRE(k4.num_logical() == 4);
  CHECK(k4.chains[0] == std::vector<int>{4});
  CHECK(k4.chains[1] == std::vector<int>{1});
  CHECK(k4.chains[2] == std::vector<int>{0, 5});
  CHECK(k4.chains[3] == std::vector<int>{2, 7});
  CHECK(k4.max_chain_length() == 2);
  CHECK(k4.num_physical() == 6);

  const Embedding k2 = embed_complete_graph(2, one);
  CHECK(k2.chains == std::vector<std::vector<int>>{{4}, {1}});

  CHECK(verify_embedding(k4, complete_model(4, 1.0), one).ok());
}

TEST_CASE("larger complete graphs embed on the triangular layout") {
  const ChimeraGraph grid = build_chimera(2, 2);
  for (int n = 5; n <= 8; ++n) {
    const Embedding embedding = embed_complete_graph(n, grid);
    CAPTURE(n);
    REQUIRE(embedding.num_logical() == n);
    for (const auto& chain : embedding.chains) CHECK(chain.size() == 3);  // t + 1
    const EmbeddingReport report = verify_embedding(embedding, complete_model(n, -1.0), grid);
    CHECK(report.ok());
  }

  const ChimeraGraph wide = build_chimera(3, 3);
  const Embedding k12 = embed_complete_graph(12, wide);
  CHECK(k12.max_chain_length() == 4);
  CHECK(verify_embedding(k12, complete_model(12, 0.5), wide).ok());

  CHECK_THROWS_AS(embed_complete_graph(5, build_chimera(1, 1)), std::invalid_argument);
}

TEST_CASE("verification catches the standard violations") {
  const ChimeraGraph one = build_chimera(1, 1);
  const QuboModel two = complete_model(2, 1.0);

  CHECK_FALSE(verify_embedding(Embedding{{{4}}}, two, one).ok());           // missing chain
  CHECK_FALSE(verify_embedding(Embedding{{{4}, {99}}}, two, one).ok());     // out of range
  CHECK_FALSE(verify_embedding(Embedding{{{4}, {4}}}, two, one).ok());      // overlap
  CHECK_FALSE(verify_embedding(Embedding{{{0, 1}, {4}}}, two, one).ok());   // disconnected chain
  CHECK_FALSE(verify_embedding(Embedding{{{0}, {1}}}, two, one).ok());      // no coupler edge
  CHECK(verify_embedding(Embedding{{{0}, {4}}}, two, one).ok());
}

TEST_CASE("counter-term ladder of a two-qubit chain") {
  const ChimeraGraph one = build_chimera(1, 1);
  QuboModel logical(1);
  for (double alpha : {1.0, 3.0, 20.0}) {
    const EmbeddedModel embedded =
        embed_hamiltonian(logical, Embedding{{{0, 4}}}, one, ChainPenalty{alpha});
    const std::vector<double> spectrum = enumerate_all_energies(embedded.model);
    CHECK(spectrum[0] == 0.0);
    CHECK(spectrum[1] == doctest::Approx(alpha));
    CHECK(spectrum[2] == doctest::Approx(alpha));
    CHECK(spectrum[3] == doctest::Approx(0.0));
  }
}

TEST_CASE("counter-term ladder of a three-qubit chain") {
  const ChimeraGraph one = build_chimera(1, 1);
  QuboModel logical(1);
  for (double alpha : {1.0, 3.0, 20.0}) {
    const EmbeddedModel embedded =
        embed_hamiltonian(logical, Embedding{{{0, 4, 1}}}, one, ChainPenalty{alpha});
    const std::vector<double> spectrum = enumerate_all_energies(embedded.model);
    const std::vector<double> expected = {0.0,           4 * alpha / 3, 4 * alpha / 3,
                                          2 * alpha / 3, 4 * alpha / 3, 8 * alpha / 3,
                                          2 * alpha / 3, 0.0};
    REQUIRE(spectrum.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k)
      CHECK(spectrum[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("chain weight splits the logical weight and cancels when intact") {
  const ChimeraGraph one = build_chimera(1, 1);
  QuboModel logical(1);
  logical.weights[0] = 2.0;
  const EmbeddedModel embedded =
      embed_hamiltonian(logical, Embedding{{{0, 4}}}, one, ChainPenalty{5.0});
  CHECK(embedded.model.weights[0] == doctest::Approx(1.0 + 5.0));
  CHECK(embedded.model.coupling(0, 1) == doctest::Approx(-5.0));
  CHECK(energy(embedded.model, {1, 1}) == doctest::Approx(2.0));  // == logical weight
  CHECK(energy(embedded.model, {0, 0}) == 0.0);
}

TEST_CASE("logical couplings land on the first physical edge in id order") {
  const ChimeraGraph one = build_chimera(1, 1);
  QuboModel logical(2);
  logical.set_coupling(0, 1, -7.5);
  // Chains {0,5} and {2,7}: connecting edges are (0,7) and (2,5); (0,7) wins.
  const EmbeddedModel embedded =
      embed_hamiltonian(logical, Embedding{{{0, 5}, {2, 7}}}, one, ChainPenalty{0.0});
  // Compact ids follow first appearance: 0->0, 5->1, 2->2, 7->3.
  CHECK(embedded.var_to_qubit == std::vector<int>{0, 5, 2, 7});
  CHECK(embedded.model.coupling(0, 3) == doctest::Approx(-7.5));
  CHECK(embedded.model.couplings.count({1, 2}) == 0);
  CHECK(embedded.model.couplings.count({2, 3}) == 0);  // alpha 0: no chain bonds
}

TEST_CASE("intact chains reproduce the logical landscape exactly") {
  const ChimeraGraph one = build_chimera(1, 1);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    QuboModel logical(4);
    for (int i = 0; i < 4; ++i) logical.weights[i] = coeff(rng);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) logical.set_coupling(a, b, coeff(rng));
    const Embedding embedding = embed_complete_graph(4, one);
    const EmbeddedModel embedded =
        embed_hamiltonian(logical, embedding, one, ChainPenalty{25.0});
    for (std::uint64_t k = 0; k < 16; ++k) {
      const BinaryState state = index_to_state(k, 4);
      BinaryState physical(embedded.model.num_vars, 0);
      for (int v = 0; v < 4; ++v)
        for (int q : embedded.chains[v]) physical[q] = state[v];
      CHECK(energy(embedded.model, physical) ==
            doctest::Approx(energy(logical, state)).epsilon(1e-12));
    }
  }
}

TEST_CASE("embedding rejects invalid penalties and broken inputs") {
  const ChimeraGraph one = build_chimera(1, 1);
  QuboModel logical(1);
  CHECK_THROWS_AS(embed_hamiltonian(logical, Embedding{{{0, 4}}}, one, ChainPenalty{-1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(embed_hamiltonian(logical, Embedding{{{0, 1}}}, one, ChainPenalty{1.0}),
                  std::invalid_argument);
  QuboModel two(2);
  two.set_coupling(0, 1, 1.0);
  CHECK_THROWS_AS(embed_hamiltonian(two, Embedding{{{0}, {1}}}, one, ChainPenalty{1.0}),
                  std::invalid_argument);
}

TEST_CASE("broken-chain detection and unembedding policies") {
  const std::vector<std::vector<int>> chains = {{0, 1, 2}, {3, 4}};
  CHECK(detect_broken_chains({1, 1, 1, 0, 0}, chains).empty());
  CHECK(detect_broken_chains({1, 1, 0, 0, 0}, chains) == std::vector<int>{0});
  CHECK(detect_broken_chains({1, 1, 0, 1, 0}, chains) == std::vector<int>{0, 1});

  const UnembedResult clean = unembed({1, 1, 1, 0, 0}, chains, UnembedPolicy::kDiscard);
  CHECK_FALSE(clean.rejected);
  CHECK(clean.state == BinaryState{1, 0});

  const UnembedResult dropped = unembed({1, 0, 1, 0, 0}, chains, UnembedPolicy::kDiscard);
  CHECK(dropped.rejected);
  CHECK(dropped.state.empty());
  CHECK(dropped.broken == std::vector<int>{0});

  const UnembedResult majority = unembed({1, 0, 1, 0, 0}, chains, UnembedPolicy::kMajority);
  CHECK_FALSE(majority.rejected);
  CHECK(majority.state == BinaryState{1, 0});
  CHECK(majority.broken == std::vector<int>{0});

  // Even split resolves to 0.
  const UnembedResult tie = unembed({1, 1, 1, 1, 0}, chains, UnembedPolicy::kMajority);
  CHECK(tie.state == BinaryState{1, 0});
}

TEST_CASE("embedding prints one line per logical variable") {
  const Embedding embedding = embed_complete_graph(3, build_chimera(1, 1));
  CHECK(embedding_to_string(embedding) == "L0: 4\nL1: 1\nL2: 0 5\n");
}
