#include "pinball/clique.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "pinball/pinball.hpp"

namespace pinball {
namespace {

struct Fixture {
  explicit Fixture(int d, double p = 1e-3) : circuit(d, p), graph(circuit), decoder(graph) {}
  DetectorBlock block_with(std::initializer_list<int> vertices) const {
    DetectorBlock b(circuit.distance(), graph.num_layers(), graph.per_layer());
    for (int v : vertices) b.bits[v] ^= 1;
    return b;
  }
  MemoryCircuit circuit;
  DecodingGraph graph;
  CliqueDecoder decoder;
};

bool equivalent(const DecodingGraph& g, const std::vector<uint8_t>& correction,
                const std::vector<int>& expected) {
  std::vector<uint8_t> dense = correction;
  for (int q : expected) dense[q] ^= 1;
  std::vector<int> diff;
  bool flip = false;
  for (int q = 0; q < static_cast<int>(dense.size()); ++q) {
    if (dense[q]) {
      diff.push_back(q);
      flip ^= g.lattice().on_observable(q);
    }
  }
  const auto syn = g.syndrome_of(diff);
  return !flip && std::all_of(syn.begin(), syn.end(), [](uint8_t b) { return b == 0; });
}

int first_edge(const DecodingGraph& g, EdgeClass cls, bool bulk_only) {
  for (int e = 0; e < g.num_edges(); ++e) {
    const GraphEdge& edge = g.edge(e);
    if (edge.cls != cls || g.layer_of(edge.u) < 1) continue;
    if (bulk_only) {
      const Lattice& lat = g.lattice();
      if (lat.x_ancilla(g.ancilla_of(edge.u)).boundary != BoundaryKind::kBulk) continue;
      if (!g.is_boundary(edge.v) &&
          lat.x_ancilla(g.ancilla_of(edge.v)).boundary != BoundaryKind::kBulk) {
        continue;
      }
      // Keep away from ancillas that own a boundary edge.
      bool near_boundary = false;
      for (int v : {edge.u, edge.v}) {
        if (g.is_boundary(v)) continue;
        for (const auto& [w, x] : g.neighbors(v)) near_boundary |= g.is_boundary(w);
      }
      if (near_boundary) continue;
    }
    return e;
  }
  return -1;
}

TEST(CliqueTest, AllZeroBlock) {
  const Fixture f(5);
  const PredecodeResult r = f.decoder.decode(f.block_with({}));
  EXPECT_FALSE(r.complex);
  EXPECT_EQ(r.fired, 0);
  EXPECT_EQ(r.correction, std::vector<uint8_t>(25, 0));
}

TEST(CliqueTest, EverySpaceEdgeDecodes) {
  for (int d : {3, 5, 7}) {
    const Fixture f(d);
    for (const auto& e : f.graph.edges()) {
      if (e.cls != EdgeClass::kBulkSpace && e.cls != EdgeClass::kEdgeSpace) continue;
      const PredecodeResult r =
          f.decoder.decode(f.graph.is_boundary(e.v) ? f.block_with({e.u}) : f.block_with({e.u, e.v}));
      ASSERT_FALSE(r.complex) << d << " " << e.u << "-" << e.v;
      EXPECT_EQ(r.fired, 1);
      EXPECT_EQ(r.predicted_flip, e.logical_flip);
      EXPECT_TRUE(equivalent(f.graph, r.correction, e.correction));
    }
  }
}

TEST(CliqueTest, HookIsNeverSilentlyCorrect) {
  const Fixture f(7);
  int checked = 0;
  for (const auto& e : f.graph.edges()) {
    if (e.cls != EdgeClass::kHook && e.cls != EdgeClass::kSpacetimeSingle) continue;
    const PredecodeResult r = f.decoder.decode(f.block_with({e.u, e.v}));
    ++checked;
    // Without cross-layer diagonal logic the block is either offloaded or
    // explained by a different chain.
    if (!r.complex) EXPECT_GE(r.fired, 2);
  }
  EXPECT_GT(checked, 0);
  const int hook = first_edge(f.graph, EdgeClass::kHook, true);
  ASSERT_GE(hook, 0);
  const GraphEdge& e = f.graph.edge(hook);
  EXPECT_TRUE(f.decoder.decode(f.block_with({e.u, e.v})).complex);
}

TEST(CliqueTest, TimeRuleClearsOnlyTheOlderEndpoint) {
  const Fixture f(7);
  const int t = first_edge(f.graph, EdgeClass::kTime, true);
  ASSERT_GE(t, 0);
  const GraphEdge& e = f.graph.edge(t);
  const PredecodeResult r = f.decoder.decode(f.block_with({e.u, e.v}));
  // The newer endpoint stays behind as an isolated syndrome.
  EXPECT_TRUE(r.complex);
  EXPECT_EQ(r.complex_layer, f.graph.layer_of(e.v));
  // Pinball pairs the same two syndromes in its M stage.
  const PinballDecoder pinball(f.graph);
  EXPECT_FALSE(pinball.decode(f.block_with({e.u, e.v})).complex);
}

TEST(CliqueTest, BulkPairAwayFromFirstLayer) {
  const Fixture f(5);
  const int b = first_edge(f.graph, EdgeClass::kBulkSpace, false);
  ASSERT_GE(b, 0);
  const GraphEdge& e = f.graph.edge(b);
  const PredecodeResult r = f.decoder.decode(f.block_with({e.u, e.v}));
  EXPECT_FALSE(r.complex);
  EXPECT_TRUE(equivalent(f.graph, r.correction, e.correction));
}

TEST(CliqueTest, CrowdedCliqueIsComplex) {
  // The middle syndrome sees two active neighbours, so nothing pairs.
  const Fixture f(7);
  const Lattice& lat = f.graph.lattice();
  const int mid = lat.x_ancilla_at(3, 4);
  ASSERT_GE(mid, 0);
  std::vector<int> nbs;
  for (const auto& [w, e] : f.graph.neighbors(f.graph.vertex(3, mid))) {
    if (f.graph.edge(e).cls == EdgeClass::kBulkSpace) nbs.push_back(w);
  }
  ASSERT_GE(nbs.size(), 2u);
  const PredecodeResult r =
      f.decoder.decode(f.block_with({f.graph.vertex(3, mid), nbs[0], nbs[1]}));
  EXPECT_TRUE(r.complex);
  EXPECT_TRUE(r.correction.empty());
}

TEST(CliqueTest, CoverageBelowPinball) {
  const Fixture f(7, 1e-3);
  const PinballDecoder pinball(f.graph);
  const ShotSimulator sim(f.circuit);
  DetectorBlock b;
  std::vector<FaultEvent> events;
  int clique_simple = 0;
  int pinball_simple = 0;
  for (uint64_t s = 0; s < 3000; ++s) {
    sim.sample(shot_seed(11, s), b, events);
    clique_simple += !f.decoder.decode(b).complex;
    pinball_simple += !pinball.decode(b).complex;
  }
  EXPECT_LT(clique_simple, pinball_simple);
}

TEST(CliqueTest, RejectsMismatchedBlock) {
  const Fixture f(5);
  EXPECT_THROW(f.decoder.decode(DetectorBlock(3, 4, 4)), std::invalid_argument);
  EXPECT_EQ(f.decoder.name(), "clique");
}

}  // namespace
}  // namespace pinball
