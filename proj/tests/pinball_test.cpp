#include "pinball/pinball.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pinball {
namespace {

struct Fixture {
  explicit Fixture(int d, double p = 1e-3) : circuit(d, p), graph(circuit), decoder(graph) {}
  DetectorBlock empty_block() const {
    return DetectorBlock(circuit.distance(), graph.num_layers(), graph.per_layer());
  }
  MemoryCircuit circuit;
  DecodingGraph graph;
  PinballDecoder decoder;
};

// Z-type corrections are equivalent iff they have the same X syndrome and the
// same parity on the observable.
void expect_equivalent(const DecodingGraph& g, const std::vector<uint8_t>& correction,
                       const std::vector<int>& expected) {
  std::vector<int> diff;
  std::vector<uint8_t> dense = correction;
  for (int q : expected) dense[q] ^= 1;
  for (int q = 0; q < static_cast<int>(dense.size()); ++q) {
    if (dense[q]) diff.push_back(q);
  }
  const auto syn = g.syndrome_of(diff);
  EXPECT_TRUE(std::all_of(syn.begin(), syn.end(), [](uint8_t b) { return b == 0; }));
  bool flip = false;
  for (int q : diff) flip ^= g.lattice().on_observable(q);
  EXPECT_FALSE(flip);
}

std::vector<uint8_t> spatial_projection(const DetectorBlock& b) {
  std::vector<uint8_t> out(b.per_layer, 0);
  for (int l = 0; l < b.layers; ++l) {
    for (int a = 0; a < b.per_layer; ++a) out[a] ^= b.at(l, a);
  }
  return out;
}

std::vector<int> sparse(const std::vector<uint8_t>& dense) {
  std::vector<int> out;
  for (int q = 0; q < static_cast<int>(dense.size()); ++q) {
    if (dense[q]) out.push_back(q);
  }
  return out;
}

class PinballByDistance : public ::testing::TestWithParam<int> {};

TEST_P(PinballByDistance, PipelineIsWellFormed) {
  const Fixture f(GetParam());
  EXPECT_EQ(check_pipeline(f.decoder), "");
  EXPECT_EQ(f.decoder.num_windows(), f.graph.num_layers() + 1);
  // Independent oracle: each edge owned by exactly one primitive whose
  // endpoints are the edge's endpoints, and no slot used twice in a stage.
  std::vector<int> owners(f.graph.num_edges(), 0);
  for (int w = 0; w < f.decoder.num_windows(); ++w) {
    ASSERT_EQ(f.decoder.window(w).size(), static_cast<size_t>(kNumStages));
    for (int s = 0; s < kNumStages; ++s) {
      std::set<std::pair<bool, int>> used;
      for (const Primitive& p : f.decoder.window(w)[s]) {
        EXPECT_EQ(static_cast<int>(p.stage), s);
        ++owners[p.edge];
        const GraphEdge& e = f.graph.edge(p.edge);
        auto vertex = [&](Slot sl) { return f.graph.vertex(w - 1 + (sl.current ? 1 : 0), sl.ancilla); };
        EXPECT_EQ(vertex(p.center), e.u);
        EXPECT_TRUE(used.insert({p.center.current, p.center.ancilla}).second);
        if (p.artificial) {
          EXPECT_TRUE(f.graph.is_boundary(e.v));
        } else {
          EXPECT_EQ(vertex(p.neighbor), e.v);
          EXPECT_TRUE(used.insert({p.neighbor.current, p.neighbor.ancilla}).second);
        }
      }
    }
  }
  for (int e = 0; e < f.graph.num_edges(); ++e) EXPECT_EQ(owners[e], 1) << e;
}

TEST_P(PinballByDistance, EverySingleEdgeDecodes) {
  const Fixture f(GetParam());
  for (const auto& e : f.graph.edges()) {
    DetectorBlock b = f.empty_block();
    b.bits[e.u] = 1;
    if (!f.graph.is_boundary(e.v)) b.bits[e.v] = 1;
    const PredecodeResult r = f.decoder.decode(b);
    ASSERT_FALSE(r.complex) << e.u << "-" << e.v << " " << to_string(e.cls);
    EXPECT_EQ(r.fired, 1);
    EXPECT_EQ(r.predicted_flip, e.logical_flip);
    expect_equivalent(f.graph, r.correction, e.correction);
  }
}

INSTANTIATE_TEST_SUITE_P(Distances, PinballByDistance, ::testing::Values(3, 5, 7, 9, 11));

TEST(PinballTest, StageCountAndNames) {
  EXPECT_EQ(kNumStages, 9);
  const Fixture f(5);
  const std::string dump = dump_pipeline(f.decoder);
  int sections = 0;
  std::istringstream in(dump);
  std::string line;
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    if (line.rfind("stage ", 0) == 0) {
      ++sections;
      names.push_back(line.substr(6));
    }
  }
  EXPECT_EQ(sections, 9);
  EXPECT_EQ(names, (std::vector<std::string>{"M", "B(1)", "B(2)", "B(3)", "B(4)", "ST(1)", "ST(2)",
                                             "H", "E"}));
  EXPECT_NE(dump.find("ARTIFICIAL"), std::string::npos);
}

TEST(PinballTest, AllZeroBlock) {
  const Fixture f(7);
  const PredecodeResult r = f.decoder.decode(f.empty_block());
  EXPECT_FALSE(r.complex);
  EXPECT_EQ(r.fired, 0);
  EXPECT_EQ(r.complex_layer, -1);
  EXPECT_EQ(sparse(r.correction), std::vector<int>{});
  EXPECT_FALSE(r.predicted_flip);
}

TEST(PinballTest, TimePairHandledByMatchStage) {
  const Fixture f(5);
  const int a = f.graph.lattice().x_ancilla_at(2, 3);
  ASSERT_GE(a, 0);
  DetectorBlock b = f.empty_block();
  b.at(2, a) = 1;
  b.at(3, a) = 1;
  const int e = f.graph.find_edge(f.graph.vertex(2, a), f.graph.vertex(3, a));
  ASSERT_GE(e, 0);
  int stage = -1;
  for (const Primitive& p : f.decoder.window(3)[static_cast<int>(Stage::kM)]) {
    if (p.edge == e) stage = static_cast<int>(p.stage);
  }
  EXPECT_EQ(stage, static_cast<int>(Stage::kM));
  const PredecodeResult r = f.decoder.decode(b);
  EXPECT_FALSE(r.complex);
  EXPECT_EQ(r.fired, 1);
  EXPECT_EQ(sparse(r.correction), std::vector<int>{});  // measurement error
}

TEST(PinballTest, LoneBoundarySyndromeGoesToArtificialNeighbour) {
  const Fixture f(5);
  // An ancilla on the left edge of the patch.
  int a = -1;
  int e = -1;
  for (const auto& [w, edge] : f.graph.neighbors(f.graph.left_boundary())) {
    if (f.graph.layer_of(w) == 2) {
      a = f.graph.ancilla_of(w);
      e = edge;
      break;
    }
  }
  ASSERT_GE(a, 0);
  DetectorBlock b = f.empty_block();
  b.at(2, a) = 1;
  const PredecodeResult r = f.decoder.decode(b);
  ASSERT_FALSE(r.complex);
  EXPECT_EQ(r.fired, 1);
  EXPECT_TRUE(r.predicted_flip);
  EXPECT_EQ(f.graph.edge(e).cls, EdgeClass::kEdgeSpace);
  expect_equivalent(f.graph, r.correction, f.graph.edge(e).correction);
}

TEST(PinballTest, IsolatedBulkSyndromeIsComplex) {
  const Fixture f(7);
  const int a = f.graph.lattice().x_ancilla_at(3, 4);
  ASSERT_GE(a, 0);
  EXPECT_EQ(f.graph.lattice().x_ancilla(a).boundary, BoundaryKind::kBulk);
  DetectorBlock b = f.empty_block();
  b.at(4, a) = 1;
  const PredecodeResult r = f.decoder.decode(b);
  EXPECT_TRUE(r.complex);
  EXPECT_EQ(r.complex_layer, 4);
  EXPECT_TRUE(r.correction.empty());
  EXPECT_FALSE(r.predicted_flip);
}

TEST(PinballTest, StreamingMatchesBlockDecode) {
  const Fixture f(5, 5e-3);
  const ShotSimulator sim(f.circuit);
  DetectorBlock b;
  std::vector<FaultEvent> events;
  for (uint64_t s = 0; s < 300; ++s) {
    sim.sample(shot_seed(17, s), b, events);
    PipelineState st = f.decoder.start();
    for (int l = 0; l < b.layers; ++l) f.decoder.push_layer(st, b.layer(l));
    const PredecodeResult a = f.decoder.finish(st);
    const PredecodeResult c = f.decoder.decode(b);
    EXPECT_EQ(a.complex, c.complex);
    EXPECT_EQ(a.complex_layer, c.complex_layer);
    EXPECT_EQ(a.correction, c.correction);
    EXPECT_EQ(a.predicted_flip, c.predicted_flip);
  }
  PipelineState st = f.decoder.start();
  EXPECT_THROW(f.decoder.finish(st), std::logic_error);
  EXPECT_THROW(f.decoder.push_layer(st, std::vector<uint8_t>(3, 0)), std::invalid_argument);
}

TEST(PinballTest, CorrectionReproducesSyndrome) {
  // Every primitive clears its endpoints and adds a correction with exactly
  // their spatial syndrome, so a non-complex result explains the whole block.
  const Fixture f(7, 3e-3);
  const ShotSimulator sim(f.circuit);
  DetectorBlock b;
  std::vector<FaultEvent> events;
  int covered = 0;
  int complex = 0;
  for (uint64_t s = 0; s < 2000; ++s) {
    sim.sample(shot_seed(5, s), b, events);
    const PredecodeResult r = f.decoder.decode(b);
    if (r.complex) {
      ++complex;
      EXPECT_TRUE(r.correction.empty());
      EXPECT_GE(r.complex_layer, 0);
      EXPECT_LT(r.complex_layer, b.layers);
      continue;
    }
    ++covered;
    EXPECT_EQ(f.graph.syndrome_of(sparse(r.correction)), spatial_projection(b));
  }
  EXPECT_GT(covered, 0);
  EXPECT_GT(complex, 0);
}

TEST(PinballTest, OffloadIgnoresTrueObservable) {
  const Fixture f(5, 5e-3);
  const ShotSimulator sim(f.circuit);
  DetectorBlock b;
  std::vector<FaultEvent> events;
  for (uint64_t s = 0; s < 200; ++s) {
    sim.sample(shot_seed(3, s), b, events);
    const PredecodeResult r1 = f.decoder.decode(b);
    b.logical_flip = !b.logical_flip;
    const PredecodeResult r2 = f.decoder.decode(b);
    EXPECT_EQ(r1.complex, r2.complex);
    EXPECT_EQ(r1.correction, r2.correction);
  }
}

TEST(PinballTest, GreedyPairingCanMiscorrectTwoFaults) {
  // Search over pairs of same-layer faults at d = 3 for a block that the
  // pipeline accepts as simple but decodes to the wrong logical class.
  const Fixture f(3);
  int wrong = 0;
  int simple = 0;
  for (int i = 0; i < f.graph.num_edges(); ++i) {
    for (int j = i + 1; j < f.graph.num_edges(); ++j) {
      const GraphEdge& a = f.graph.edge(i);
      const GraphEdge& c = f.graph.edge(j);
      DetectorBlock b = f.empty_block();
      for (const GraphEdge* e : {&a, &c}) {
        b.bits[e->u] ^= 1;
        if (!f.graph.is_boundary(e->v)) b.bits[e->v] ^= 1;
      }
      b.logical_flip = a.logical_flip != c.logical_flip;
      const PredecodeResult r = f.decoder.decode(b);
      if (r.complex) continue;
      ++simple;
      if (r.predicted_flip != b.logical_flip) ++wrong;
    }
  }
  EXPECT_GT(simple, 0);
  EXPECT_GT(wrong, 0);
  EXPECT_LT(wrong, simple);
}

TEST(PinballTest, BulkColorsPartitionQubits) {
  const Lattice lat(5);
  std::map<int, int> count;
  for (int q = 0; q < lat.num_data(); ++q) ++count[bulk_color(lat, q)];
  EXPECT_EQ(count.size(), 4u);
  EXPECT_EQ(count[0], 9);
  EXPECT_EQ(count[3], 4);
}

TEST(PinballTest, RejectsMismatchedBlock) {
  const Fixture f(5);
  DetectorBlock b(3, 4, 4);
  EXPECT_THROW(f.decoder.decode(b), std::invalid_argument);
}

}  // namespace
}  // namespace pinball
