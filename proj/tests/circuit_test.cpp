#include "pinball/circuit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pinball {
namespace {

int det(const MemoryCircuit& c, int layer, int anc) { return layer * c.detectors_per_layer() + anc; }

// Channels per round from counting qubits: every CNOT replaces two idles by
// one two-qubit channel.
TEST(CircuitTest, ChannelCounts) {
  for (int d : {3, 5, 7}) {
    const MemoryCircuit c(d, 1e-3);
    const int nd = d * d, nx = (d * d - 1) / 2, nz = nx, n = nd + nx + nz;
    const int cnots_per_round = 2 * (4 * nx - 2 * (d - 1));
    const int hadamard = nx + nd + nz;
    const int cx = 4 * n - cnots_per_round;
    int expected = nd + nx;  // init
    for (int r = 0; r < d; ++r) {
      expected += 2 * hadamard + cx + nx + nd + (r + 1 < d ? nx : 0);
    }
    expected += nd;  // final measurement
    EXPECT_EQ(static_cast<int>(c.channels().size()), expected) << d;
  }
}

TEST(CircuitTest, ChannelProbabilities) {
  const double p = 2e-3;
  const MemoryCircuit c(5, p);
  for (const auto& ch : c.channels()) {
    switch (ch.kind) {
      case ChannelKind::kMeasurement:
        EXPECT_DOUBLE_EQ(ch.rate, 5 * p);
        EXPECT_DOUBLE_EQ(ch.fire_probability(), 5 * p);
        EXPECT_TRUE(ch.before_ops);
        break;
      case ChannelKind::kReset:
        EXPECT_DOUBLE_EQ(ch.fire_probability(), 2 * p);
        break;
      case ChannelKind::kTwoQubitGate:
        ASSERT_EQ(ch.outcomes.size(), 3u);
        for (const auto& o : ch.outcomes) EXPECT_DOUBLE_EQ(o.probability, 4 * p / 15);
        EXPECT_DOUBLE_EQ(ch.fire_probability(), 12 * p / 15);
        break;
      case ChannelKind::kSingleQubitGate:
      case ChannelKind::kIdle:
        EXPECT_DOUBLE_EQ(ch.fire_probability(), 2 * (p / 10) / 3);
        break;
      case ChannelKind::kResonatorIdle:
        EXPECT_DOUBLE_EQ(ch.fire_probability(), 2 * (2 * p) / 3);
        break;
    }
  }
}

TEST(CircuitTest, RejectsBadParameters) {
  EXPECT_THROW(MemoryCircuit(Lattice(3), NoiseModel::si1000(1e-3), 0), std::invalid_argument);
  EXPECT_THROW(MemoryCircuit(Lattice(3), NoiseModel::si1000(0.5), 3), std::invalid_argument);
  EXPECT_THROW(MemoryCircuit(Lattice(3), NoiseModel::si1000(-1e-3), 3), std::invalid_argument);
}

TEST(CircuitTest, MomentLayout) {
  const MemoryCircuit c(3, 1e-3);
  EXPECT_EQ(c.num_moments(), 2 + 7 * 3);
  EXPECT_EQ(c.moment(0).kind, MomentKind::kInit);
  EXPECT_EQ(c.moment(c.num_moments() - 1).kind, MomentKind::kFinal);
  for (int r = 0; r < 3; ++r) {
    for (auto k : {MomentKind::kH1, MomentKind::kCx3, MomentKind::kMeasureReset}) {
      const int m = c.moment_index(k, r);
      EXPECT_EQ(c.moment(m).kind, k);
      EXPECT_EQ(c.moment(m).round, r);
    }
  }
}

TEST(CircuitTest, NoiselessRunIsQuiet) {
  const MemoryCircuit c(5, 0.0);
  const FrameResult res = run_frame(c, {});
  EXPECT_TRUE(res.block.active().empty());
  EXPECT_FALSE(res.block.logical_flip);
  ShotSimulator sim(c);
  DetectorBlock block;
  std::vector<FaultEvent> events;
  for (uint64_t s = 0; s < 100; ++s) {
    sim.sample(shot_seed(1, s), block, events);
    EXPECT_TRUE(events.empty());
  }
}

// A Z on data before the first round is seen by every X stabilizer containing
// it, in layer 0 only.
TEST(CircuitTest, InitialDataErrorSignature) {
  const MemoryCircuit c(5, 1e-3);
  const Lattice& lat = c.lattice();
  for (int q = 0; q < lat.num_data(); ++q) {
    const FrameFlip f{0, false, {QubitRole::kData, q}};
    const FrameResult res = run_frame(c, std::span(&f, 1));
    std::vector<int> expected;
    for (int a : lat.x_ancillas_of_data(q)) expected.push_back(det(c, 0, a));
    EXPECT_EQ(res.block.active(), expected) << q;
    EXPECT_EQ(res.block.logical_flip, lat.on_observable(q));
  }
}

TEST(CircuitTest, MeasurementErrorSignature) {
  const MemoryCircuit c(5, 1e-3);
  for (int r = 0; r < c.rounds(); ++r) {
    const int m = c.moment_index(MomentKind::kMeasureReset, r);
    for (int a = 0; a < c.detectors_per_layer(); ++a) {
      const FrameFlip f{m, true, {QubitRole::kXAncilla, a}};
      const FrameResult res = run_frame(c, std::span(&f, 1));
      EXPECT_EQ(res.block.active(), (std::vector<int>{det(c, r, a), det(c, r + 1, a)}));
      EXPECT_FALSE(res.block.logical_flip);
    }
  }
}

TEST(CircuitTest, FinalDataErrorSignature) {
  const MemoryCircuit c(5, 1e-3);
  const Lattice& lat = c.lattice();
  const int m = c.num_moments() - 1;
  for (int q = 0; q < lat.num_data(); ++q) {
    const FrameFlip f{m, true, {QubitRole::kData, q}};
    const FrameResult res = run_frame(c, std::span(&f, 1));
    std::vector<int> expected;
    for (int a : lat.x_ancillas_of_data(q)) expected.push_back(det(c, c.rounds(), a));
    EXPECT_EQ(res.block.active(), expected);
    EXPECT_EQ(res.block.logical_flip, lat.on_observable(q));
  }
}

// A Z on a bulk Z ancilla between its 2nd and 3rd CNOT spreads to the NE and
// SE data qubits: one column, two rows. The earlier X neighbour above sees it
// in the current round, the one below only in the next.
TEST(CircuitTest, HookSignature) {
  const MemoryCircuit c(7, 1e-3);
  const Lattice& lat = c.lattice();
  const int r = 2;
  const int m = c.moment_index(MomentKind::kCx2, r);
  int checked = 0;
  for (int z = 0; z < lat.num_z_ancillas(); ++z) {
    const Ancilla& a = lat.z_ancilla(z);
    if (a.boundary != BoundaryKind::kBulk) continue;
    const int up = lat.x_ancilla_at(a.prow - 1, a.pcol);
    const int down = lat.x_ancilla_at(a.prow + 1, a.pcol);
    const FrameFlip f{m, false, {QubitRole::kZAncilla, z}};
    const FrameResult res = run_frame(c, std::span(&f, 1));
    std::vector<int> expected;
    if (up >= 0) expected.push_back(det(c, r, up));
    if (down >= 0) expected.push_back(det(c, r + 1, down));
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(res.block.active(), expected) << "z" << z;
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

// A Z on a Z ancilla before its first CNOT spreads to the whole stabilizer.
TEST(CircuitTest, ZAncillaErrorBeforeFirstCnotIsSilent) {
  const MemoryCircuit c(5, 1e-3);
  const int m = c.moment_index(MomentKind::kH1, 1);
  for (int z = 0; z < c.lattice().num_z_ancillas(); ++z) {
    const FrameFlip f{m, false, {QubitRole::kZAncilla, z}};
    const FrameResult res = run_frame(c, std::span(&f, 1));
    EXPECT_TRUE(res.block.active().empty());
    EXPECT_FALSE(res.block.logical_flip);
  }
}

TEST(CircuitTest, FaultSiteBasis) {
  const MemoryCircuit c(3, 1e-3);
  const QubitRef xa{QubitRole::kXAncilla, 0};
  const QubitRef dq{QubitRole::kData, 0};
  const int h1 = c.moment_index(MomentKind::kH1, 0);
  const int cx = c.moment_index(MomentKind::kCx2, 0);
  const int h2 = c.moment_index(MomentKind::kH2, 0);
  EXPECT_TRUE(flips_frame(c, {h1, true, xa}, Pauli::kX));
  EXPECT_FALSE(flips_frame(c, {h1, true, xa}, Pauli::kZ));
  EXPECT_TRUE(flips_frame(c, {h1, false, xa}, Pauli::kZ));
  EXPECT_FALSE(flips_frame(c, {cx, false, xa}, Pauli::kX));
  EXPECT_TRUE(flips_frame(c, {h2, true, xa}, Pauli::kZ));
  EXPECT_TRUE(flips_frame(c, {h2, false, xa}, Pauli::kX));
  for (int m : {h1, cx, h2}) {
    EXPECT_TRUE(flips_frame(c, {m, false, dq}, Pauli::kY));
    EXPECT_TRUE(flips_frame(c, {m, false, dq}, Pauli::kZ));
    EXPECT_FALSE(flips_frame(c, {m, false, dq}, Pauli::kX));
    EXPECT_FALSE(flips_frame(c, {m, false, dq}, Pauli::kI));
  }
  PauliFrame frame(c);
  inject_fault(frame, c, {cx, false, dq}, Pauli::kY);
  EXPECT_TRUE(frame.get(dq));
  inject_fault(frame, c, {cx, false, dq}, Pauli::kX);
  EXPECT_TRUE(frame.get(dq));
}

TEST(CircuitTest, UnsortedFlipsRejected) {
  const MemoryCircuit c(3, 1e-3);
  const std::vector<FrameFlip> flips = {{5, false, {QubitRole::kData, 0}},
                                        {2, false, {QubitRole::kData, 1}}};
  EXPECT_THROW(run_frame(c, flips), std::invalid_argument);
}

TEST(CircuitTest, EnumerationCoversEveryOutcome) {
  const MemoryCircuit c(5, 1e-3);
  const auto faults = enumerate_single_faults(c);
  size_t outcomes = 0;
  for (const auto& ch : c.channels()) outcomes += ch.outcomes.size();
  EXPECT_EQ(faults.size(), outcomes);
  for (const auto& f : faults) {
    const NoiseChannel& ch = c.channels()[f.channel];
    EXPECT_DOUBLE_EQ(f.probability, ch.outcomes[f.outcome].probability);
    EXPECT_EQ(f.kind, ch.kind);
  }
}

// Every single fault lights at most two detectors and, with two, they are in
// the same or consecutive layers.
TEST(CircuitTest, SingleFaultsAreGraphlike) {
  for (int d = 3; d <= 11; d += 2) {
    const MemoryCircuit c(d, 1e-3);
    for (const auto& f : enumerate_single_faults(c)) {
      ASSERT_LE(f.detectors.size(), 2u) << describe(f);
      if (f.detectors.size() == 2) {
        const int l0 = f.detectors[0] / c.detectors_per_layer();
        const int l1 = f.detectors[1] / c.detectors_per_layer();
        EXPECT_LE(l1 - l0, 1) << describe(f);
      }
    }
  }
}

// Enumeration against a full run that starts at moment 0.
TEST(CircuitTest, EnumerationMatchesFullRun) {
  const MemoryCircuit c(3, 1e-3);
  for (const auto& f : enumerate_single_faults(c)) {
    const NoiseChannel& ch = c.channels()[f.channel];
    const ChannelOutcome& o = ch.outcomes[f.outcome];
    std::vector<FrameFlip> flips;
    for (int i = 0; i < o.num_flips; ++i) flips.push_back({ch.moment, ch.before_ops, o.flips[i]});
    const FrameResult res = run_frame(c, flips);
    EXPECT_EQ(res.block.active(), f.detectors);
    EXPECT_EQ(res.block.logical_flip, f.logical_flip);
  }
}

TEST(CircuitTest, FastPathMatchesFramePath) {
  for (int d : {3, 5}) {
    const MemoryCircuit c(d, 1e-2);
    const ShotSimulator sim(c);
    DetectorBlock block;
    std::vector<FaultEvent> events;
    int nontrivial = 0;
    for (uint64_t s = 0; s < 2000; ++s) {
      const uint64_t seed = shot_seed(42, s);
      sim.sample(seed, block, events);
      const FrameResult ref = simulate_shot(c, sim.sampler(), seed);
      ASSERT_EQ(block, ref.block) << "shot " << s;
      nontrivial += !events.empty();
    }
    EXPECT_GT(nontrivial, 1000);
  }
}

// Per-kind event counts against their expectation, five standard deviations.
TEST(CircuitTest, SamplerRates) {
  const MemoryCircuit c(3, 1e-2);
  const FaultSampler sampler(c);
  std::map<ChannelKind, double> mean;
  for (const auto& ch : c.channels()) mean[ch.kind] += ch.fire_probability();
  std::map<ChannelKind, double> seen;
  std::map<int, double> outcome_seen;
  std::vector<FaultEvent> events;
  const int shots = 50000;
  for (int s = 0; s < shots; ++s) {
    ShotRng rng(shot_seed(7, s));
    sampler.sample(rng, events);
    for (size_t i = 1; i < events.size(); ++i) ASSERT_LT(events[i - 1].channel, events[i].channel);
    for (const auto& e : events) {
      seen[c.channels()[e.channel].kind] += 1;
      if (c.channels()[e.channel].kind == ChannelKind::kTwoQubitGate) outcome_seen[e.outcome] += 1;
    }
  }
  for (const auto& [kind, m] : mean) {
    const double expect = m * shots;
    EXPECT_NEAR(seen[kind], expect, 5 * std::sqrt(expect)) << to_string(kind);
  }
  // The three two-qubit outcomes are equally likely.
  const double total = outcome_seen[0] + outcome_seen[1] + outcome_seen[2];
  for (int o = 0; o < 3; ++o) {
    EXPECT_NEAR(outcome_seen[o] / total, 1.0 / 3, 5 * std::sqrt(2.0 / 9 / total));
  }
}

TEST(CircuitTest, ShotSeedsAreDistinctAndStable) {
  std::set<uint64_t> seen;
  for (uint64_t s = 0; s < 10000; ++s) seen.insert(shot_seed(123, s));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_EQ(shot_seed(123, 5), shot_seed(123, 5));
  EXPECT_NE(shot_seed(123, 5), shot_seed(124, 5));
}

TEST(DetectorBlockTest, RecordRoundTrip) {
  const MemoryCircuit c(5, 2e-2);
  const ShotSimulator sim(c);
  DetectorBlock block;
  std::vector<FaultEvent> events;
  std::stringstream stream;
  std::vector<DetectorBlock> written;
  for (uint64_t s = 0; s < 50; ++s) {
    sim.sample(shot_seed(3, s), block, events);
    const auto bytes = encode_record(block, c.rounds(), s);
    EXPECT_EQ(bytes.size(), record_size(5, 5));
    const DetectorRecord back = decode_record(bytes);
    EXPECT_EQ(back.block, block);
    EXPECT_EQ(back.shot_index, s);
    EXPECT_EQ(back.rounds, 5);
    write_record(stream, block, c.rounds(), s);
    written.push_back(block);
  }
  DetectorRecord rec;
  for (uint64_t s = 0; s < 50; ++s) {
    ASSERT_TRUE(read_record(stream, rec));
    EXPECT_EQ(rec.shot_index, s);
    EXPECT_EQ(rec.block, written[s]);
  }
  EXPECT_FALSE(read_record(stream, rec));
}

TEST(DetectorBlockTest, BitLayout) {
  // d=3: 4 detectors per layer, 4 layers -> 16 bits, 2 payload bytes.
  DetectorBlock block(3, 4, 4);
  block.at(0, 0) = 1;
  block.at(1, 1) = 1;  // bit 5
  block.at(3, 3) = 1;  // bit 15
  block.logical_flip = true;
  const auto bytes = encode_record(block, 3, 0x0102030405060708ULL);
  const std::vector<uint8_t> expected = {3, 0, 3, 0, 8, 7, 6, 5, 4, 3, 2, 1, 0x21, 0x80, 1};
  EXPECT_EQ(bytes, expected);
}

TEST(DetectorBlockTest, RejectsMalformedRecords) {
  DetectorBlock block(3, 4, 4);
  auto bytes = encode_record(block, 3, 1);
  EXPECT_THROW(decode_record(std::span(bytes.data(), bytes.size() - 1)), std::invalid_argument);
  auto bad = bytes;
  bad.back() = 2;
  EXPECT_THROW(decode_record(bad), std::invalid_argument);
  bad = bytes;
  bad[0] = 4;  // even distance
  EXPECT_THROW(decode_record(bad), std::invalid_argument);
  EXPECT_THROW(encode_record(block, 5, 0), std::invalid_argument);
  std::stringstream truncated(std::string(bytes.begin(), bytes.begin() + 13));
  DetectorRecord rec;
  EXPECT_THROW(read_record(truncated, rec), std::invalid_argument);
}

}  // namespace
}  // namespace pinball
