#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pinball/detector_block.hpp"
#include "pinball/lattice.hpp"
#include "pinball/noise.hpp"

namespace pinball {

// Memory experiment for the logical X observable. All qubits are reset, data
// into |+>, then `rounds` rounds of syndrome extraction run, and finally every
// data qubit is measured in the X basis.
//
// Only the error sector that flips X-type outcomes is tracked: a Z frame bit on
// every data and Z ancilla, and on every X ancilla a bit that flips its
// eventual measurement. Y errors act like Z errors, X errors are invisible.

enum class MomentKind : uint8_t {
  kInit,          // reset everything
  kH1,            // Hadamard on X ancillas
  kCx1, kCx2, kCx3, kCx4,
  kH2,            // Hadamard on X ancillas
  kMeasureReset,  // measure and reset all ancillas
  kFinal,         // measure data in the X basis
};

enum class ChannelKind : uint8_t {
  kReset,
  kSingleQubitGate,
  kTwoQubitGate,
  kIdle,
  kResonatorIdle,
  kMeasurement,
};

enum class QubitRole : uint8_t { kData, kXAncilla, kZAncilla };

struct QubitRef {
  QubitRole role = QubitRole::kData;
  int index = -1;

  friend bool operator==(const QubitRef&, const QubitRef&) = default;
};

struct Moment {
  MomentKind kind = MomentKind::kInit;
  int round = -1;  // -1 for kInit and kFinal
};

// One mutually exclusive way a channel can fire, already projected onto the
// tracked frame bits. Outcomes with no visible effect are dropped.
struct ChannelOutcome {
  double probability = 0.0;
  std::array<QubitRef, 2> flips{};
  int num_flips = 0;
};

struct NoiseChannel {
  ChannelKind kind = ChannelKind::kIdle;
  double rate = 0.0;  // nominal rate, e.g. 5p for a measurement
  int moment = 0;
  bool before_ops = false;  // applied before the moment's operations
  std::array<QubitRef, 2> qubits{};
  int num_qubits = 0;
  std::vector<ChannelOutcome> outcomes;

  double fire_probability() const;
};

struct CnotPair {
  StabilizerType type = StabilizerType::kX;
  int ancilla = -1;
  int data = -1;
};

class MemoryCircuit {
 public:
  // Throws std::invalid_argument for rounds < 1 or invalid noise rates.
  MemoryCircuit(Lattice lattice, NoiseModel noise, int rounds);
  MemoryCircuit(int distance, double p) : MemoryCircuit(Lattice(distance), NoiseModel::si1000(p), distance) {}

  const Lattice& lattice() const { return lattice_; }
  const NoiseModel& noise() const { return noise_; }
  int distance() const { return lattice_.distance(); }
  int rounds() const { return rounds_; }
  int num_layers() const { return rounds_ + 1; }
  int detectors_per_layer() const { return lattice_.num_x_ancillas(); }
  int num_detectors() const { return num_layers() * detectors_per_layer(); }

  int num_moments() const { return static_cast<int>(moments_.size()); }
  const Moment& moment(int m) const { return moments_.at(m); }
  int moment_index(MomentKind kind, int round) const;
  const std::vector<CnotPair>& cnots(int timestep) const { return cnots_.at(timestep - 1); }
  const std::vector<NoiseChannel>& channels() const { return channels_; }

 private:
  void build_moments();
  void build_channels();

  Lattice lattice_;
  NoiseModel noise_;
  int rounds_;
  std::vector<Moment> moments_;
  std::array<std::vector<CnotPair>, 4> cnots_;
  std::vector<NoiseChannel> channels_;
};

// A single frame-bit flip at a point in the circuit.
struct FrameFlip {
  int moment = 0;
  bool before_ops = false;
  QubitRef qubit;
};

enum class Pauli : uint8_t { kI, kX, kY, kZ };

struct FaultSite {
  int moment = 0;
  bool before_ops = false;
  QubitRef qubit;
};

// Propagation state of the tracked frame.
class PauliFrame {
 public:
  explicit PauliFrame(const MemoryCircuit& circuit);

  void clear();
  void flip(QubitRef q);
  bool get(QubitRef q) const;
  // Applies the noiseless operations of moment m.
  void apply_ops(int m);

  // Valid after the final moment was applied.
  DetectorBlock detectors() const;
  const std::vector<uint8_t>& data() const { return data_; }

 private:
  const MemoryCircuit* circuit_;
  std::vector<uint8_t> data_;
  std::vector<uint8_t> x_anc_;
  std::vector<uint8_t> z_anc_;
  std::vector<uint8_t> records_;  // rounds x num_x
  std::vector<uint8_t> final_data_;
};

// Whether the Pauli at the site flips the tracked bit. X ancillas between the
// two Hadamards are in the rotated basis.
bool flips_frame(const MemoryCircuit& circuit, const FaultSite& site, Pauli p);

// Injects a Pauli into the frame; the frame must be positioned at the site.
void inject_fault(PauliFrame& frame, const MemoryCircuit& circuit, const FaultSite& site, Pauli p);

struct FrameResult {
  DetectorBlock block;
  std::vector<uint8_t> final_data;  // residual Z on data before measurement
};

// Propagates flips (sorted by moment then before/after) through the circuit.
FrameResult run_frame(const MemoryCircuit& circuit, std::span<const FrameFlip> flips);

struct SingleFault {
  int channel = -1;
  int outcome = -1;
  ChannelKind kind = ChannelKind::kIdle;
  double channel_rate = 0.0;
  double probability = 0.0;
  Moment moment;
  std::array<QubitRef, 2> qubits{};
  int num_qubits = 0;
  std::vector<int> detectors;       // ascending detector indices
  bool logical_flip = false;
  std::vector<int> data_residual;  // data qubits with a Z frame bit at the end
};

// Every projected outcome of every channel, in channel order.
std::vector<SingleFault> enumerate_single_faults(const MemoryCircuit& circuit);

// Per-shot seed derived from the master seed and the shot index, so shots
// are independent of how they are split across workers.
uint64_t shot_seed(uint64_t master_seed, uint64_t shot);

using ShotRng = std::mt19937_64;

struct FaultEvent {
  uint32_t channel = 0;
  uint32_t outcome = 0;

  friend bool operator==(const FaultEvent&, const FaultEvent&) = default;
};

// Draws which channels fire in a shot. Channels are grouped by firing
// probability and visited with geometric skips.
class FaultSampler {
 public:
  explicit FaultSampler(const MemoryCircuit& circuit);

  // Fills `events` sorted by channel index.
  void sample(ShotRng& rng, std::vector<FaultEvent>& events) const;

 private:
  struct Bucket {
    double fire = 0.0;
    std::vector<uint32_t> channels;
  };
  const MemoryCircuit* circuit_;
  std::vector<Bucket> buckets_;
};

// Reference path: sample events and propagate them through the frame.
FrameResult simulate_shot(const MemoryCircuit& circuit, const FaultSampler& sampler, uint64_t seed);

// Fast path: XOR of precomputed single-fault signatures. Equal to the
// reference path for every event set because propagation is linear.
class ShotSimulator {
 public:
  explicit ShotSimulator(const MemoryCircuit& circuit);

  const MemoryCircuit& circuit() const { return *circuit_; }
  const FaultSampler& sampler() const { return sampler_; }
  const std::vector<SingleFault>& faults() const { return faults_; }

  void sample(uint64_t seed, DetectorBlock& block, std::vector<FaultEvent>& events) const;
  void apply(std::span<const FaultEvent> events, DetectorBlock& block) const;

 private:
  const MemoryCircuit* circuit_;
  FaultSampler sampler_;
  std::vector<SingleFault> faults_;
  std::vector<uint32_t> first_outcome_;  // channel -> index into faults_
};

const char* to_string(MomentKind k);
const char* to_string(ChannelKind k);
const char* to_string(QubitRole r);
std::string describe(const SingleFault& f);

}  // namespace pinball
