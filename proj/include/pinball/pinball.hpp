#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "pinball/decoding_graph.hpp"
#include "pinball/predecoder.hpp"

namespace pinball {

enum class Stage : uint8_t { kM, kB1, kB2, kB3, kB4, kST1, kST2, kH, kE };
constexpr int kNumStages = 9;

// A detector slot inside the two-layer window.
struct Slot {
  bool current = false;  // false: S_{i-1}, true: S_i
  int ancilla = -1;

  friend bool operator==(const Slot&, const Slot&) = default;
};

// Checks a pair of syndromes and, when both are active, writes the edge
// correction and clears them. An artificial neighbour is always active.
struct Primitive {
  Stage stage = Stage::kM;
  int edge = -1;
  Slot center;
  Slot neighbor;
  bool artificial = false;
};

// Streaming state for one block.
struct PipelineState {
  int next_layer = 0;
  std::vector<uint8_t> prev;  // working copy of S_{i-1}
  std::vector<uint8_t> curr;  // working copy of S_i
  std::vector<uint8_t> correction;
  bool complex = false;
  int complex_layer = -1;
  int fired = 0;
};

// Nine-stage pipeline [M, B1..B4, ST1, ST2, H, E] over the window
// (S_{i-1}, S_i). M, ST and H pair a slot of S_{i-1} with one of S_i; B and E
// act inside S_{i-1}, so every cross-layer explanation gets the first chance
// at a syndrome. Whatever is still active in S_{i-1} after E marks the block
// complex. After the last layer one more window with an all-zero S_i flushes
// the final layer.
class PinballDecoder : public Predecoder {
 public:
  // Throws std::logic_error if an edge cannot be placed or a stage has two
  // primitives on one slot.
  explicit PinballDecoder(const DecodingGraph& graph);

  std::string name() const override { return "pinball"; }
  PredecodeResult decode(const DetectorBlock& block) const override;

  PipelineState start() const;
  // Feeds the next detector layer and runs the window ending at it.
  void push_layer(PipelineState& state, std::span<const uint8_t> layer) const;
  PredecodeResult finish(PipelineState& state) const;

  const DecodingGraph& graph() const { return *graph_; }
  // Windows 0..layers: window w has S_{w-1} as previous layer. The last one
  // is the flush.
  int num_windows() const { return static_cast<int>(windows_.size()); }
  const std::array<std::vector<Primitive>, kNumStages>& window(int w) const { return windows_.at(w); }

 private:
  void run_window(PipelineState& state, int w) const;

  const DecodingGraph* graph_;
  int per_layer_;
  std::vector<std::array<std::vector<Primitive>, kNumStages>> windows_;
  std::vector<uint8_t> on_observable_;
};

// Bulk-space coloring: parity class of the shared data qubit.
int bulk_color(const Lattice& lat, int data_qubit);

const char* to_string(Stage s);
// Stage id followed by the primitives' endpoint pairs, one window at a time.
std::string dump_pipeline(const PinballDecoder& dec);

// Exactly-once coverage and per-stage conflict freedom; returns an empty
// string when both hold, otherwise a description of the first violation.
std::string check_pipeline(const PinballDecoder& dec);

}  // namespace pinball
