#pragma once

#include <span>
#include <string>
#include <vector>

#include "pinball/decoding_graph.hpp"
#include "pinball/predecoder.hpp"

namespace pinball {

// Behavioral model of the Clique cryogenic predecoder. Per window
// (S_{i-1}, S_i), acting on S_{i-1}:
//   1. edge space: an active boundary syndrome with no active bulk neighbour
//      takes its boundary correction;
//   2. bulk space: every syndrome evaluates its own clique on a snapshot; a
//      pair that are each other's only active neighbour is corrected once;
//   3. time: a syndrome also active in S_i is cleared in S_{i-1} only;
//   4. anything left in S_{i-1} marks the block complex.
// There is no spacetime or hook logic. The final layer is flushed against an
// all-zero S_i like in the Pinball pipeline.
class CliqueDecoder : public Predecoder {
 public:
  explicit CliqueDecoder(const DecodingGraph& graph);

  std::string name() const override { return "clique"; }
  PredecodeResult decode(const DetectorBlock& block) const override;

 private:
  struct Neighbor {
    int ancilla;
    int edge;
  };
  // Processes one window; returns false if S_{i-1} is left with activity.
  bool run_window(int prev_layer, std::vector<uint8_t>& prev, const std::vector<uint8_t>& curr,
                  std::vector<uint8_t>& correction, int& fired) const;

  const DecodingGraph* graph_;
  int per_layer_;
  // Per layer and ancilla: same-layer bulk neighbours and the boundary edge.
  std::vector<std::vector<std::vector<Neighbor>>> bulk_;
  std::vector<std::vector<int>> boundary_;
  std::vector<uint8_t> on_observable_;
};

}  // namespace pinball
