#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pinball/decoding_graph.hpp"

namespace pinball {

// Maximum-weight matching on a general graph (Edmonds' blossom algorithm with
// dual variables, O(n^3)). With max_cardinality the result is the heaviest
// among the maximum-cardinality matchings. Returns mate[v] or -1.
struct WeightedEdge {
  int u;
  int v;
  int64_t weight;
};
std::vector<int> max_weight_matching(int num_vertices, std::span<const WeightedEdge> edges,
                                     bool max_cardinality);

struct MatchingResult {
  bool predicted_flip = false;
  int64_t weight = 0;                   // quantized total path weight
  std::vector<std::pair<int, int>> pairs;  // defect vertices; second = -1 for a boundary
};

// Minimum-weight perfect matching of detection events over shortest paths of
// the decoding graph. Boundary vertices absorb paths and never relay them.
class MatchingDecoder {
 public:
  // Edge weights are quantized to integers (weight * kScale) so that path
  // sums are exact.
  static constexpr double kScale = 1e6;
  static constexpr int kMaxPrecomputedDetectors = 4000;

  explicit MatchingDecoder(const DecodingGraph& graph);

  const DecodingGraph& graph() const { return *graph_; }

  MatchingResult decode(const DetectorBlock& block) const;
  MatchingResult decode_defects(std::span<const int> defects) const;

  // Shortest path from detector u to vertex v (detector or boundary):
  // quantized weight (INT64_MAX when unreachable) and logical parity.
  struct PathInfo {
    int64_t weight = INT64_MAX;
    bool flip = false;
  };
  PathInfo path(int u, int v) const;
  // Cheaper of the two boundaries.
  PathInfo boundary_path(int u) const;
  // Edge indices of one shortest path from detector u to vertex v.
  std::vector<int> path_edges(int u, int v) const;

  int64_t edge_weight(int e) const { return qweights_.at(e); }

 private:
  struct Row {
    std::vector<int64_t> dist;
    std::vector<uint8_t> flip;
    std::vector<int32_t> pred_edge;
  };
  Row dijkstra(int source) const;
  const Row& row(int source, std::vector<Row>& scratch, std::vector<int>& slot) const;

  const DecodingGraph* graph_;
  std::vector<int64_t> qweights_;
  bool precomputed_ = false;
  std::vector<Row> rows_;
};

// Exhaustive minimum over all ways to pair defects or send them to a
// boundary. Exponential; intended for at most ~12 defects.
MatchingResult brute_force_matching(const MatchingDecoder& dec, std::span<const int> defects);

}  // namespace pinball
