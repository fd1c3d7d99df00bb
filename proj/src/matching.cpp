#include "pinball/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>

namespace pinball {

MatchingDecoder::MatchingDecoder(const DecodingGraph& graph) : graph_(&graph) {
  qweights_.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    if (!std::isfinite(e.weight)) {
      qweights_.push_back(INT64_MAX / 4);
    } else {
      // Merged edges with p > 1/2 would get a negative weight; clamp them.
      qweights_.push_back(std::max<int64_t>(0, std::llround(e.weight * kScale)));
    }
  }
  if (graph.num_detectors() <= kMaxPrecomputedDetectors) {
    rows_.reserve(graph.num_detectors());
    for (int s = 0; s < graph.num_detectors(); ++s) rows_.push_back(dijkstra(s));
    precomputed_ = true;
  }
}

MatchingDecoder::Row MatchingDecoder::dijkstra(int source) const {
  const DecodingGraph& g = *graph_;
  Row r;
  r.dist.assign(g.num_vertices(), INT64_MAX);
  r.flip.assign(g.num_vertices(), 0);
  r.pred_edge.assign(g.num_vertices(), -1);
  using Item = std::pair<int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  r.dist[source] = 0;
  heap.push({0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d != r.dist[u]) continue;
    if (g.is_boundary(u)) continue;  // sinks
    for (const auto& [w, e] : g.neighbors(u)) {
      const int64_t nd = d + qweights_[e];
      if (nd < r.dist[w]) {
        r.dist[w] = nd;
        r.flip[w] = r.flip[u] ^ static_cast<uint8_t>(g.edge(e).logical_flip);
        r.pred_edge[w] = e;
        heap.push({nd, w});
      }
    }
  }
  return r;
}

MatchingDecoder::PathInfo MatchingDecoder::path(int u, int v) const {
  if (u < 0 || u >= graph_->num_detectors()) throw std::out_of_range("path source");
  if (precomputed_) return {rows_[u].dist.at(v), rows_[u].flip.at(v) != 0};
  const Row r = dijkstra(u);
  return {r.dist.at(v), r.flip.at(v) != 0};
}

MatchingDecoder::PathInfo MatchingDecoder::boundary_path(int u) const {
  const PathInfo l = path(u, graph_->left_boundary());
  const PathInfo r = path(u, graph_->right_boundary());
  return l.weight <= r.weight ? l : r;
}

std::vector<int> MatchingDecoder::path_edges(int u, int v) const {
  const Row local = precomputed_ ? Row{} : dijkstra(u);
  const Row& r = precomputed_ ? rows_.at(u) : local;
  if (r.dist.at(v) == INT64_MAX) throw std::invalid_argument("no path");
  std::vector<int> out;
  int x = v;
  while (x != u) {
    const int e = r.pred_edge[x];
    out.push_back(e);
    const GraphEdge& edge = graph_->edge(e);
    x = edge.u == x ? edge.v : edge.u;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

MatchingResult MatchingDecoder::decode(const DetectorBlock& block) const {
  const std::vector<int> defects = block.active();
  return decode_defects(defects);
}

MatchingResult MatchingDecoder::decode_defects(std::span<const int> defects) const {
  MatchingResult res;
  const int k = static_cast<int>(defects.size());
  if (k == 0) return res;

  std::vector<Row> local;
  if (!precomputed_) {
    for (int d : defects) local.push_back(dijkstra(d));
  }
  auto row = [&](int i) -> const Row& { return precomputed_ ? rows_[defects[i]] : local[i]; };
  std::vector<PathInfo> bnd(k);
  for (int i = 0; i < k; ++i) {
    const Row& r = row(i);
    const int lb = graph_->left_boundary(), rb = graph_->right_boundary();
    bnd[i] = r.dist[lb] <= r.dist[rb] ? PathInfo{r.dist[lb], r.flip[lb] != 0}
                                      : PathInfo{r.dist[rb], r.flip[rb] != 0};
  }

  // Defect i is vertex i, its private boundary copy is vertex k + i; the
  // boundary copies are free to pair among themselves.
  int64_t cap = 0;
  std::vector<WeightedEdge> edges;
  for (int i = 0; i < k; ++i) {
    if (bnd[i].weight != INT64_MAX) cap = std::max(cap, bnd[i].weight);
    for (int j = i + 1; j < k; ++j) {
      const int64_t w = row(i).dist[defects[j]];
      if (w == INT64_MAX) continue;
      // Never better than sending both to the boundary.
      if (bnd[i].weight != INT64_MAX && bnd[j].weight != INT64_MAX &&
          w >= bnd[i].weight + bnd[j].weight) {
        continue;
      }
      cap = std::max(cap, w);
      edges.push_back({i, j, w});
    }
  }
  cap += 1;
  for (auto& e : edges) e.weight = cap - e.weight;
  for (int i = 0; i < k; ++i) {
    if (bnd[i].weight != INT64_MAX) edges.push_back({i, k + i, cap - bnd[i].weight});
    for (int j = i + 1; j < k; ++j) edges.push_back({k + i, k + j, cap});
  }
  const std::vector<int> mate = max_weight_matching(2 * k, edges, true);

  for (int i = 0; i < k; ++i) {
    const int m = mate[i];
    if (m < 0) throw std::logic_error("matching left a defect unmatched");
    if (m == k + i) {
      res.pairs.push_back({defects[i], -1});
      res.weight += bnd[i].weight;
      res.predicted_flip ^= bnd[i].flip;
    } else if (m < k) {
      if (m < i) continue;
      const Row& r = row(i);
      res.pairs.push_back({defects[i], defects[m]});
      res.weight += r.dist[defects[m]];
      res.predicted_flip ^= r.flip[defects[m]] != 0;
    } else {
      throw std::logic_error("defect matched to a foreign boundary copy");
    }
  }
  return res;
}

MatchingResult brute_force_matching(const MatchingDecoder& dec, std::span<const int> defects) {
  const int k = static_cast<int>(defects.size());
  std::vector<MatchingDecoder::PathInfo> bnd(k);
  std::vector<std::vector<MatchingDecoder::PathInfo>> pair(k, std::vector<MatchingDecoder::PathInfo>(k));
  for (int i = 0; i < k; ++i) {
    bnd[i] = dec.boundary_path(defects[i]);
    for (int j = i + 1; j < k; ++j) pair[i][j] = dec.path(defects[i], defects[j]);
  }
  MatchingResult best;
  best.weight = INT64_MAX;
  std::vector<uint8_t> used(k, 0);
  std::vector<std::pair<int, int>> current;
  std::function<void(int, int64_t, bool)> rec = [&](int from, int64_t w, bool flip) {
    int i = from;
    while (i < k && used[i]) ++i;
    if (i == k) {
      if (w < best.weight) {
        best.weight = w;
        best.predicted_flip = flip;
        best.pairs = current;
      }
      return;
    }
    used[i] = 1;
    if (bnd[i].weight != INT64_MAX) {
      current.push_back({defects[i], -1});
      rec(i + 1, w + bnd[i].weight, flip ^ bnd[i].flip);
      current.pop_back();
    }
    for (int j = i + 1; j < k; ++j) {
      if (used[j] || pair[i][j].weight == INT64_MAX) continue;
      used[j] = 1;
      current.push_back({defects[i], defects[j]});
      rec(i + 1, w + pair[i][j].weight, flip ^ pair[i][j].flip);
      current.pop_back();
      used[j] = 0;
    }
    used[i] = 0;
  };
  rec(0, 0, false);
  return best;
}

}  // namespace pinball
