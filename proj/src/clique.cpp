#include "pinball/clique.hpp"

#include <algorithm>
#include <stdexcept>

namespace pinball {

CliqueDecoder::CliqueDecoder(const DecodingGraph& graph)
    : graph_(&graph), per_layer_(graph.per_layer()) {
  const int layers = graph.num_layers();
  bulk_.assign(layers, std::vector<std::vector<Neighbor>>(per_layer_));
  boundary_.assign(layers, std::vector<int>(per_layer_, -1));
  for (int e = 0; e < graph.num_edges(); ++e) {
    const GraphEdge& edge = graph.edge(e);
    const int l = graph.layer_of(edge.u);
    const int a = graph.ancilla_of(edge.u);
    if (edge.cls == EdgeClass::kEdgeSpace) {
      boundary_[l][a] = e;
    } else if (edge.cls == EdgeClass::kBulkSpace) {
      const int b = graph.ancilla_of(edge.v);
      bulk_[l][a].push_back({b, e});
      bulk_[l][b].push_back({a, e});
    }
  }
  on_observable_.assign(graph.lattice().num_data(), 0);
  for (int q : graph.lattice().observable()) on_observable_[q] = 1;
}

bool CliqueDecoder::run_window(int l, std::vector<uint8_t>& prev, const std::vector<uint8_t>& curr,
                               std::vector<uint8_t>& correction, int& fired) const {
  auto apply = [&](int e) {
    for (int q : graph_->edge(e).correction) correction[q] ^= 1;
    ++fired;
  };
  const auto& bulk = bulk_[l];
  const std::vector<uint8_t> snapshot = prev;
  auto active_neighbors = [&](int a, int* only) {
    int n = 0;
    for (const auto& nb : bulk[a]) {
      if (snapshot[nb.ancilla]) {
        ++n;
        if (only) *only = nb.ancilla;
      }
    }
    return n;
  };

  for (int a = 0; a < per_layer_; ++a) {
    if (snapshot[a] && boundary_[l][a] >= 0 && active_neighbors(a, nullptr) == 0) {
      apply(boundary_[l][a]);
      prev[a] = 0;
    }
  }
  for (int a = 0; a < per_layer_; ++a) {
    int b = -1;
    if (!snapshot[a] || active_neighbors(a, &b) != 1 || b < a) continue;
    int back = -1;
    if (active_neighbors(b, &back) != 1 || back != a) continue;
    for (const auto& nb : bulk[a]) {
      if (nb.ancilla == b) apply(nb.edge);
    }
    prev[a] = 0;
    prev[b] = 0;
  }
  for (int a = 0; a < per_layer_; ++a) {
    if (prev[a] && curr[a]) prev[a] = 0;
  }
  return std::none_of(prev.begin(), prev.end(), [](uint8_t b) { return b != 0; });
}

PredecodeResult CliqueDecoder::decode(const DetectorBlock& block) const {
  if (block.layers != graph_->num_layers() || block.per_layer != per_layer_) {
    throw std::invalid_argument("detector block does not match the decoder");
  }
  PredecodeResult r;
  std::vector<uint8_t> correction(graph_->lattice().num_data(), 0);
  std::vector<uint8_t> prev(per_layer_, 0);
  std::vector<uint8_t> curr(per_layer_, 0);
  for (int l = 0; l <= block.layers; ++l) {
    prev.swap(curr);
    if (l < block.layers) {
      auto layer = block.layer(l);
      std::copy(layer.begin(), layer.end(), curr.begin());
    } else {
      std::fill(curr.begin(), curr.end(), 0);
    }
    if (l == 0) continue;
    if (!run_window(l - 1, prev, curr, correction, r.fired)) {
      r.complex = true;
      r.complex_layer = l - 1;
      return r;
    }
  }
  uint8_t parity = 0;
  for (size_t q = 0; q < correction.size(); ++q) parity ^= correction[q] & on_observable_[q];
  r.predicted_flip = parity != 0;
  r.correction = std::move(correction);
  return r;
}

}  // namespace pinball
