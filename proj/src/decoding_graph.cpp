#include "pinball/decoding_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pinball {

namespace {

bool correction_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<int> symmetric_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

DecodingGraph::DecodingGraph(const MemoryCircuit& circuit) : lattice_(circuit.lattice()) {
  build(circuit, enumerate_single_faults(circuit));
}

DecodingGraph::DecodingGraph(const MemoryCircuit& circuit, const std::vector<SingleFault>& faults)
    : lattice_(circuit.lattice()) {
  build(circuit, faults);
}

EdgeClass DecodingGraph::classify(int u, int v) const {
  if (is_boundary(v)) return EdgeClass::kEdgeSpace;
  const Ancilla& a = lattice_.x_ancilla(ancilla_of(u));
  const Ancilla& b = lattice_.x_ancilla(ancilla_of(v));
  const int dl = layer_of(v) - layer_of(u);
  const int dr = b.prow - a.prow;
  const int dc = b.pcol - a.pcol;
  const bool diagonal = std::abs(dr) == 1 && std::abs(dc) == 1;
  if (dl == 0 && diagonal) return EdgeClass::kBulkSpace;
  if (dl == 1) {
    if (dr == 0 && dc == 0) return EdgeClass::kTime;
    if (diagonal) return EdgeClass::kSpacetimeSingle;
    if (dc == 0 && std::abs(dr) == 2) return EdgeClass::kHook;
  }
  std::ostringstream msg;
  msg << "detector pair outside the edge taxonomy: (" << layer_of(u) << "," << a.prow << ","
      << a.pcol << ") - (" << layer_of(v) << "," << b.prow << "," << b.pcol << ")";
  throw std::logic_error(msg.str());
}

std::vector<int> DecodingGraph::canonical_correction(std::vector<int> residual) const {
  std::sort(residual.begin(), residual.end());
  bool improved = true;
  while (improved) {
    improved = false;
    for (int z = 0; z < lattice_.num_z_ancillas(); ++z) {
      auto candidate = symmetric_difference(residual, lattice_.z_support(z));
      if (correction_less(candidate, residual)) {
        residual = std::move(candidate);
        improved = true;
      }
    }
  }
  return residual;
}

std::vector<uint8_t> DecodingGraph::syndrome_of(const std::vector<int>& data) const {
  std::vector<uint8_t> s(per_layer_, 0);
  for (int q : data) {
    for (int a : lattice_.x_ancillas_of_data(q)) s[a] ^= 1;
  }
  return s;
}

void DecodingGraph::build(const MemoryCircuit& circuit, const std::vector<SingleFault>& faults) {
  distance_ = circuit.distance();
  layers_ = circuit.num_layers();
  per_layer_ = circuit.detectors_per_layer();
  std::map<std::pair<int, int>, int> index;
  fault_edge_.assign(faults.size(), -1);

  for (size_t i = 0; i < faults.size(); ++i) {
    const SingleFault& f = faults[i];
    if (f.detectors.empty()) {
      if (f.logical_flip) throw std::logic_error("undetectable logical fault: " + describe(f));
      continue;
    }
    if (f.detectors.size() > 2) {
      throw std::logic_error("fault lights more than two detectors: " + describe(f));
    }
    int u = f.detectors[0];
    int v = -1;
    if (f.detectors.size() == 2) {
      v = f.detectors[1];
    } else {
      v = f.logical_flip ? left_boundary() : right_boundary();
    }
    auto correction = canonical_correction(f.data_residual);

    auto [it, inserted] = index.try_emplace({u, v}, static_cast<int>(edges_.size()));
    if (inserted) {
      GraphEdge e;
      e.u = u;
      e.v = v;
      e.cls = classify(u, v);
      e.probability = f.probability;
      e.correction = std::move(correction);
      e.logical_flip = f.logical_flip;
      e.num_faults = 1;
      edges_.push_back(std::move(e));
    } else {
      GraphEdge& e = edges_[it->second];
      if (e.logical_flip != f.logical_flip) {
        throw std::logic_error("merged faults disagree on the logical: " + describe(f));
      }
      e.probability = merge_probability(e.probability, f.probability);
      if (correction_less(correction, e.correction)) e.correction = std::move(correction);
      ++e.num_faults;
    }
    fault_edge_[i] = it->second;
  }

  adj_.assign(num_vertices(), {});
  for (int i = 0; i < num_edges(); ++i) {
    GraphEdge& e = edges_[i];
    e.weight = e.probability > 0.0 ? std::log((1.0 - e.probability) / e.probability)
                                   : std::numeric_limits<double>::infinity();
    // The correction must reproduce the spatial projection of its endpoints.
    std::vector<uint8_t> projected(per_layer_, 0);
    projected[ancilla_of(e.u)] ^= 1;
    if (!is_boundary(e.v)) projected[ancilla_of(e.v)] ^= 1;
    if (syndrome_of(e.correction) != projected) {
      throw std::logic_error("edge correction does not reproduce its syndrome");
    }
    adj_[e.u].push_back({e.v, i});
    adj_[e.v].push_back({e.u, i});
  }
}

int DecodingGraph::find_edge(int u, int v) const {
  if (u < 0 || u >= num_vertices()) return -1;
  for (const auto& [w, e] : adj_[u]) {
    if (w == v) return e;
  }
  return -1;
}

std::array<double, kNumEdgeClasses> class_fractions(const DecodingGraph& g) {
  std::array<double, kNumEdgeClasses> out{};
  double total = 0.0;
  for (const auto& e : g.edges()) {
    out[static_cast<int>(e.cls)] += e.probability;
    total += e.probability;
  }
  if (total > 0.0) {
    for (double& x : out) x /= total;
  }
  return out;
}

const char* to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::kBulkSpace: return "bulk_space";
    case EdgeClass::kEdgeSpace: return "edge_space";
    case EdgeClass::kTime: return "time";
    case EdgeClass::kSpacetimeSingle: return "spacetime_single";
    case EdgeClass::kHook: return "hook";
  }
  return "?";
}

std::string dump_graph(const DecodingGraph& g) {
  std::ostringstream out;
  out << "# decoding graph d=" << g.distance() << " layers=" << g.num_layers()
      << " detectors=" << g.num_detectors() << " edges=" << g.num_edges() << "\n";
  auto name = [&](int v) {
    if (v == g.left_boundary()) return std::string("L");
    if (v == g.right_boundary()) return std::string("R");
    const Ancilla& a = g.lattice().x_ancilla(g.ancilla_of(v));
    std::ostringstream s;
    s << g.layer_of(v) << ":(" << a.prow << "," << a.pcol << ")";
    return s.str();
  };
  out.precision(6);
  for (const auto& e : g.edges()) {
    out << name(e.u) << " " << name(e.v) << " " << to_string(e.cls) << " p=" << e.probability
        << " w=" << e.weight << " faults=" << e.num_faults << " obs=" << e.logical_flip
        << " corr=[";
    for (size_t i = 0; i < e.correction.size(); ++i) out << (i ? "," : "") << e.correction[i];
    out << "]\n";
  }
  return out.str();
}

}  // namespace pinball
