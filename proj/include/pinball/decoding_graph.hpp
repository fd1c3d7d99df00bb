#pragma once

#include <array>
#include <string>
#include <vector>

#include "pinball/circuit.hpp"

namespace pinball {

enum class EdgeClass : uint8_t {
  kBulkSpace,        // diagonal neighbours, same layer
  kEdgeSpace,        // one detector and a boundary
  kTime,             // same ancilla, consecutive layers
  kSpacetimeSingle,  // diagonal neighbours, consecutive layers
  kHook,             // same column two plaquette rows apart, consecutive layers
};
constexpr int kNumEdgeClasses = 5;

struct GraphEdge {
  int u = -1;  // detector vertex, u < v
  int v = -1;  // detector or boundary vertex
  double probability = 0.0;
  double weight = 0.0;  // ln((1 - p) / p)
  EdgeClass cls = EdgeClass::kTime;
  std::vector<int> correction;  // data qubits, ascending
  bool logical_flip = false;
  int num_faults = 0;
};

// Detector graph of a memory circuit. Vertices 0..num_detectors()-1 are
// detectors (layer * per_layer + ancilla), followed by the left and right
// boundary vertices. Every single fault with a non-empty signature maps to
// exactly one edge; faults sharing a signature are merged.
class DecodingGraph {
 public:
  // Throws std::logic_error if a fault does not fit the edge taxonomy, a
  // silent fault flips the logical, or merged faults disagree.
  explicit DecodingGraph(const MemoryCircuit& circuit);
  DecodingGraph(const MemoryCircuit& circuit, const std::vector<SingleFault>& faults);

  int distance() const { return distance_; }
  int num_layers() const { return layers_; }
  int per_layer() const { return per_layer_; }
  int num_detectors() const { return layers_ * per_layer_; }
  int num_vertices() const { return num_detectors() + 2; }
  int left_boundary() const { return num_detectors(); }
  int right_boundary() const { return num_detectors() + 1; }
  bool is_boundary(int v) const { return v >= num_detectors(); }
  int layer_of(int v) const { return v / per_layer_; }
  int ancilla_of(int v) const { return v % per_layer_; }
  int vertex(int layer, int ancilla) const { return layer * per_layer_ + ancilla; }

  const Lattice& lattice() const { return lattice_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  const GraphEdge& edge(int e) const { return edges_.at(e); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  // (neighbour, edge index) pairs, ordered by edge index.
  const std::vector<std::pair<int, int>>& neighbors(int v) const { return adj_.at(v); }
  // Edge joining u and v, or -1.
  int find_edge(int u, int v) const;
  // Edge of the i-th enumerated single fault, -1 for silent faults.
  const std::vector<int>& fault_edges() const { return fault_edge_; }

  // Data-qubit syndrome of a correction, one bit per X ancilla.
  std::vector<uint8_t> syndrome_of(const std::vector<int>& data) const;

 private:
  void build(const MemoryCircuit& circuit, const std::vector<SingleFault>& faults);
  EdgeClass classify(int u, int v) const;
  std::vector<int> canonical_correction(std::vector<int> residual) const;

  Lattice lattice_;
  int distance_ = 0;
  int layers_ = 0;
  int per_layer_ = 0;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<std::pair<int, int>>> adj_;
  std::vector<int> fault_edge_;
};

// Merged probability of two independent mechanisms with the same signature.
inline double merge_probability(double a, double b) { return a + b - 2 * a * b; }

// Probability mass per edge class, normalized to sum to one.
std::array<double, kNumEdgeClasses> class_fractions(const DecodingGraph& g);

const char* to_string(EdgeClass c);
// One edge per line, stable order.
std::string dump_graph(const DecodingGraph& g);

}  // namespace pinball
