#include "pinball/pinball.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pinball {

namespace {

bool any_set(const std::vector<uint8_t>& v) {
  return std::any_of(v.begin(), v.end(), [](uint8_t b) { return b != 0; });
}

}  // namespace

int bulk_color(const Lattice& lat, int data_qubit) {
  const DataCoord c = lat.data_coord(data_qubit);
  return 2 * (c.row % 2) + (c.col % 2);
}

PinballDecoder::PinballDecoder(const DecodingGraph& graph)
    : graph_(&graph), per_layer_(graph.per_layer()), windows_(graph.num_layers() + 1) {
  const Lattice& lat = graph.lattice();
  for (int e = 0; e < graph.num_edges(); ++e) {
    const GraphEdge& edge = graph.edge(e);
    const int lu = graph.layer_of(edge.u);
    const int au = graph.ancilla_of(edge.u);
    Primitive p;
    p.edge = e;
    p.center = {false, au};
    const int w = lu + 1;
    switch (edge.cls) {
      case EdgeClass::kTime:
        p.stage = Stage::kM;
        p.neighbor = {true, au};
        break;
      case EdgeClass::kBulkSpace: {
        const int av = graph.ancilla_of(edge.v);
        const auto shared = shared_data_qubit(lat, au, av);
        if (!shared) throw std::logic_error("bulk edge without a shared data qubit");
        p.stage = static_cast<Stage>(static_cast<int>(Stage::kB1) + bulk_color(lat, *shared));
        p.neighbor = {false, av};
        break;
      }
      case EdgeClass::kSpacetimeSingle: {
        const int av = graph.ancilla_of(edge.v);
        const Ancilla& a = lat.x_ancilla(au);
        const Ancilla& b = lat.x_ancilla(av);
        if (b.prow != a.prow + 1) {
          throw std::logic_error("spacetime edge leaning upwards between rounds");
        }
        p.stage = b.pcol < a.pcol ? Stage::kST1 : Stage::kST2;
        p.neighbor = {true, av};
        break;
      }
      case EdgeClass::kHook:
        p.stage = Stage::kH;
        p.neighbor = {true, graph.ancilla_of(edge.v)};
        break;
      case EdgeClass::kEdgeSpace:
        p.stage = Stage::kE;
        p.artificial = true;
        break;
    }
    windows_.at(w)[static_cast<int>(p.stage)].push_back(p);
  }
  on_observable_.assign(lat.num_data(), 0);
  for (int q : lat.observable()) on_observable_[q] = 1;
  const std::string err = check_pipeline(*this);
  if (!err.empty()) throw std::logic_error(err);
}

PipelineState PinballDecoder::start() const {
  PipelineState s;
  s.prev.assign(per_layer_, 0);
  s.curr.assign(per_layer_, 0);
  s.correction.assign(graph_->lattice().num_data(), 0);
  return s;
}

void PinballDecoder::run_window(PipelineState& state, int w) const {
  // Every primitive has an endpoint in S_{i-1}.
  if (!any_set(state.prev)) return;
  for (const auto& stage : windows_[w]) {
    for (const Primitive& p : stage) {
      uint8_t& c = (p.center.current ? state.curr : state.prev)[p.center.ancilla];
      if (!c) continue;
      if (p.artificial) {
        c = 0;
      } else {
        uint8_t& n = (p.neighbor.current ? state.curr : state.prev)[p.neighbor.ancilla];
        if (!n) continue;
        c = 0;
        n = 0;
      }
      for (int q : graph_->edge(p.edge).correction) state.correction[q] ^= 1;
      ++state.fired;
    }
  }
}

void PinballDecoder::push_layer(PipelineState& state, std::span<const uint8_t> layer) const {
  if (static_cast<int>(layer.size()) != per_layer_) {
    throw std::invalid_argument("layer size does not match the decoder");
  }
  if (state.next_layer >= graph_->num_layers()) throw std::logic_error("block already complete");
  const int w = state.next_layer++;
  if (state.complex) return;
  std::swap(state.prev, state.curr);
  std::copy(layer.begin(), layer.end(), state.curr.begin());
  run_window(state, w);
  if (any_set(state.prev)) {
    state.complex = true;
    state.complex_layer = w - 1;
  }
}

PredecodeResult PinballDecoder::finish(PipelineState& state) const {
  if (state.next_layer != graph_->num_layers()) throw std::logic_error("block is incomplete");
  if (!state.complex) {
    std::swap(state.prev, state.curr);
    std::fill(state.curr.begin(), state.curr.end(), 0);
    run_window(state, graph_->num_layers());
    if (any_set(state.prev)) {
      state.complex = true;
      state.complex_layer = graph_->num_layers() - 1;
    }
  }
  PredecodeResult r;
  r.complex = state.complex;
  r.complex_layer = state.complex_layer;
  r.fired = state.fired;
  if (!state.complex) {
    r.correction = std::move(state.correction);
    uint8_t parity = 0;
    for (size_t q = 0; q < r.correction.size(); ++q) parity ^= r.correction[q] & on_observable_[q];
    r.predicted_flip = parity != 0;
  }
  return r;
}

PredecodeResult PinballDecoder::decode(const DetectorBlock& block) const {
  if (block.layers != graph_->num_layers() || block.per_layer != per_layer_) {
    throw std::invalid_argument("detector block does not match the decoder");
  }
  PipelineState state = start();
  for (int l = 0; l < block.layers; ++l) push_layer(state, block.layer(l));
  return finish(state);
}

const char* to_string(Stage s) {
  switch (s) {
    case Stage::kM: return "M";
    case Stage::kB1: return "B(1)";
    case Stage::kB2: return "B(2)";
    case Stage::kB3: return "B(3)";
    case Stage::kB4: return "B(4)";
    case Stage::kST1: return "ST(1)";
    case Stage::kST2: return "ST(2)";
    case Stage::kH: return "H";
    case Stage::kE: return "E";
  }
  return "?";
}

std::string dump_pipeline(const PinballDecoder& dec) {
  const DecodingGraph& g = dec.graph();
  const Lattice& lat = g.lattice();
  std::ostringstream out;
  out << "# pinball pipeline d=" << g.distance() << " stages=" << kNumStages
      << " windows=" << dec.num_windows() << "\n";
  auto slot = [&](int w, Slot s) {
    const Ancilla& a = lat.x_ancilla(s.ancilla);
    std::ostringstream o;
    o << (w - 1 + (s.current ? 1 : 0)) << ":(" << a.prow << "," << a.pcol << ")";
    return o.str();
  };
  for (int s = 0; s < kNumStages; ++s) {
    out << "stage " << to_string(static_cast<Stage>(s)) << "\n";
    for (int w = 0; w < dec.num_windows(); ++w) {
      for (const Primitive& p : dec.window(w)[s]) {
        out << "  " << slot(w, p.center) << " " << (p.artificial ? "ARTIFICIAL" : slot(w, p.neighbor))
            << "\n";
      }
    }
  }
  return out.str();
}

std::string check_pipeline(const PinballDecoder& dec) {
  const DecodingGraph& g = dec.graph();
  std::vector<int> owners(g.num_edges(), 0);
  for (int w = 0; w < dec.num_windows(); ++w) {
    for (int s = 0; s < kNumStages; ++s) {
      std::set<std::pair<bool, int>> used;
      for (const Primitive& p : dec.window(w)[s]) {
        ++owners.at(p.edge);
        if (!used.insert({p.center.current, p.center.ancilla}).second ||
            (!p.artificial && !used.insert({p.neighbor.current, p.neighbor.ancilla}).second)) {
          std::ostringstream msg;
          msg << "stage " << to_string(static_cast<Stage>(s)) << " in window " << w
              << " has two primitives on one slot";
          return msg.str();
        }
        // The primitive must check exactly its edge's endpoints.
        const GraphEdge& e = g.edge(p.edge);
        const int cu = g.vertex(w - 1 + p.center.current, p.center.ancilla);
        const int cv = p.artificial ? -1 : g.vertex(w - 1 + p.neighbor.current, p.neighbor.ancilla);
        const bool match = p.artificial ? (cu == e.u && g.is_boundary(e.v))
                                        : ((cu == e.u && cv == e.v) || (cu == e.v && cv == e.u));
        if (!match) return "primitive does not sit on its edge";
      }
    }
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (owners[e] != 1) {
      return "edge " + std::to_string(e) + " owned by " + std::to_string(owners[e]) + " primitives";
    }
  }
  return "";
}

}  // namespace pinball
