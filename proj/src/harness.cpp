#include "pinball/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pinball/clique.hpp"
#include "pinball/matching.hpp"
#include "pinball/pinball.hpp"

namespace pinball {

const char* to_string(PredecoderKind k) {
  switch (k) {
    case PredecoderKind::kPinball: return "pinball";
    case PredecoderKind::kClique: return "clique";
    case PredecoderKind::kNone: return "none";
  }
  return "?";
}

PredecoderKind parse_predecoder(const std::string& name) {
  if (name == "pinball") return PredecoderKind::kPinball;
  if (name == "clique") return PredecoderKind::kClique;
  if (name == "none") return PredecoderKind::kNone;
  throw std::invalid_argument("unknown predecoder '" + name + "'");
}

double packet_overhead(const EnergyParams& e) {
  if (e.packet_bits <= e.header_bits || e.header_bits < 0) {
    throw std::invalid_argument("packet must be larger than its header");
  }
  return static_cast<double>(e.packet_bits) / (e.packet_bits - e.header_bits);
}

double power_reduction(double hp_volts, double hp_mhz, double lp_volts, double lp_mhz) {
  return (hp_volts * hp_volts * hp_mhz) / (lp_volts * lp_volts * lp_mhz);
}

double hp_power_mw(const EnergyParams& e, int d) {
  if (e.p_hp_mw > 0.0) return e.p_hp_mw;
  const double t = (static_cast<double>(d) * d - 9.0) / (441.0 - 9.0);
  return e.p_hp_d3_mw + t * (e.p_hp_d21_mw - e.p_hp_d3_mw);
}

double block_bits(int d) { return static_cast<double>(d) * (d * d - 1) / 2.0; }

EnergyReport energy_model(const EnergyParams& e, double coverage, int d) {
  EnergyReport r;
  const double overhead = packet_overhead(e);
  r.block_bits = block_bits(d);
  r.p_hp_mw = hp_power_mw(e, d);
  r.p_lp_mw = r.p_hp_mw / power_reduction(e.hp_volts, e.hp_mhz, e.lp_volts, e.lp_mhz);
  // mW * ns = pJ; one round takes `stages` clock cycles.
  const double t_hp_ns = e.stages * 1e3 / e.hp_mhz;
  const double t_lp_ns = e.stages * 1e3 / e.lp_mhz;
  r.predecoder_pj = r.p_hp_mw * t_hp_ns + r.p_lp_mw * (d - 1) * t_lp_ns;
  r.transmission_pj = (1.0 - coverage) * r.block_bits * e.tx_pj_per_bit * overhead;
  r.baseline_pj = r.block_bits * e.tx_pj_per_bit * overhead;
  r.savings = r.baseline_pj / (r.predecoder_pj + r.transmission_pj);
  return r;
}

int64_t capacity(double budget_w, double p_hp_mw) {
  if (p_hp_mw <= 0.0) throw std::invalid_argument("predecoder power must be positive");
  if (budget_w <= 0.0) return 0;
  return static_cast<int64_t>(std::floor(budget_w * 1e3 / p_hp_mw));
}

double transmission_power_mw(double gbps, double pj_per_bit, double overhead) {
  return gbps * pj_per_bit * overhead;
}

Savings bandwidth_savings(double coverage, uint64_t shots) {
  if (coverage < 0.0 || coverage > 1.0) throw std::invalid_argument("coverage out of [0, 1]");
  if (coverage >= 1.0) return {static_cast<double>(shots), true};
  return {1.0 / (1.0 - coverage), false};
}

Interval wilson_interval(uint64_t successes, uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) out.lo = 0.0;
  if (successes == trials) out.hi = 1.0;
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("PINBALL_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

namespace {

struct Counts {
  uint64_t complex = 0;
  uint64_t l1_correct = 0;
  uint64_t logical_errors = 0;
};

// Splits [0, shots) into contiguous chunks and merges per-worker results.
template <typename Result, typename Work>
Result parallel_shots(uint64_t shots, int threads, Work work) {
  threads = std::max(1, threads);
  if (static_cast<uint64_t>(threads) > shots) threads = static_cast<int>(std::max<uint64_t>(1, shots));
  std::vector<Result> parts(threads);
  auto range = [&](int t) {
    const uint64_t lo = shots * t / threads;
    const uint64_t hi = shots * (t + 1) / threads;
    parts[t] = work(lo, hi);
  };
  if (threads == 1) {
    range(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(range, t);
    for (auto& th : pool) th.join();
  }
  Result total = parts[0];
  for (int t = 1; t < threads; ++t) total += parts[t];
  return total;
}

struct CountsVec {
  std::vector<Counts> v;
  CountsVec& operator+=(const CountsVec& o) {
    if (v.empty()) v.resize(o.v.size());
    for (size_t i = 0; i < o.v.size(); ++i) {
      v[i].complex += o.v[i].complex;
      v[i].l1_correct += o.v[i].l1_correct;
      v[i].logical_errors += o.v[i].logical_errors;
    }
    return *this;
  }
};

}  // namespace

std::vector<RunReport> run_experiment(const RunConfig& config) {
  if (config.shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (!(config.p > 0.0 && config.p < 0.5)) throw std::invalid_argument("p must be in (0, 0.5)");
  if (config.predecoders.empty()) throw std::invalid_argument("no predecoder requested");

  const MemoryCircuit circuit(config.distance, config.p);
  const ShotSimulator sim(circuit);
  const DecodingGraph graph(circuit, sim.faults());
  std::vector<std::unique_ptr<Predecoder>> decoders;
  for (auto k : config.predecoders) {
    if (k == PredecoderKind::kPinball) {
      decoders.push_back(std::make_unique<PinballDecoder>(graph));
    } else if (k == PredecoderKind::kClique) {
      decoders.push_back(std::make_unique<CliqueDecoder>(graph));
    } else {
      decoders.push_back(nullptr);
    }
  }
  std::unique_ptr<MatchingDecoder> matcher;
  if (config.decode_l2) matcher = std::make_unique<MatchingDecoder>(graph);

  const size_t n = decoders.size();
  const CountsVec total = parallel_shots<CountsVec>(
      config.shots, config.threads, [&](uint64_t lo, uint64_t hi) {
        CountsVec c;
        c.v.resize(n);
        DetectorBlock block;
        std::vector<FaultEvent> events;
        for (uint64_t s = lo; s < hi; ++s) {
          sim.sample(shot_seed(config.seed, s), block, events);
          int l2 = -1;  // lazily decoded MWPM flip
          for (size_t i = 0; i < n; ++i) {
            bool complex = true;
            bool flip = false;
            if (decoders[i]) {
              const PredecodeResult r = decoders[i]->decode(block);
              complex = r.complex;
              flip = r.predicted_flip;
            }
            if (complex) {
              ++c.v[i].complex;
              if (matcher) {
                if (l2 < 0) l2 = matcher->decode(block).predicted_flip ? 1 : 0;
                flip = l2 == 1;
              }
            } else if (flip == block.logical_flip) {
              ++c.v[i].l1_correct;
            }
            if (matcher && flip != block.logical_flip) {
              ++c.v[i].logical_errors;
            }
          }
        }
        return c;
      });

  std::vector<RunReport> out;
  for (size_t i = 0; i < n; ++i) {
    RunReport r;
    r.distance = config.distance;
    r.p = config.p;
    r.predecoder = config.predecoders[i];
    r.seed = config.seed;
    r.shots = config.shots;
    r.complex_blocks = total.v[i].complex;
    r.l1_correct = total.v[i].l1_correct;
    r.logical_errors = total.v[i].logical_errors;
    r.l2_decoded = config.decode_l2;
    const uint64_t covered = r.shots - r.complex_blocks;
    r.coverage = static_cast<double>(covered) / r.shots;
    r.accuracy = covered ? static_cast<double>(r.l1_correct) / covered : 0.0;
    if (r.l2_decoded) {
      r.ler = static_cast<double>(r.logical_errors) / r.shots;
      r.ler_ci = wilson_interval(r.logical_errors, r.shots);
    }
    r.savings = bandwidth_savings(r.coverage, r.shots);
    r.energy = energy_model(config.energy, r.coverage, config.distance);
    out.push_back(r);
  }
  return out;
}

namespace {

struct HistogramPart {
  std::vector<uint64_t> max_length;
  std::array<uint64_t, kNumEdgeClasses> classes{};
  uint64_t singles = 0;
  HistogramPart& operator+=(const HistogramPart& o) {
    if (max_length.size() < o.max_length.size()) max_length.resize(o.max_length.size(), 0);
    for (size_t i = 0; i < o.max_length.size(); ++i) max_length[i] += o.max_length[i];
    for (int k = 0; k < kNumEdgeClasses; ++k) classes[k] += o.classes[k];
    singles += o.singles;
    return *this;
  }
};

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

ChainHistogram chain_length_histogram(int d, double p, uint64_t shots, uint64_t seed, int threads) {
  const MemoryCircuit circuit(d, p);
  const ShotSimulator sim(circuit);
  const DecodingGraph graph(circuit, sim.faults());
  std::vector<uint32_t> first(circuit.channels().size());
  {
    uint32_t k = 0;
    for (size_t c = 0; c < first.size(); ++c) {
      first[c] = k;
      k += static_cast<uint32_t>(circuit.channels()[c].outcomes.size());
    }
  }

  const HistogramPart part = parallel_shots<HistogramPart>(shots, threads, [&](uint64_t lo,
                                                                                uint64_t hi) {
    HistogramPart h;
    std::vector<uint8_t> parity(graph.num_edges(), 0);
    std::vector<int> parent(graph.num_detectors());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> size_edges(graph.num_detectors(), 0);
    std::vector<int> touched_edges;
    std::vector<int> touched_vertices;
    std::vector<FaultEvent> events;
    for (uint64_t s = lo; s < hi; ++s) {
      ShotRng rng(shot_seed(seed, s));
      sim.sampler().sample(rng, events);
      touched_edges.clear();
      for (const auto& e : events) {
        const int edge = graph.fault_edges()[first[e.channel] + e.outcome];
        if (edge < 0) continue;
        if (!parity[edge]) touched_edges.push_back(edge);
        parity[edge] ^= 1;
      }
      touched_vertices.clear();
      int realized = 0;
      for (int e : touched_edges) {
        if (!parity[e]) continue;
        ++realized;
        const GraphEdge& ge = graph.edge(e);
        touched_vertices.push_back(ge.u);
        if (!graph.is_boundary(ge.v)) {
          touched_vertices.push_back(ge.v);
          const int a = find_root(parent, ge.u);
          const int b = find_root(parent, ge.v);
          if (a != b) {
            parent[a] = b;
            size_edges[b] += size_edges[a];
            size_edges[a] = 0;
          }
        }
        ++size_edges[find_root(parent, ge.u)];
      }
      int longest = 0;
      for (int e : touched_edges) {
        if (!parity[e]) continue;
        const int root = find_root(parent, graph.edge(e).u);
        longest = std::max(longest, size_edges[root]);
        if (size_edges[root] == 1) {
          ++h.singles;
          ++h.classes[static_cast<int>(graph.edge(e).cls)];
        }
      }
      if (h.max_length.size() <= static_cast<size_t>(longest)) h.max_length.resize(longest + 1, 0);
      ++h.max_length[longest];
      (void)realized;
      for (int e : touched_edges) parity[e] = 0;
      for (int v : touched_vertices) {
        parent[v] = v;
        size_edges[v] = 0;
      }
    }
    return h;
  });

  ChainHistogram out;
  out.distance = d;
  out.p = p;
  out.shots = shots;
  out.max_length = part.max_length;
  out.single_edge_classes = part.classes;
  out.single_edge_chains = part.singles;
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "d,p,predecoder,seed,shots,complex_blocks,coverage,l1_correct,accuracy,l2_decoded,"
         "logical_errors,ler,ler_lo,ler_hi,bandwidth_savings,savings_lower_bound,block_bits,"
         "p_hp_mw,predecoder_pj,transmission_pj,baseline_pj,energy_savings";
}

std::string csv_row(const RunReport& r) {
  std::string s;
  s += std::to_string(r.distance) + "," + fmt(r.p) + "," + to_string(r.predecoder) + "," +
       std::to_string(r.seed) + "," + std::to_string(r.shots) + "," +
       std::to_string(r.complex_blocks) + "," + fmt(r.coverage) + "," +
       std::to_string(r.l1_correct) + "," + fmt(r.accuracy) + "," + (r.l2_decoded ? "1" : "0") +
       ",";
  if (r.l2_decoded) {
    s += std::to_string(r.logical_errors) + "," + fmt(r.ler) + "," + fmt(r.ler_ci.lo) + "," +
         fmt(r.ler_ci.hi);
  } else {
    s += ",,,";
  }
  s += "," + fmt(r.savings.factor) + "," + (r.savings.lower_bound ? "1" : "0") + "," +
       fmt(r.energy.block_bits) + "," + fmt(r.energy.p_hp_mw) + "," +
       fmt(r.energy.predecoder_pj) + "," + fmt(r.energy.transmission_pj) + "," +
       fmt(r.energy.baseline_pj) + "," + fmt(r.energy.savings);
  return s;
}

std::string report_json(const std::vector<RunReport>& reports,
                        const std::vector<std::string>& config_echo) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& line : config_echo) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config echo line without '='");
    j["config"][line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    row["d"] = r.distance;
    row["p"] = r.p;
    row["predecoder"] = to_string(r.predecoder);
    row["seed"] = r.seed;
    row["shots"] = r.shots;
    row["complex_blocks"] = r.complex_blocks;
    row["coverage"] = r.coverage;
    row["l1_correct"] = r.l1_correct;
    row["accuracy"] = r.accuracy;
    if (r.l2_decoded) {
      row["logical_errors"] = r.logical_errors;
      row["ler"] = r.ler;
      row["ler_ci"] = {r.ler_ci.lo, r.ler_ci.hi};
    }
    row["bandwidth_savings"] = r.savings.factor;
    row["savings_lower_bound"] = r.savings.lower_bound;
    row["energy"] = {{"block_bits", r.energy.block_bits},
                     {"p_hp_mw", r.energy.p_hp_mw},
                     {"p_lp_mw", r.energy.p_lp_mw},
                     {"predecoder_pj", r.energy.predecoder_pj},
                     {"transmission_pj", r.energy.transmission_pj},
                     {"baseline_pj", r.energy.baseline_pj},
                     {"savings", r.energy.savings}};
    j["rows"].push_back(row);
  }
  return j.dump(2) + "\n";
}

}  // namespace pinball
