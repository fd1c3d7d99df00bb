// Command-line front end for the predecoding lab.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 invariant
// violation inside the library.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pinball/config.hpp"
#include "pinball/harness.hpp"
#include "pinball/pinball.hpp"

namespace {

using namespace pinball;

constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

struct Options {
  std::string config_path;
  std::string d;
  std::string p;
  std::string shots;
  std::string seed;
  std::string predecoder;
  std::string threads;
  bool no_l2 = false;
  std::vector<std::string> sets;
  std::string format = "csv";
  std::string output;
  std::string records;
};

void add_common(CLI::App* sub, Options& o, bool sampling) {
  sub->add_option("-c,--config", o.config_path, "key = value config file");
  sub->add_option("-d,--distance", o.d, "code distance, or a comma list");
  sub->add_option("-p,--rate", o.p, "physical error rate, or a comma list");
  sub->add_option("-o,--output", o.output, "output file (default stdout)");
  sub->add_option("--set", o.sets, "extra key=value override, repeatable");
  if (!sampling) return;
  sub->add_option("-n,--shots", o.shots, "blocks per configuration");
  sub->add_option("-s,--seed", o.seed, "master seed");
  sub->add_option("--predecoder", o.predecoder, "pinball, clique, none (comma list)");
  sub->add_option("-j,--threads", o.threads, "worker threads (default PINBALL_THREADS or 1)");
  sub->add_flag("--no-l2", o.no_l2, "skip matching of complex blocks");
  sub->add_option("-f,--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

LabConfig build_config(const Options& o) {
  LabConfig c;
  c.threads = default_threads();
  if (!o.config_path.empty()) c = load_config(o.config_path, c);
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) apply_setting(c, key, v);
  };
  set("d", o.d);
  set("p", o.p);
  set("shots", o.shots);
  set("seed", o.seed);
  set("predecoder", o.predecoder);
  set("threads", o.threads);
  if (o.no_l2) apply_setting(c, "l2", "false");
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate_config(c);
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + o.output + "'");
  out << text;
}

std::string echo_block(const LabConfig& c) {
  std::string s;
  for (const auto& line : echo_config(c)) s += "# " + line + "\n";
  return s;
}

std::string render_reports(const Options& o, const LabConfig& c,
                           const std::vector<RunReport>& reports) {
  if (o.format == "json") return report_json(reports, echo_config(c));
  std::string s = echo_block(c) + csv_header() + "\n";
  for (const auto& r : reports) s += csv_row(r) + "\n";
  return s;
}

// Writes the blocks the experiment evaluates, in shot order.
void write_records(const std::string& path, const LabConfig& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open records file '" + path + "'");
  const MemoryCircuit circuit(c.distances.front(), c.rates.front());
  const ShotSimulator sim(circuit);
  DetectorBlock b;
  std::vector<FaultEvent> events;
  for (uint64_t s = 0; s < c.shots; ++s) {
    sim.sample(shot_seed(c.seed, s), b, events);
    write_record(out, b, circuit.rounds(), s);
  }
}

int cmd_run(const Options& o, bool sweep) {
  const LabConfig c = build_config(o);
  if (!sweep && (c.distances.size() != 1 || c.rates.size() != 1)) {
    throw ConfigError("run takes a single d and p; use sweep for lists");
  }
  if (!o.records.empty()) write_records(o.records, c);
  std::vector<RunReport> all;
  for (int d : c.distances) {
    for (double p : c.rates) {
      for (auto& r : run_experiment(run_config(c, d, p))) all.push_back(r);
    }
  }
  emit(o, render_reports(o, c, all));
  return 0;
}

int cmd_dump_graph(const Options& o) {
  const LabConfig c = build_config(o);
  std::string s;
  for (int d : c.distances) {
    for (double p : c.rates) s += dump_graph(DecodingGraph(MemoryCircuit(d, p)));
  }
  emit(o, s);
  return 0;
}

int cmd_dump_pipeline(const Options& o) {
  const LabConfig c = build_config(o);
  std::string s;
  for (int d : c.distances) {
    const MemoryCircuit circuit(d, c.rates.front());
    const DecodingGraph graph(circuit);
    s += dump_pipeline(PinballDecoder(graph));
  }
  emit(o, s);
  return 0;
}

// Structural checks; the library throws std::logic_error on any violation.
int cmd_validate(const Options& o) {
  const LabConfig c = build_config(o);
  std::ostringstream out;
  bool ok = true;
  for (int d : c.distances) {
    for (double p : c.rates) {
      const MemoryCircuit circuit(d, p);
      const auto faults = enumerate_single_faults(circuit);
      const DecodingGraph graph(circuit, faults);
      const PinballDecoder decoder(graph);
      int failures = 0;
      for (const auto& e : graph.edges()) {
        DetectorBlock b(d, graph.num_layers(), graph.per_layer());
        b.bits[e.u] = 1;
        if (!graph.is_boundary(e.v)) b.bits[e.v] = 1;
        const PredecodeResult r = decoder.decode(b);
        std::vector<int> diff;
        if (!r.complex) {
          std::vector<uint8_t> dense = r.correction;
          for (int q : e.correction) dense[q] ^= 1;
          for (int q = 0; q < static_cast<int>(dense.size()); ++q) {
            if (dense[q]) diff.push_back(q);
          }
        }
        bool flip = false;
        for (int q : diff) flip ^= graph.lattice().on_observable(q);
        const auto syn = graph.syndrome_of(diff);
        const bool equivalent =
            !r.complex && !flip && std::none_of(syn.begin(), syn.end(), [](uint8_t b) { return b; });
        if (!equivalent) ++failures;
      }
      out << "d=" << d << " p=" << p << " faults=" << faults.size()
          << " edges=" << graph.num_edges() << " stages=" << kNumStages
          << " single_edge_failures=" << failures << (failures ? " FAIL" : " ok") << "\n";
      ok &= failures == 0;
    }
  }
  emit(o, out.str());
  return ok ? 0 : kExitInvariant;
}

int cmd_histogram(const Options& o) {
  const LabConfig c = build_config(o);
  std::string s = echo_block(c) + "d,p,shots,kind,key,count,fraction\n";
  char buf[256];
  for (int d : c.distances) {
    for (double p : c.rates) {
      const ChainHistogram h = chain_length_histogram(d, p, c.shots, c.seed, c.threads);
      for (size_t len = 0; len < h.max_length.size(); ++len) {
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%llu,max_chain_length,%zu,%llu,%.10g\n", d, p,
                      static_cast<unsigned long long>(h.shots), len,
                      static_cast<unsigned long long>(h.max_length[len]),
                      static_cast<double>(h.max_length[len]) / h.shots);
        s += buf;
      }
      for (int k = 0; k < kNumEdgeClasses; ++k) {
        const double frac = h.single_edge_chains
                                ? static_cast<double>(h.single_edge_classes[k]) / h.single_edge_chains
                                : 0.0;
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%llu,single_edge_class,%s,%llu,%.10g\n", d, p,
                      static_cast<unsigned long long>(h.shots), to_string(static_cast<EdgeClass>(k)),
                      static_cast<unsigned long long>(h.single_edge_classes[k]), frac);
        s += buf;
      }
    }
  }
  emit(o, s);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pinball predecoder lab: sample, predecode and match surface-code blocks"};
  app.require_subcommand(1);
  Options run_o, sweep_o, graph_o, pipe_o, val_o, hist_o;
  auto* run = app.add_subcommand("run", "evaluate predecoders at one (d, p)");
  add_common(run, run_o, true);
  run->add_option("--records", run_o.records, "also write the sampled blocks as binary records");
  auto* sweep = app.add_subcommand("sweep", "evaluate predecoders over the d x p grid");
  add_common(sweep, sweep_o, true);
  auto* dump_g = app.add_subcommand("dump-graph", "print the decoding graph");
  add_common(dump_g, graph_o, false);
  auto* dump_p = app.add_subcommand("dump-pipeline", "print the Pinball stage assignment");
  add_common(dump_p, pipe_o, false);
  auto* validate = app.add_subcommand("validate", "check structural invariants");
  add_common(validate, val_o, false);
  auto* histogram = app.add_subcommand("histogram", "maximum error-chain length per block");
  add_common(histogram, hist_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_o, false);
    if (*sweep) return cmd_run(sweep_o, true);
    if (*dump_g) return cmd_dump_graph(graph_o);
    if (*dump_p) return cmd_dump_pipeline(pipe_o);
    if (*validate) return cmd_validate(val_o);
    if (*histogram) return cmd_histogram(hist_o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::logic_error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitConfig;
}
