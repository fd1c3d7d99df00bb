#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pinball/decoding_graph.hpp"

namespace pinball {

enum class PredecoderKind : uint8_t { kPinball, kClique, kNone };

const char* to_string(PredecoderKind k);
// Throws std::invalid_argument for unknown names.
PredecoderKind parse_predecoder(const std::string& name);

struct EnergyParams {
  double tx_pj_per_bit = 2.46;
  int packet_bits = 64;
  int header_bits = 32;
  double hp_volts = 0.8;
  double hp_mhz = 100.0;
  double lp_volts = 0.48;
  double lp_mhz = 12.5;
  double budget_w = 1.5;
  // Predecoder power in HP mode, interpolated linearly in d^2 between the
  // two anchors unless p_hp_mw is positive.
  double p_hp_d3_mw = 0.04;
  double p_hp_d21_mw = 0.56;
  double p_hp_mw = 0.0;
  int stages = 9;
};

struct EnergyReport {
  double block_bits = 0.0;
  double p_hp_mw = 0.0;
  double p_lp_mw = 0.0;
  double predecoder_pj = 0.0;
  double transmission_pj = 0.0;
  double baseline_pj = 0.0;
  double savings = 0.0;
};

// Packet size over payload size.
double packet_overhead(const EnergyParams& e);
// Dynamic power reduction of LP over HP mode, (V_hp^2 f_hp) / (V_lp^2 f_lp).
double power_reduction(double hp_volts, double hp_mhz, double lp_volts, double lp_mhz);
double hp_power_mw(const EnergyParams& e, int d);
// Syndrome bits per d-round block: d rounds of (d^2 - 1) / 2 X syndromes.
double block_bits(int d);
EnergyReport energy_model(const EnergyParams& e, double coverage, int d);
// Number of logical qubits whose predecoders fit in the budget.
int64_t capacity(double budget_w, double p_hp_mw);
// Link power in mW for a bit rate in Gb/s.
double transmission_power_mw(double gbps, double pj_per_bit, double overhead);

struct Savings {
  double factor = 1.0;
  bool lower_bound = false;  // no block was offloaded; factor is the shot count
};
// 1 / (1 - coverage) for coverage < 1.
Savings bandwidth_savings(double coverage, uint64_t shots);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_interval(uint64_t successes, uint64_t trials, double z = 1.959963984540054);

struct RunConfig {
  int distance = 3;
  double p = 1e-3;
  uint64_t shots = 10000;
  uint64_t seed = 1;
  std::vector<PredecoderKind> predecoders = {PredecoderKind::kPinball};
  bool decode_l2 = true;
  int threads = 1;
  EnergyParams energy;
};

struct RunReport {
  int distance = 0;
  double p = 0.0;
  PredecoderKind predecoder = PredecoderKind::kPinball;
  uint64_t seed = 0;
  uint64_t shots = 0;
  uint64_t complex_blocks = 0;
  uint64_t l1_correct = 0;       // non-complex blocks decoded correctly
  uint64_t logical_errors = 0;   // after L2; only meaningful with decode_l2
  bool l2_decoded = false;
  double coverage = 0.0;
  double accuracy = 0.0;
  double ler = 0.0;
  Interval ler_ci;
  Savings savings;
  EnergyReport energy;
};

// Samples `shots` blocks once and evaluates every requested predecoder on the
// same blocks. Complex blocks (all blocks for kNone) go to MWPM, which runs at
// most once per block. Results do not depend on the thread count.
std::vector<RunReport> run_experiment(const RunConfig& config);

struct ChainHistogram {
  int distance = 0;
  double p = 0.0;
  uint64_t shots = 0;
  std::vector<uint64_t> max_length;  // blocks by longest chain, index = edges
  std::array<uint64_t, kNumEdgeClasses> single_edge_classes{};
  uint64_t single_edge_chains = 0;
};

// Connected components of the realized fault edges (an edge is realized when
// an odd number of its faults fire). Boundary vertices do not join chains.
ChainHistogram chain_length_histogram(int d, double p, uint64_t shots, uint64_t seed, int threads = 1);

// Default worker count: PINBALL_THREADS if set and positive, else 1.
int default_threads();

std::string csv_header();
std::string csv_row(const RunReport& r);
// config_echo holds "key=value" lines; they become the "config" object.
std::string report_json(const std::vector<RunReport>& reports,
                        const std::vector<std::string>& config_echo);

}  // namespace pinball
