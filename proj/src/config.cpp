#include "pinball/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include "pinball/lattice.hpp"

namespace pinball {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_int(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + text + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

using Setter = std::function<void(LabConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["d"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.distances.clear();
      for (const auto& item : split_list(v)) c.distances.push_back(parse_int<int>(k, item));
      if (c.distances.empty()) throw ConfigError("empty list for " + k);
    };
    t["p"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.rates.clear();
      for (const auto& item : split_list(v)) c.rates.push_back(parse_double(k, item));
      if (c.rates.empty()) throw ConfigError("empty list for " + k);
    };
    t["shots"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      // Accepts 1e6 as well as 1000000.
      const double x = parse_double(k, v);
      if (!(x >= 1.0 && x <= 1e15) || x != std::floor(x)) {
        throw ConfigError("shots must be a whole number >= 1");
      }
      c.shots = static_cast<uint64_t>(x);
    };
    t["seed"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.seed = parse_int<uint64_t>(k, v);
    };
    t["predecoder"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.predecoders.clear();
      for (const auto& item : split_list(v)) {
        try {
          c.predecoders.push_back(parse_predecoder(item));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      if (c.predecoders.empty()) throw ConfigError("empty list for " + k);
    };
    t["l2"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.decode_l2 = parse_bool(k, v);
    };
    t["threads"] = [](LabConfig& c, const std::string& k, const std::string& v) {
      c.threads = parse_int<int>(k, v);
    };
    auto number = [&t](const char* key, double EnergyParams::*field) {
      t[key] = [field](LabConfig& c, const std::string& k, const std::string& v) {
        c.energy.*field = parse_double(k, v);
      };
    };
    auto integer = [&t](const char* key, int EnergyParams::*field) {
      t[key] = [field](LabConfig& c, const std::string& k, const std::string& v) {
        c.energy.*field = parse_int<int>(k, v);
      };
    };
    number("tx_pj_per_bit", &EnergyParams::tx_pj_per_bit);
    integer("packet_bits", &EnergyParams::packet_bits);
    integer("header_bits", &EnergyParams::header_bits);
    number("hp_volts", &EnergyParams::hp_volts);
    number("hp_mhz", &EnergyParams::hp_mhz);
    number("lp_volts", &EnergyParams::lp_volts);
    number("lp_mhz", &EnergyParams::lp_mhz);
    number("budget_w", &EnergyParams::budget_w);
    number("p_hp_d3_mw", &EnergyParams::p_hp_d3_mw);
    number("p_hp_d21_mw", &EnergyParams::p_hp_d21_mw);
    number("p_hp_mw", &EnergyParams::p_hp_mw);
    integer("stages", &EnergyParams::stages);
    return t;
  }();
  return table;
}

}  // namespace

void apply_setting(LabConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, trim(value));
}

LabConfig parse_config(std::istream& in, LabConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

LabConfig load_config(const std::string& path, LabConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void validate_config(const LabConfig& c) {
  for (int d : c.distances) {
    if (d < Lattice::kMinDistance || d > Lattice::kMaxDistance || d % 2 == 0) {
      throw ConfigError("distance must be odd and in [" + std::to_string(Lattice::kMinDistance) +
                        ", " + std::to_string(Lattice::kMaxDistance) + "], got " +
                        std::to_string(d));
    }
  }
  for (double p : c.rates) {
    if (!(p > 0.0 && p < 0.5)) throw ConfigError("p must be in (0, 0.5), got " + fmt(p));
  }
  if (c.shots < 1) throw ConfigError("shots must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  const EnergyParams& e = c.energy;
  if (e.packet_bits <= e.header_bits || e.header_bits < 0) {
    throw ConfigError("packet_bits must exceed header_bits >= 0");
  }
  if (e.hp_volts <= 0 || e.hp_mhz <= 0 || e.lp_volts <= 0 || e.lp_mhz <= 0) {
    throw ConfigError("voltages and clock rates must be positive");
  }
  if (e.tx_pj_per_bit < 0 || e.budget_w < 0 || e.p_hp_mw < 0 || e.p_hp_d3_mw <= 0 ||
      e.p_hp_d21_mw <= 0 || e.stages < 1) {
    throw ConfigError("energy parameters out of range");
  }
}

std::vector<std::string> echo_config(const LabConfig& c) {
  std::vector<std::string> out;
  std::string d, p, pre;
  for (size_t i = 0; i < c.distances.size(); ++i) d += (i ? "," : "") + std::to_string(c.distances[i]);
  for (size_t i = 0; i < c.rates.size(); ++i) p += (i ? "," : "") + fmt(c.rates[i]);
  for (size_t i = 0; i < c.predecoders.size(); ++i) {
    pre += (i ? "," : "") + std::string(to_string(c.predecoders[i]));
  }
  const EnergyParams& e = c.energy;
  out.push_back("d=" + d);
  out.push_back("p=" + p);
  out.push_back("shots=" + std::to_string(c.shots));
  out.push_back("seed=" + std::to_string(c.seed));
  out.push_back("predecoder=" + pre);
  out.push_back(std::string("l2=") + (c.decode_l2 ? "true" : "false"));
  out.push_back("tx_pj_per_bit=" + fmt(e.tx_pj_per_bit));
  out.push_back("packet_bits=" + std::to_string(e.packet_bits));
  out.push_back("header_bits=" + std::to_string(e.header_bits));
  out.push_back("hp_volts=" + fmt(e.hp_volts));
  out.push_back("hp_mhz=" + fmt(e.hp_mhz));
  out.push_back("lp_volts=" + fmt(e.lp_volts));
  out.push_back("lp_mhz=" + fmt(e.lp_mhz));
  out.push_back("budget_w=" + fmt(e.budget_w));
  out.push_back("p_hp_d3_mw=" + fmt(e.p_hp_d3_mw));
  out.push_back("p_hp_d21_mw=" + fmt(e.p_hp_d21_mw));
  out.push_back("p_hp_mw=" + fmt(e.p_hp_mw));
  out.push_back("stages=" + std::to_string(e.stages));
  return out;
}

RunConfig run_config(const LabConfig& c, int distance, double p) {
  RunConfig r;
  r.distance = distance;
  r.p = p;
  r.shots = c.shots;
  r.seed = c.seed;
  r.predecoders = c.predecoders;
  r.decode_l2 = c.decode_l2;
  r.threads = c.threads;
  r.energy = c.energy;
  return r;
}

}  // namespace pinball
