#include "pinball/circuit.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pinball {

namespace {

constexpr int kMomentsPerRound = 7;

bool is_cx(MomentKind k) {
  return k == MomentKind::kCx1 || k == MomentKind::kCx2 || k == MomentKind::kCx3 ||
         k == MomentKind::kCx4;
}

int cx_timestep(MomentKind k) { return static_cast<int>(k) - static_cast<int>(MomentKind::kCx1) + 1; }

ChannelOutcome one_flip(double prob, QubitRef q) {
  ChannelOutcome o;
  o.probability = prob;
  o.flips[0] = q;
  o.num_flips = 1;
  return o;
}

// A depolarizing channel of total rate r flips one tracked bit with 2r/3.
double depolarizing_flip(double rate) { return 2.0 * rate / 3.0; }

}  // namespace

double NoiseChannel::fire_probability() const {
  double s = 0.0;
  for (const auto& o : outcomes) s += o.probability;
  return s;
}

MemoryCircuit::MemoryCircuit(Lattice lattice, NoiseModel noise, int rounds)
    : lattice_(std::move(lattice)), noise_(noise), rounds_(rounds) {
  if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
  noise_.validate();
  build_moments();
  build_channels();
}

int MemoryCircuit::moment_index(MomentKind kind, int round) const {
  if (kind == MomentKind::kInit) return 0;
  if (kind == MomentKind::kFinal) return 1 + kMomentsPerRound * rounds_;
  if (round < 0 || round >= rounds_) throw std::out_of_range("round out of range");
  return 1 + kMomentsPerRound * round + (static_cast<int>(kind) - static_cast<int>(MomentKind::kH1));
}

void MemoryCircuit::build_moments() {
  moments_.push_back({MomentKind::kInit, -1});
  for (int r = 0; r < rounds_; ++r) {
    for (int k = static_cast<int>(MomentKind::kH1); k <= static_cast<int>(MomentKind::kMeasureReset);
         ++k) {
      moments_.push_back({static_cast<MomentKind>(k), r});
    }
  }
  moments_.push_back({MomentKind::kFinal, -1});

  for (int i = 0; i < lattice_.num_x_ancillas(); ++i) {
    for (const auto& e : lattice_.x_ancilla(i).schedule) {
      cnots_[e.timestep - 1].push_back({StabilizerType::kX, i, e.data});
    }
  }
  for (int i = 0; i < lattice_.num_z_ancillas(); ++i) {
    for (const auto& e : lattice_.z_ancilla(i).schedule) {
      cnots_[e.timestep - 1].push_back({StabilizerType::kZ, i, e.data});
    }
  }
}

void MemoryCircuit::build_channels() {
  const int nd = lattice_.num_data();
  const int nx = lattice_.num_x_ancillas();
  const int nz = lattice_.num_z_ancillas();

  auto single = [&](ChannelKind kind, double rate, double flip_prob, int m, bool before,
                    QubitRef q) {
    NoiseChannel ch;
    ch.kind = kind;
    ch.rate = rate;
    ch.moment = m;
    ch.before_ops = before;
    ch.qubits[0] = q;
    ch.num_qubits = 1;
    ch.outcomes.push_back(one_flip(flip_prob, q));
    channels_.push_back(std::move(ch));
  };
  auto idle_all = [&](int m, QubitRole role, int n, const std::vector<uint8_t>* busy) {
    for (int i = 0; i < n; ++i) {
      if (busy && (*busy)[i]) continue;
      single(ChannelKind::kIdle, noise_.idle(), depolarizing_flip(noise_.idle()), m, false,
             {role, i});
    }
  };

  for (int m = 0; m < num_moments(); ++m) {
    const Moment& mo = moments_[m];
    switch (mo.kind) {
      case MomentKind::kInit:
        for (int q = 0; q < nd; ++q) {
          single(ChannelKind::kReset, noise_.reset(), noise_.reset(), m, false,
                 {QubitRole::kData, q});
        }
        for (int a = 0; a < nx; ++a) {
          single(ChannelKind::kReset, noise_.reset(), noise_.reset(), m, false,
                 {QubitRole::kXAncilla, a});
        }
        break;
      case MomentKind::kH1:
      case MomentKind::kH2:
        for (int a = 0; a < nx; ++a) {
          single(ChannelKind::kSingleQubitGate, noise_.single_qubit(),
                 depolarizing_flip(noise_.single_qubit()), m, false, {QubitRole::kXAncilla, a});
        }
        idle_all(m, QubitRole::kData, nd, nullptr);
        idle_all(m, QubitRole::kZAncilla, nz, nullptr);
        break;
      case MomentKind::kCx1:
      case MomentKind::kCx2:
      case MomentKind::kCx3:
      case MomentKind::kCx4: {
        std::vector<uint8_t> busy_d(nd, 0), busy_x(nx, 0), busy_z(nz, 0);
        // Each of the three visible (ancilla, data) patterns collects 4 of the
        // 15 two-qubit Paulis.
        const double each = 4.0 * noise_.two_qubit() / 15.0;
        for (const auto& c : cnots(cx_timestep(mo.kind))) {
          const QubitRef anc{c.type == StabilizerType::kX ? QubitRole::kXAncilla : QubitRole::kZAncilla,
                             c.ancilla};
          const QubitRef dat{QubitRole::kData, c.data};
          NoiseChannel ch;
          ch.kind = ChannelKind::kTwoQubitGate;
          ch.rate = noise_.two_qubit();
          ch.moment = m;
          ch.qubits = {anc, dat};
          ch.num_qubits = 2;
          ch.outcomes.push_back(one_flip(each, anc));
          ch.outcomes.push_back(one_flip(each, dat));
          ChannelOutcome both;
          both.probability = each;
          both.flips = {anc, dat};
          both.num_flips = 2;
          ch.outcomes.push_back(both);
          channels_.push_back(std::move(ch));
          busy_d[c.data] = 1;
          (c.type == StabilizerType::kX ? busy_x : busy_z)[c.ancilla] = 1;
        }
        idle_all(m, QubitRole::kData, nd, &busy_d);
        idle_all(m, QubitRole::kXAncilla, nx, &busy_x);
        idle_all(m, QubitRole::kZAncilla, nz, &busy_z);
        break;
      }
      case MomentKind::kMeasureReset:
        for (int a = 0; a < nx; ++a) {
          single(ChannelKind::kMeasurement, noise_.measurement(), noise_.measurement(), m, true,
                 {QubitRole::kXAncilla, a});
        }
        for (int q = 0; q < nd; ++q) {
          single(ChannelKind::kResonatorIdle, noise_.resonator_idle(),
                 depolarizing_flip(noise_.resonator_idle()), m, true, {QubitRole::kData, q});
        }
        if (mo.round + 1 < rounds_) {
          for (int a = 0; a < nx; ++a) {
            single(ChannelKind::kReset, noise_.reset(), noise_.reset(), m, false,
                   {QubitRole::kXAncilla, a});
          }
        }
        break;
      case MomentKind::kFinal:
        for (int q = 0; q < nd; ++q) {
          single(ChannelKind::kMeasurement, noise_.measurement(), noise_.measurement(), m, true,
                 {QubitRole::kData, q});
        }
        break;
    }
  }
}

PauliFrame::PauliFrame(const MemoryCircuit& circuit)
    : circuit_(&circuit),
      data_(circuit.lattice().num_data(), 0),
      x_anc_(circuit.lattice().num_x_ancillas(), 0),
      z_anc_(circuit.lattice().num_z_ancillas(), 0),
      records_(static_cast<size_t>(circuit.rounds()) * circuit.lattice().num_x_ancillas(), 0),
      final_data_(circuit.lattice().num_data(), 0) {}

void PauliFrame::clear() {
  std::fill(data_.begin(), data_.end(), 0);
  std::fill(x_anc_.begin(), x_anc_.end(), 0);
  std::fill(z_anc_.begin(), z_anc_.end(), 0);
  std::fill(records_.begin(), records_.end(), 0);
  std::fill(final_data_.begin(), final_data_.end(), 0);
}

void PauliFrame::flip(QubitRef q) {
  switch (q.role) {
    case QubitRole::kData: data_.at(q.index) ^= 1; break;
    case QubitRole::kXAncilla: x_anc_.at(q.index) ^= 1; break;
    case QubitRole::kZAncilla: z_anc_.at(q.index) ^= 1; break;
  }
}

bool PauliFrame::get(QubitRef q) const {
  switch (q.role) {
    case QubitRole::kData: return data_.at(q.index);
    case QubitRole::kXAncilla: return x_anc_.at(q.index);
    case QubitRole::kZAncilla: return z_anc_.at(q.index);
  }
  return false;
}

void PauliFrame::apply_ops(int m) {
  const Moment& mo = circuit_->moment(m);
  switch (mo.kind) {
    case MomentKind::kInit:
      clear();
      break;
    case MomentKind::kH1:
    case MomentKind::kH2:
      break;
    case MomentKind::kCx1:
    case MomentKind::kCx2:
    case MomentKind::kCx3:
    case MomentKind::kCx4:
      for (const auto& c : circuit_->cnots(cx_timestep(mo.kind))) {
        if (c.type == StabilizerType::kX) {
          x_anc_[c.ancilla] ^= data_[c.data];  // Z on the target copies to the control
        } else {
          data_[c.data] ^= z_anc_[c.ancilla];
        }
      }
      break;
    case MomentKind::kMeasureReset: {
      const size_t nx = x_anc_.size();
      std::copy(x_anc_.begin(), x_anc_.end(), records_.begin() + mo.round * nx);
      std::fill(x_anc_.begin(), x_anc_.end(), 0);
      std::fill(z_anc_.begin(), z_anc_.end(), 0);
      break;
    }
    case MomentKind::kFinal:
      final_data_ = data_;
      break;
  }
}

DetectorBlock PauliFrame::detectors() const {
  const Lattice& lat = circuit_->lattice();
  const int nx = lat.num_x_ancillas();
  const int rounds = circuit_->rounds();
  DetectorBlock block(lat.distance(), rounds + 1, nx);
  for (int a = 0; a < nx; ++a) {
    block.at(0, a) = records_[a];
    for (int r = 1; r < rounds; ++r) {
      block.at(r, a) = records_[r * nx + a] ^ records_[(r - 1) * nx + a];
    }
    uint8_t parity = 0;
    for (const auto& e : lat.x_ancilla(a).schedule) parity ^= final_data_[e.data];
    block.at(rounds, a) = parity ^ records_[(rounds - 1) * nx + a];
  }
  uint8_t obs = 0;
  for (int q : lat.observable()) obs ^= final_data_[q];
  block.logical_flip = obs != 0;
  return block;
}

bool flips_frame(const MemoryCircuit& circuit, const FaultSite& site, Pauli p) {
  if (p == Pauli::kI) return false;
  if (p == Pauli::kY) return true;
  if (site.qubit.role != QubitRole::kXAncilla) return p == Pauli::kZ;
  const MomentKind k = circuit.moment(site.moment).kind;
  const bool rotated = (k == MomentKind::kH1 && !site.before_ops) || is_cx(k) ||
                       (k == MomentKind::kH2 && site.before_ops);
  return rotated ? p == Pauli::kZ : p == Pauli::kX;
}

void inject_fault(PauliFrame& frame, const MemoryCircuit& circuit, const FaultSite& site, Pauli p) {
  if (flips_frame(circuit, site, p)) frame.flip(site.qubit);
}

namespace {

bool flip_less(const FrameFlip& a, const FrameFlip& b) {
  if (a.moment != b.moment) return a.moment < b.moment;
  return a.before_ops && !b.before_ops;
}

// Runs from moment `start`, assuming a clear frame before it.
void run_from(PauliFrame& frame, const MemoryCircuit& circuit, int start,
              std::span<const FrameFlip> flips) {
  size_t next = 0;
  for (int m = start; m < circuit.num_moments(); ++m) {
    while (next < flips.size() && flips[next].moment == m && flips[next].before_ops) {
      frame.flip(flips[next++].qubit);
    }
    frame.apply_ops(m);
    while (next < flips.size() && flips[next].moment == m) frame.flip(flips[next++].qubit);
  }
  if (next != flips.size()) throw std::invalid_argument("frame flip outside the circuit");
}

FrameResult collect(const PauliFrame& frame) {
  FrameResult res;
  res.block = frame.detectors();
  res.final_data = frame.data();
  return res;
}

}  // namespace

FrameResult run_frame(const MemoryCircuit& circuit, std::span<const FrameFlip> flips) {
  if (!std::is_sorted(flips.begin(), flips.end(), flip_less)) {
    throw std::invalid_argument("frame flips must be sorted by position");
  }
  PauliFrame frame(circuit);
  run_from(frame, circuit, 0, flips);
  return collect(frame);
}

std::vector<SingleFault> enumerate_single_faults(const MemoryCircuit& circuit) {
  std::vector<SingleFault> out;
  PauliFrame frame(circuit);
  const auto& channels = circuit.channels();
  for (int c = 0; c < static_cast<int>(channels.size()); ++c) {
    const NoiseChannel& ch = channels[c];
    for (int o = 0; o < static_cast<int>(ch.outcomes.size()); ++o) {
      const ChannelOutcome& oc = ch.outcomes[o];
      std::array<FrameFlip, 2> flips;
      for (int i = 0; i < oc.num_flips; ++i) flips[i] = {ch.moment, ch.before_ops, oc.flips[i]};
      frame.clear();
      // Moments before the channel cannot change a clear frame.
      run_from(frame, circuit, ch.moment, std::span(flips.data(), oc.num_flips));
      const DetectorBlock block = frame.detectors();

      SingleFault f;
      f.channel = c;
      f.outcome = o;
      f.kind = ch.kind;
      f.channel_rate = ch.rate;
      f.probability = oc.probability;
      f.moment = circuit.moment(ch.moment);
      f.qubits = ch.qubits;
      f.num_qubits = ch.num_qubits;
      f.detectors = block.active();
      f.logical_flip = block.logical_flip;
      for (int q = 0; q < static_cast<int>(frame.data().size()); ++q) {
        if (frame.data()[q]) f.data_residual.push_back(q);
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

uint64_t shot_seed(uint64_t master_seed, uint64_t shot) {
  // splitmix64 finalizer over a Weyl step.
  uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (shot + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FaultSampler::FaultSampler(const MemoryCircuit& circuit) : circuit_(&circuit) {
  std::map<double, std::vector<uint32_t>> groups;
  const auto& channels = circuit.channels();
  for (uint32_t c = 0; c < channels.size(); ++c) {
    const double fire = channels[c].fire_probability();
    if (fire <= 0.0) continue;
    groups[fire].push_back(c);
  }
  for (auto& [fire, list] : groups) buckets_.push_back({fire, std::move(list)});
}

void FaultSampler::sample(ShotRng& rng, std::vector<FaultEvent>& events) const {
  events.clear();
  const auto& channels = circuit_->channels();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Bucket& b : buckets_) {
    const int64_t n = static_cast<int64_t>(b.channels.size());
    auto pick = [&](uint32_t c) {
      const auto& outs = channels[c].outcomes;
      uint32_t o = 0;
      if (outs.size() > 1) {
        double u = unit(rng) * b.fire;
        while (o + 1 < outs.size() && u >= outs[o].probability) u -= outs[o++].probability;
      }
      events.push_back({c, o});
    };
    if (b.fire >= 1.0) {
      for (uint32_t c : b.channels) pick(c);
      continue;
    }
    std::geometric_distribution<int64_t> skip(b.fire);
    for (int64_t i = skip(rng); i < n; i += 1 + skip(rng)) pick(b.channels[i]);
  }
  std::sort(events.begin(), events.end(),
            [](const FaultEvent& a, const FaultEvent& b) { return a.channel < b.channel; });
}

FrameResult simulate_shot(const MemoryCircuit& circuit, const FaultSampler& sampler, uint64_t seed) {
  ShotRng rng(seed);
  std::vector<FaultEvent> events;
  sampler.sample(rng, events);
  std::vector<FrameFlip> flips;
  const auto& channels = circuit.channels();
  for (const auto& e : events) {
    const NoiseChannel& ch = channels[e.channel];
    const ChannelOutcome& oc = ch.outcomes[e.outcome];
    for (int i = 0; i < oc.num_flips; ++i) flips.push_back({ch.moment, ch.before_ops, oc.flips[i]});
  }
  // Channel order already follows circuit position; the stable sort only
  // groups before/after flips inside a moment.
  std::stable_sort(flips.begin(), flips.end(), flip_less);
  return run_frame(circuit, flips);
}

ShotSimulator::ShotSimulator(const MemoryCircuit& circuit)
    : circuit_(&circuit), sampler_(circuit), faults_(enumerate_single_faults(circuit)) {
  const auto& channels = circuit.channels();
  first_outcome_.resize(channels.size());
  uint32_t k = 0;
  for (size_t c = 0; c < channels.size(); ++c) {
    first_outcome_[c] = k;
    k += static_cast<uint32_t>(channels[c].outcomes.size());
  }
}

void ShotSimulator::sample(uint64_t seed, DetectorBlock& block, std::vector<FaultEvent>& events) const {
  ShotRng rng(seed);
  sampler_.sample(rng, events);
  if (block.size() != circuit_->num_detectors()) {
    block = DetectorBlock(circuit_->distance(), circuit_->num_layers(),
                          circuit_->detectors_per_layer());
  }
  apply(events, block);
}

void ShotSimulator::apply(std::span<const FaultEvent> events, DetectorBlock& block) const {
  block.clear();
  for (const auto& e : events) {
    const SingleFault& f = faults_[first_outcome_[e.channel] + e.outcome];
    for (int det : f.detectors) block.bits[det] ^= 1;
    block.logical_flip ^= f.logical_flip;
  }
}

const char* to_string(MomentKind k) {
  switch (k) {
    case MomentKind::kInit: return "init";
    case MomentKind::kH1: return "h1";
    case MomentKind::kCx1: return "cx1";
    case MomentKind::kCx2: return "cx2";
    case MomentKind::kCx3: return "cx3";
    case MomentKind::kCx4: return "cx4";
    case MomentKind::kH2: return "h2";
    case MomentKind::kMeasureReset: return "mr";
    case MomentKind::kFinal: return "final";
  }
  return "?";
}

const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::kReset: return "reset";
    case ChannelKind::kSingleQubitGate: return "gate1";
    case ChannelKind::kTwoQubitGate: return "gate2";
    case ChannelKind::kIdle: return "idle";
    case ChannelKind::kResonatorIdle: return "resonator_idle";
    case ChannelKind::kMeasurement: return "measure";
  }
  return "?";
}

const char* to_string(QubitRole r) {
  switch (r) {
    case QubitRole::kData: return "d";
    case QubitRole::kXAncilla: return "x";
    case QubitRole::kZAncilla: return "z";
  }
  return "?";
}

std::string describe(const SingleFault& f) {
  std::ostringstream out;
  out << to_string(f.kind) << " " << to_string(f.moment.kind) << "@r" << f.moment.round << " on";
  for (int i = 0; i < f.num_qubits; ++i) out << " " << to_string(f.qubits[i].role) << f.qubits[i].index;
  out << " outcome " << f.outcome << " dets{";
  for (size_t i = 0; i < f.detectors.size(); ++i) out << (i ? "," : "") << f.detectors[i];
  out << "} L=" << f.logical_flip;
  return out.str();
}

}  // namespace pinball
