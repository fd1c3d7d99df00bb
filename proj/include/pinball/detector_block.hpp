#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace pinball {

// Detector outcomes of one memory-experiment shot: (d + 1) layers of one bit
// per X ancilla, plus the true flip of the logical observable.
//
// Layer 0 compares the first measurement against the deterministic initial
// value, layers 1..d-1 compare consecutive rounds, and layer d compares the
// stabilizer reconstructed from the final data measurement with the last round.
struct DetectorBlock {
  int distance = 0;
  int layers = 0;
  int per_layer = 0;
  std::vector<uint8_t> bits;  // layer-major, 0/1
  bool logical_flip = false;

  DetectorBlock() = default;
  DetectorBlock(int d, int num_layers, int detectors_per_layer)
      : distance(d),
        layers(num_layers),
        per_layer(detectors_per_layer),
        bits(static_cast<size_t>(num_layers) * detectors_per_layer, 0) {}

  int size() const { return layers * per_layer; }
  uint8_t at(int layer, int ancilla) const { return bits[layer * per_layer + ancilla]; }
  uint8_t& at(int layer, int ancilla) { return bits[layer * per_layer + ancilla]; }
  std::span<const uint8_t> layer(int l) const {
    return {bits.data() + static_cast<size_t>(l) * per_layer, static_cast<size_t>(per_layer)};
  }
  std::vector<int> active() const;
  void clear();

  friend bool operator==(const DetectorBlock&, const DetectorBlock&) = default;
};

// Bit-packed record:
//   u16 distance | u16 rounds | u64 shot index      (little endian)
//   ceil(layers * per_layer / 8) payload bytes       (detector i -> byte i/8, bit i%8)
//   u8 observable                                    (0 or 1)
// The number of layers is rounds + 1; per_layer is (d^2 - 1) / 2.
struct DetectorRecord {
  uint64_t shot_index = 0;
  int rounds = 0;
  DetectorBlock block;
};

size_t record_size(int distance, int rounds);
std::vector<uint8_t> encode_record(const DetectorBlock& block, int rounds, uint64_t shot_index);
// Throws std::invalid_argument on truncated or inconsistent input.
DetectorRecord decode_record(std::span<const uint8_t> bytes);

void write_record(std::ostream& out, const DetectorBlock& block, int rounds, uint64_t shot_index);
// Returns false at clean end of stream; throws on a truncated record.
bool read_record(std::istream& in, DetectorRecord& record);

}  // namespace pinball
