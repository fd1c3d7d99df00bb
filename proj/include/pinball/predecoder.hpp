#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinball/detector_block.hpp"

namespace pinball {

struct PredecodeResult {
  bool complex = false;
  int complex_layer = -1;          // first layer left with residual activity
  std::vector<uint8_t> correction;  // d*d data qubits, empty when complex
  bool predicted_flip = false;      // parity of the correction on the observable
  int fired = 0;                    // primitives that fired
};

// First-level decoder interface shared by Pinball and the baseline.
class Predecoder {
 public:
  virtual ~Predecoder() = default;
  virtual std::string name() const = 0;
  virtual PredecodeResult decode(const DetectorBlock& block) const = 0;
};

}  // namespace pinball
