#pragma once

#include <string>

namespace pinball {

// SI1000 superconducting-inspired circuit noise. Every channel rate is a
// multiple of the base rate p.
struct NoiseModel {
  double p = 1e-3;
  double measurement_factor = 5.0;
  double reset_factor = 2.0;
  double single_qubit_factor = 0.1;
  double two_qubit_factor = 1.0;
  double idle_factor = 0.1;
  double resonator_idle_factor = 2.0;

  static NoiseModel si1000(double p) {
    NoiseModel m;
    m.p = p;
    return m;
  }

  double measurement() const { return measurement_factor * p; }
  double reset() const { return reset_factor * p; }
  double single_qubit() const { return single_qubit_factor * p; }
  double two_qubit() const { return two_qubit_factor * p; }
  double idle() const { return idle_factor * p; }
  double resonator_idle() const { return resonator_idle_factor * p; }

  // Throws std::invalid_argument unless every effective rate is in [0, 1].
  void validate() const;
};

std::string describe(const NoiseModel& m);

}  // namespace pinball
