#include "pinball/noise.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pinball {

void NoiseModel::validate() const {
  if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("noise rate p must be >= 0");
  const double rates[] = {measurement(), reset(), single_qubit(), two_qubit(), idle(),
                          resonator_idle()};
  for (double r : rates) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
      throw std::invalid_argument("noise channel rate out of [0, 1] for p=" + std::to_string(p));
    }
  }
}

std::string describe(const NoiseModel& m) {
  std::ostringstream out;
  out << "si1000 p=" << m.p << " meas=" << m.measurement() << " reset=" << m.reset()
      << " 1q=" << m.single_qubit() << " 2q=" << m.two_qubit() << " idle=" << m.idle()
      << " resonator=" << m.resonator_idle();
  return out.str();
}

}  // namespace pinball
