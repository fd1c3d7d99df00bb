#include "pinball/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pinball {

namespace {

// X plaquettes are the ones with odd prow + pcol.
bool is_x_parity(int prow, int pcol) { return ((prow + pcol) & 1) != 0; }

DataCoord corner_coord(int prow, int pcol, Corner c) {
  switch (c) {
    case Corner::kNW: return {prow - 1, pcol - 1};
    case Corner::kNE: return {prow - 1, pcol};
    case Corner::kSW: return {prow, pcol - 1};
    case Corner::kSE: return {prow, pcol};
  }
  return {};
}

constexpr std::array<Corner, 4> kXOrder = {Corner::kNW, Corner::kNE, Corner::kSW, Corner::kSE};
constexpr std::array<Corner, 4> kZOrder = {Corner::kNW, Corner::kSW, Corner::kNE, Corner::kSE};

}  // namespace

Lattice::Lattice(int distance) : d_(distance) {
  if (distance < kMinDistance || distance > kMaxDistance || distance % 2 == 0) {
    throw std::invalid_argument("distance must be odd and in [3, 25], got " +
                                std::to_string(distance));
  }
  build_ancillas();
  build_schedules();
  for (int r = 0; r < d_; ++r) observable_.push_back(data_index({r, 0}));
}

void Lattice::build_ancillas() {
  const int side = d_ + 1;
  x_at_.assign(side * side, -1);
  z_at_.assign(side * side, -1);
  for (int pr = 0; pr <= d_; ++pr) {
    for (int pc = 0; pc <= d_; ++pc) {
      const bool top_bottom = (pr == 0 || pr == d_);
      const bool left_right = (pc == 0 || pc == d_);
      if (top_bottom && left_right) continue;  // corners host nothing
      const bool x_type = is_x_parity(pr, pc);
      BoundaryKind kind = BoundaryKind::kBulk;
      if (top_bottom) {
        if (!x_type) continue;
        kind = BoundaryKind::kXBoundary;
      } else if (left_right) {
        if (x_type) continue;
        kind = BoundaryKind::kZBoundary;
      }
      Ancilla a;
      a.type = x_type ? StabilizerType::kX : StabilizerType::kZ;
      a.prow = pr;
      a.pcol = pc;
      a.boundary = kind;
      if (x_type) {
        x_at_[pr * side + pc] = static_cast<int>(x_ancillas_.size());
        x_ancillas_.push_back(std::move(a));
      } else {
        z_at_[pr * side + pc] = static_cast<int>(z_ancillas_.size());
        z_ancillas_.push_back(std::move(a));
      }
    }
  }
}

void Lattice::build_schedules() {
  x_of_data_.assign(num_data(), {});
  z_of_data_.assign(num_data(), {});
  auto fill = [&](std::vector<Ancilla>& ancillas, const std::array<Corner, 4>& order,
                  std::vector<std::vector<int>>& of_data, bool control) {
    for (int i = 0; i < static_cast<int>(ancillas.size()); ++i) {
      Ancilla& a = ancillas[i];
      for (int t = 0; t < 4; ++t) {
        const DataCoord c = corner_coord(a.prow, a.pcol, order[t]);
        if (!in_bounds(c)) continue;
        const int q = data_index(c);
        a.schedule.push_back({t + 1, q, order[t], control});
        of_data[q].push_back(i);
      }
    }
    for (auto& v : of_data) std::sort(v.begin(), v.end());
  };
  fill(x_ancillas_, kXOrder, x_of_data_, true);
  fill(z_ancillas_, kZOrder, z_of_data_, false);
}

int Lattice::x_ancilla_at(int prow, int pcol) const {
  if (prow < 0 || prow > d_ || pcol < 0 || pcol > d_) return -1;
  return x_at_[prow * (d_ + 1) + pcol];
}

int Lattice::z_ancilla_at(int prow, int pcol) const {
  if (prow < 0 || prow > d_ || pcol < 0 || pcol > d_) return -1;
  return z_at_[prow * (d_ + 1) + pcol];
}

std::vector<int> Lattice::x_support(int x_ancilla) const {
  std::vector<int> out;
  for (const auto& e : x_ancillas_.at(x_ancilla).schedule) out.push_back(e.data);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Lattice::z_support(int z_ancilla) const {
  std::vector<int> out;
  for (const auto& e : z_ancillas_.at(z_ancilla).schedule) out.push_back(e.data);
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const ScheduleEntry& a, const ScheduleEntry& b) {
  return a.timestep == b.timestep && a.data == b.data && a.corner == b.corner &&
         a.ancilla_is_control == b.ancilla_is_control;
}

bool operator==(const Ancilla& a, const Ancilla& b) {
  return a.type == b.type && a.prow == b.prow && a.pcol == b.pcol && a.boundary == b.boundary &&
         a.schedule == b.schedule;
}

bool operator==(const Lattice& a, const Lattice& b) {
  return a.d_ == b.d_ && a.x_ancillas_ == b.x_ancillas_ && a.z_ancillas_ == b.z_ancillas_;
}

Lattice build_lattice(int distance) { return Lattice(distance); }

std::vector<CnotStep> cnot_schedule(const Lattice& lat, StabilizerType type, int ancilla) {
  const int n = type == StabilizerType::kX ? lat.num_x_ancillas() : lat.num_z_ancillas();
  if (ancilla < 0 || ancilla >= n) {
    throw std::out_of_range("unknown ancilla " + std::to_string(ancilla));
  }
  const Ancilla& a = type == StabilizerType::kX ? lat.x_ancilla(ancilla) : lat.z_ancilla(ancilla);
  std::vector<CnotStep> out;
  out.reserve(a.schedule.size());
  for (const auto& e : a.schedule) out.push_back({e.timestep, e.data, e.ancilla_is_control});
  return out;
}

std::optional<int> shared_data_qubit(const Lattice& lat, int x_a, int x_b) {
  if (x_a == x_b) return std::nullopt;
  const auto sa = lat.x_support(x_a);
  const auto sb = lat.x_support(x_b);
  std::vector<int> common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  if (common.size() != 1) return std::nullopt;
  return common.front();
}

const char* to_string(StabilizerType t) { return t == StabilizerType::kX ? "X" : "Z"; }

const char* to_string(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::kBulk: return "bulk";
    case BoundaryKind::kXBoundary: return "x-boundary";
    case BoundaryKind::kZBoundary: return "z-boundary";
  }
  return "?";
}

const char* to_string(Corner c) {
  switch (c) {
    case Corner::kNW: return "NW";
    case Corner::kNE: return "NE";
    case Corner::kSW: return "SW";
    case Corner::kSE: return "SE";
  }
  return "?";
}

std::string dump_lattice(const Lattice& lat) {
  std::ostringstream out;
  out << "# rotated surface code d=" << lat.distance() << " qubits=" << lat.num_qubits() << "\n";
  for (int q = 0; q < lat.num_data(); ++q) {
    const DataCoord c = lat.data_coord(q);
    out << "data " << q << " (" << c.row << "," << c.col << ")\n";
  }
  auto dump = [&](const std::vector<Ancilla>& ancillas) {
    for (int i = 0; i < static_cast<int>(ancillas.size()); ++i) {
      const Ancilla& a = ancillas[i];
      out << to_string(a.type) << "-ancilla " << i << " (" << a.center_row() << ","
          << a.center_col() << ") " << to_string(a.boundary);
      for (const auto& e : a.schedule) {
        const DataCoord c = lat.data_coord(e.data);
        out << " t" << e.timestep << ":" << to_string(e.corner) << "(" << c.row << "," << c.col
            << ")";
      }
      out << "\n";
    }
  };
  dump(lat.x_ancillas());
  dump(lat.z_ancillas());
  return out.str();
}

}  // namespace pinball
