#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pinball {

// Data qubit coordinate on the d x d grid, row 0 at the top.
struct DataCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const DataCoord&, const DataCoord&) = default;
  friend auto operator<=>(const DataCoord&, const DataCoord&) = default;
};

enum class StabilizerType : uint8_t { kX, kZ };

// Weight-2 X plaquettes sit on the top and bottom edges, weight-2 Z plaquettes
// on the left and right edges. Z-error chains therefore terminate on the left
// and right sides of the patch.
enum class BoundaryKind : uint8_t { kBulk, kXBoundary, kZBoundary };

// Corner of a plaquette, named by compass direction from its center.
enum class Corner : uint8_t { kNW, kNE, kSW, kSE };

struct ScheduleEntry {
  int timestep = 0;  // 1..4
  int data = -1;     // data qubit index
  Corner corner = Corner::kNW;
  bool ancilla_is_control = false;
};

// A plaquette with corner data qubits (pr-1, pc-1), (pr-1, pc), (pr, pc-1),
// (pr, pc). Its center is at (pr - 0.5, pc - 0.5) in data-qubit units.
struct Ancilla {
  StabilizerType type = StabilizerType::kX;
  int prow = 0;
  int pcol = 0;
  BoundaryKind boundary = BoundaryKind::kBulk;
  // Entries ordered by timestep. Bulk: 4 entries, boundary: 2.
  std::vector<ScheduleEntry> schedule;

  double center_row() const { return prow - 0.5; }
  double center_col() const { return pcol - 0.5; }
};

// Rotated surface code patch with the standard interleaved CNOT schedule:
// X ancillas visit their corners in Z order (NW, NE, SW, SE) and Z ancillas in
// N order (NW, SW, NE, SE). Immutable after construction.
class Lattice {
 public:
  static constexpr int kMinDistance = 3;
  static constexpr int kMaxDistance = 25;

  explicit Lattice(int distance);

  int distance() const { return d_; }
  int num_data() const { return d_ * d_; }
  int num_x_ancillas() const { return static_cast<int>(x_ancillas_.size()); }
  int num_z_ancillas() const { return static_cast<int>(z_ancillas_.size()); }
  int num_qubits() const { return num_data() + num_x_ancillas() + num_z_ancillas(); }

  int data_index(DataCoord c) const { return c.row * d_ + c.col; }
  DataCoord data_coord(int index) const { return {index / d_, index % d_}; }
  bool in_bounds(DataCoord c) const {
    return c.row >= 0 && c.row < d_ && c.col >= 0 && c.col < d_;
  }

  const std::vector<Ancilla>& x_ancillas() const { return x_ancillas_; }
  const std::vector<Ancilla>& z_ancillas() const { return z_ancillas_; }
  const Ancilla& x_ancilla(int i) const { return x_ancillas_.at(i); }
  const Ancilla& z_ancilla(int i) const { return z_ancillas_.at(i); }

  // Index of the X (or Z) ancilla at plaquette (prow, pcol), or -1.
  int x_ancilla_at(int prow, int pcol) const;
  int z_ancilla_at(int prow, int pcol) const;

  // X ancillas whose support contains the data qubit, ascending.
  const std::vector<int>& x_ancillas_of_data(int data) const { return x_of_data_.at(data); }
  const std::vector<int>& z_ancillas_of_data(int data) const { return z_of_data_.at(data); }

  // Data qubits in the support of the X ancilla, ascending.
  std::vector<int> x_support(int x_ancilla) const;
  std::vector<int> z_support(int z_ancilla) const;

  // Logical X observable: the leftmost column of data qubits.
  const std::vector<int>& observable() const { return observable_; }
  bool on_observable(int data) const { return data_coord(data).col == 0; }

  friend bool operator==(const Lattice& a, const Lattice& b);

 private:
  void build_ancillas();
  void build_schedules();

  int d_;
  std::vector<Ancilla> x_ancillas_;
  std::vector<Ancilla> z_ancillas_;
  std::vector<int> x_at_;  // (d+1)^2 plaquette grid -> X index or -1
  std::vector<int> z_at_;
  std::vector<std::vector<int>> x_of_data_;
  std::vector<std::vector<int>> z_of_data_;
  std::vector<int> observable_;
};

bool operator==(const ScheduleEntry& a, const ScheduleEntry& b);
bool operator==(const Ancilla& a, const Ancilla& b);

// Throws std::invalid_argument for even or out-of-range distances.
Lattice build_lattice(int distance);

struct CnotStep {
  int timestep = 0;
  int data = -1;
  bool ancilla_is_control = false;
};

// Throws std::out_of_range for an unknown ancilla index.
std::vector<CnotStep> cnot_schedule(const Lattice& lat, StabilizerType type, int ancilla);

// The unique data qubit shared by two distinct X ancillas, if any.
std::optional<int> shared_data_qubit(const Lattice& lat, int x_a, int x_b);

const char* to_string(StabilizerType t);
const char* to_string(BoundaryKind b);
const char* to_string(Corner c);

// One qubit per line: role, coordinates, schedule. Stable for golden tests.
std::string dump_lattice(const Lattice& lat);

}  // namespace pinball
