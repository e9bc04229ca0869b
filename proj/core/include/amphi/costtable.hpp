#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "amphi/grid.hpp"
#include "amphi/params.hpp"

namespace amphi {

/// Integer displacement in voxels (x, y, h-up).
struct Displacement {
  int dx = 0;
  int dy = 0;
  int dh = 0;
  friend bool operator==(const Displacement&, const Displacement&) = default;
  [[nodiscard]] bool is_zero() const { return dx == 0 && dy == 0 && dh == 0; }
};

struct StopStopResult {
  double energy = 0.0;    ///< J consumed up to the settling time
  double duration = 0.0;  ///< settling time t_s, s
  bool saturated = false;
};

/// Flies from rest at the origin to rest at `disp * resolution` in one medium
/// (single-stop spline, full control stack, RK4) and stops once every axis has
/// stayed inside its settling corridor for `settling.hold` seconds. The settling
/// time is the start of that final in-corridor run.
/// When `trace` is given it receives every integration step up to the stop.
/// Throws UnreachableEntry on timeout, InvalidArgument on a zero displacement.
StopStopResult simulate_stop_stop(const Displacement& disp, Medium medium,
                                  const DynamicsParams& params, double resolution,
                                  std::vector<TraceSample>* trace = nullptr);

struct TableEntry {
  double energy = 0.0;
  double duration = 0.0;
  bool saturated = false;
  friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

/// Stop-stop energies for every displacement in [-8, 8]^3. Only the quadrant
/// dx, dy >= 0 is stored (9 * 9 * 17 entries including the unused zero
/// entry); negative dx, dy are folded by symmetry. dh is stored with its sign.
class CostTable {
 public:
  static constexpr int kRange = 8;
  static constexpr int kSide = kRange + 1;
  static constexpr int kHeight = 2 * kRange + 1;
  static constexpr int kStored = kSide * kSide * kHeight;

  CostTable() = default;
  CostTable(Medium medium, double resolution, std::uint64_t params_hash);

  [[nodiscard]] Medium medium() const { return medium_; }
  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] std::uint64_t params_hash() const { return hash_; }

  /// Entry for a displacement after sign folding. Throws RangeError when any
  /// component is outside [-8, 8] or the displacement is zero.
  [[nodiscard]] const TableEntry& entry(const Displacement& d) const;
  [[nodiscard]] double energy(const Displacement& d) const { return entry(d).energy; }

  void set(const Displacement& quadrant_disp, const TableEntry& e);

  /// Stored slot for a displacement with dx, dy >= 0.
  static int slot(const Displacement& quadrant_disp);
  static Displacement slot_displacement(int slot);
  static Displacement fold(const Displacement& d) {
    return {d.dx < 0 ? -d.dx : d.dx, d.dy < 0 ? -d.dy : d.dy, d.dh};
  }
  static bool in_range(const Displacement& d);

  [[nodiscard]] const std::vector<TableEntry>& stored() const { return entries_; }
  friend bool operator==(const CostTable&, const CostTable&) = default;

 private:
  Medium medium_ = Medium::Air;
  double resolution_ = 1.0;
  std::uint64_t hash_ = 0;
  std::vector<TableEntry> entries_ = std::vector<TableEntry>(kStored);
};

/// Fills the quadrant by simulation. `threads` <= 1 runs inline. The result
/// does not depend on the thread count. An entry that fails to settle aborts
/// the build with UnreachableEntry naming the displacement.
CostTable build_table(Medium medium, const DynamicsParams& params, double resolution,
                      unsigned threads = 1);

/// Text layout:
///   amphi-cost-table 1
///   medium <air|water>
///   params_hash <16 hex digits>
///   resolution <%.17g>
///   range 8
///   entries 1377
///   <dx> <dy> <dh> <energy> <duration> <saturated>   (one line per stored slot,
///                                                    dh fastest, then dy, then dx)
void write_table(std::ostream& out, const CostTable& table);
CostTable read_table(std::istream& in);
void save_table(const std::filesystem::path& path, const CostTable& table);
CostTable load_table(const std::filesystem::path& path);

/// Air and water tables bound to one parameter set. Construction refuses
/// tables whose hash, medium or resolution disagree (StaleTable).
class TableSet {
 public:
  TableSet(CostTable air, CostTable water, std::uint64_t expected_hash);

  [[nodiscard]] const CostTable& table(Medium m) const { return m == Medium::Air ? air_ : water_; }
  [[nodiscard]] double lookup(Medium m, const Displacement& d) const { return table(m).energy(d); }
  [[nodiscard]] double resolution() const { return air_.resolution(); }

  /// Smallest energy per metre over every entry of both tables.
  [[nodiscard]] double min_rate() const { return min_rate_; }
  /// Largest energy among the 26 unit displacements over both tables.
  [[nodiscard]] double max_unit_cost() const { return max_unit_; }
  /// Largest energy among all entries of both tables.
  [[nodiscard]] double max_entry() const { return max_entry_; }

 private:
  CostTable air_;
  CostTable water_;
  double min_rate_ = 0.0;
  double max_unit_ = 0.0;
  double max_entry_ = 0.0;
};

/// Price of a vertical edge between two world points (x, y, h) on opposite sides of the
/// surface, traversed from `from` to `to`: the sub-segment on each side is
/// charged the table entry for its vertical length rounded up to whole voxels
/// (at least one), using the table of its medium and keeping the direction.
/// Throws InvalidArgument if the points are not vertically aligned or do not
/// straddle the surface.
double transition_cost(const TableSet& tables, const Vec3& from, const Vec3& to,
                       const WaterSurface& water);
/// Same composition, also summing the two durations.
TableEntry transition_entry(const TableSet& tables, const Vec3& from, const Vec3& to,
                            const WaterSurface& water);

}  // namespace amphi
