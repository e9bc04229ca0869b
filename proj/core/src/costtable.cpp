#include "amphi/costtable.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "amphi/errors.hpp"

namespace amphi {
namespace {

std::string describe(const Displacement& d) {
  return "(" + std::to_string(d.dx) + "," + std::to_string(d.dy) + "," + std::to_string(d.dh) + ")";
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

StopStopResult simulate_stop_stop(const Displacement& disp, Medium medium,
                                  const DynamicsParams& params, double resolution,
                                  std::vector<TraceSample>* trace) {
  if (disp.is_zero()) throw InvalidArgument("stop-stop maneuver needs a nonzero displacement");
  if (!CostTable::in_range(disp)) throw RangeError("displacement out of table range: " + describe(disp));
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be positive");

  const Vec3 target = world_to_inertial(Vec3(disp.dx, disp.dy, disp.dh) * resolution);
  const TrajectorySegment seg =
      build_spline(KinematicState{}, 0.0, target, target, params.v_c, params.spline);

  FlightOptions options;
  options.dt = params.dt;
  options.forced_medium = medium;
  options.record_trace = trace != nullptr;
  Flight flight(params.make_stack(), options, VehicleState{});

  const SettlingCriterion& sc = params.settling;
  Vec3 corridor;
  for (int k = 0; k < 3; ++k) corridor[k] = std::max(sc.fraction * std::abs(target[k]), sc.floor);

  const auto max_steps = static_cast<long>(std::ceil(sc.timeout / params.dt));
  double run_start = -1.0;
  double run_energy = 0.0;
  for (long i = 0; i <= max_steps; ++i) {
    const VehicleState& s = flight.state();
    const Vec3 err = (s.x - target).cwiseAbs();
    const bool inside = (err.array() <= corridor.array()).all();
    if (!inside) {
      run_start = -1.0;
    } else if (run_start < 0.0) {
      run_start = s.t;
      run_energy = s.energy;
    }
    if (run_start >= 0.0 && s.t >= seg.t2 && s.t - run_start >= sc.hold) {
      if (trace) *trace = flight.take_trace();
      return {run_energy, run_start, flight.saturated_ever()};
    }
    flight.step(eval_spline(seg, std::min(s.t, seg.t2)));
  }
  throw UnreachableEntry("stop-stop maneuver " + describe(disp) + " in " + to_string(medium) +
                         " did not settle within " + fmt_double(sc.timeout) + " s");
}

CostTable::CostTable(Medium medium, double resolution, std::uint64_t params_hash)
    : medium_(medium), resolution_(resolution), hash_(params_hash) {
  if (!(resolution > 0.0)) throw InvalidArgument("table resolution must be positive");
}

bool CostTable::in_range(const Displacement& d) {
  return std::abs(d.dx) <= kRange && std::abs(d.dy) <= kRange && std::abs(d.dh) <= kRange;
}

int CostTable::slot(const Displacement& d) {
  if (d.dx < 0 || d.dy < 0 || !in_range(d)) throw RangeError("not a quadrant displacement: " + describe(d));
  return (d.dx * kSide + d.dy) * kHeight + (d.dh + kRange);
}

Displacement CostTable::slot_displacement(int slot) {
  if (slot < 0 || slot >= kStored) throw RangeError("table slot out of range");
  const int dh = slot % kHeight - kRange;
  const int rest = slot / kHeight;
  return {rest / kSide, rest % kSide, dh};
}

const TableEntry& CostTable::entry(const Displacement& d) const {
  if (d.is_zero()) throw RangeError("zero displacement has no stop-stop cost");
  if (!in_range(d)) throw RangeError("displacement out of table range: " + describe(d));
  return entries_[static_cast<std::size_t>(slot(fold(d)))];
}

void CostTable::set(const Displacement& d, const TableEntry& e) {
  entries_[static_cast<std::size_t>(slot(d))] = e;
}

CostTable build_table(Medium medium, const DynamicsParams& params, double resolution,
                      unsigned threads) {
  params.validate();
  CostTable table(medium, resolution, params.hash());
  std::vector<TableEntry> results(CostTable::kStored);
  std::vector<std::exception_ptr> errors(CostTable::kStored);
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int s = next++; s < CostTable::kStored; s = next++) {
      const Displacement d = CostTable::slot_displacement(s);
      if (d.is_zero()) continue;
      try {
        const StopStopResult r = simulate_stop_stop(d, medium, params, resolution);
        results[static_cast<std::size_t>(s)] = {r.energy, r.duration, r.saturated};
      } catch (...) {
        errors[static_cast<std::size_t>(s)] = std::current_exception();
      }
    }
  };

  const unsigned n = std::max(1u, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // Report the first failing slot so the error does not depend on scheduling.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (int s = 0; s < CostTable::kStored; ++s) {
    table.set(CostTable::slot_displacement(s), results[static_cast<std::size_t>(s)]);
  }
  return table;
}

void write_table(std::ostream& out, const CostTable& table) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, table.params_hash());
  out << "amphi-cost-table 1\n";
  out << "medium " << to_string(table.medium()) << '\n';
  out << "params_hash " << hash << '\n';
  out << "resolution " << fmt_double(table.resolution()) << '\n';
  out << "range " << CostTable::kRange << '\n';
  out << "entries " << CostTable::kStored << '\n';
  for (int s = 0; s < CostTable::kStored; ++s) {
    const Displacement d = CostTable::slot_displacement(s);
    const TableEntry& e = table.stored()[static_cast<std::size_t>(s)];
    out << d.dx << ' ' << d.dy << ' ' << d.dh << ' ' << fmt_double(e.energy) << ' '
        << fmt_double(e.duration) << ' ' << (e.saturated ? 1 : 0) << '\n';
  }
}

CostTable read_table(std::istream& in) {
  auto fail = [](const std::string& what) { throw IoError("cost table: " + what); };
  std::string magic, key, medium_name, hash_text;
  int version = 0;
  if (!(in >> magic >> version) || magic != "amphi-cost-table" || version != 1) fail("bad magic");
  if (!(in >> key >> medium_name) || key != "medium") fail("expected medium");
  if (!(in >> key >> hash_text) || key != "params_hash") fail("expected params_hash");
  double resolution = 0.0;
  int range = 0, count = 0;
  if (!(in >> key >> resolution) || key != "resolution") fail("expected resolution");
  if (!(in >> key >> range) || key != "range" || range != CostTable::kRange) fail("bad range");
  if (!(in >> key >> count) || key != "entries" || count != CostTable::kStored) fail("bad entry count");

  Medium medium;
  if (medium_name == "air") {
    medium = Medium::Air;
  } else if (medium_name == "water") {
    medium = Medium::Water;
  } else {
    fail("unknown medium '" + medium_name + "'");
  }
  std::uint64_t hash = 0;
  try {
    std::size_t used = 0;
    hash = std::stoull(hash_text, &used, 16);
    if (used != hash_text.size()) fail("bad params_hash");
  } catch (const std::logic_error&) {
    fail("bad params_hash");
  }

  CostTable table(medium, resolution, hash);
  for (int s = 0; s < count; ++s) {
    Displacement d;
    TableEntry e;
    int sat = 0;
    if (!(in >> d.dx >> d.dy >> d.dh >> e.energy >> e.duration >> sat)) fail("truncated payload");
    if (!(d == CostTable::slot_displacement(s))) fail("entries out of order");
    if (!d.is_zero() && !(e.energy > 0.0 && std::isfinite(e.energy) && e.duration > 0.0)) {
      fail("non-positive entry at " + describe(d));
    }
    e.saturated = sat != 0;
    table.set(d, e);
  }
  return table;
}

void save_table(const std::filesystem::path& path, const CostTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_table(out, table);
  if (!out) throw IoError("write failed: " + path.string());
}

CostTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_table(in);
}

TableSet::TableSet(CostTable air, CostTable water, std::uint64_t expected_hash)
    : air_(std::move(air)), water_(std::move(water)) {
  if (air_.medium() != Medium::Air || water_.medium() != Medium::Water) {
    throw StaleTable("table media do not match their slots");
  }
  if (air_.params_hash() != expected_hash || water_.params_hash() != expected_hash) {
    throw StaleTable("cost table was built for different parameters; rebuild it");
  }
  if (air_.resolution() != water_.resolution()) {
    throw StaleTable("air and water tables use different resolutions");
  }
  min_rate_ = std::numeric_limits<double>::infinity();
  for (const CostTable* t : {&air_, &water_}) {
    for (int s = 0; s < CostTable::kStored; ++s) {
      const Displacement d = CostTable::slot_displacement(s);
      if (d.is_zero()) continue;
      const double e = t->stored()[static_cast<std::size_t>(s)].energy;
      const double len = std::sqrt(double(d.dx * d.dx + d.dy * d.dy + d.dh * d.dh)) * t->resolution();
      min_rate_ = std::min(min_rate_, e / len);
      max_entry_ = std::max(max_entry_, e);
      if (std::max({d.dx, d.dy, std::abs(d.dh)}) == 1) max_unit_ = std::max(max_unit_, e);
    }
  }
}

TableEntry transition_entry(const TableSet& tables, const Vec3& from, const Vec3& to,
                            const WaterSurface& water) {
  if (from.x() != to.x() || from.y() != to.y()) {
    throw InvalidArgument("transition edges must be vertical");
  }
  const Medium m_from = medium_at(from.z(), water);
  const Medium m_to = medium_at(to.z(), water);
  if (m_from == m_to) throw InvalidArgument("transition edge does not cross the surface");

  const double res = tables.resolution();
  auto voxels = [&](double length) {
    return std::max(1, static_cast<int>(std::ceil(length / res - 1e-9)));
  };
  const Vec3& air_pt = m_from == Medium::Air ? from : to;
  const Vec3& water_pt = m_from == Medium::Air ? to : from;
  const int n_air = voxels(air_pt.z() - water.level);
  const int n_water = voxels(water.level - water_pt.z());
  const int sign = to.z() > from.z() ? 1 : -1;
  const TableEntry& a = tables.table(Medium::Air).entry({0, 0, sign * n_air});
  const TableEntry& w = tables.table(Medium::Water).entry({0, 0, sign * n_water});
  return {a.energy + w.energy, a.duration + w.duration, a.saturated || w.saturated};
}

double transition_cost(const TableSet& tables, const Vec3& from, const Vec3& to,
                       const WaterSurface& water) {
  return transition_entry(tables, from, to, water).energy;
}

}  // namespace amphi
