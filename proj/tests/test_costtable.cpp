#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "amphi/costtable.hpp"
#include "support/tables.hpp"

namespace amphi {
namespace {

const DynamicsParams kParams;

const TableSet& tables() { return testing::default_tables(); }

TEST(CostTable, SlotLayout) {
  EXPECT_EQ(CostTable::kStored, 9 * 9 * 17);
  for (int s = 0; s < CostTable::kStored; ++s) {
    EXPECT_EQ(CostTable::slot(CostTable::slot_displacement(s)), s);
  }
}

TEST(CostTable, EveryLogicalEntryPositiveAndMirrored) {
  for (Medium m : {Medium::Air, Medium::Water}) {
    const CostTable& t = tables().table(m);
    int logical = 0;
    for (int dx = -8; dx <= 8; ++dx) {
      for (int dy = -8; dy <= 8; ++dy) {
        for (int dh = -8; dh <= 8; ++dh) {
          const Displacement d{dx, dy, dh};
          if (d.is_zero()) continue;
          ++logical;
          const TableEntry& e = t.entry(d);
          ASSERT_TRUE(std::isfinite(e.energy) && e.energy > 0.0);
          ASSERT_TRUE(std::isfinite(e.duration) && e.duration > 0.0);
          EXPECT_EQ(e, t.entry({-dx, dy, dh}));
          EXPECT_EQ(e, t.entry({dx, -dy, dh}));
        }
      }
    }
    EXPECT_EQ(logical, 17 * 17 * 17 - 1);
  }
}

TEST(CostTable, LookupErrors) {
  const CostTable& t = tables().table(Medium::Air);
  EXPECT_THROW((void)t.entry({0, 0, 0}), RangeError);
  EXPECT_THROW((void)t.entry({9, 0, 0}), RangeError);
  EXPECT_THROW((void)t.entry({0, -9, 0}), RangeError);
  EXPECT_THROW(simulate_stop_stop({0, 0, 0}, Medium::Air, kParams, 1.0), InvalidArgument);
}

TEST(CostTable, LongerMovesCostMore) {
  for (Medium m : {Medium::Air, Medium::Water}) {
    EXPECT_LT(tables().lookup(m, {1, 0, 0}), tables().lookup(m, {8, 0, 0}));
  }
}

TEST(CostTable, WaterDescentCheaperThanAir) {
  const auto air = simulate_stop_stop({0, 0, -3}, Medium::Air, kParams, 1.0);
  const auto water = simulate_stop_stop({0, 0, -3}, Medium::Water, kParams, 1.0);
  EXPECT_LT(water.energy, air.energy);
}

TEST(CostTable, MirroredDynamicsAgree) {
  for (Medium m : {Medium::Air, Medium::Water}) {
    const auto a = simulate_stop_stop({2, 1, 3}, m, kParams, 1.0);
    const auto b = simulate_stop_stop({-2, 1, 3}, m, kParams, 1.0);
    const auto c = simulate_stop_stop({2, -1, 3}, m, kParams, 1.0);
    EXPECT_NEAR(b.energy / a.energy, 1.0, 1e-3) << to_string(m);
    EXPECT_NEAR(c.energy / a.energy, 1.0, 1e-3) << to_string(m);
  }
}

TEST(CostTable, SampledEntriesMatchDirectSimulation) {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> u(-8, 8);
  for (int n = 0; n < 10; ++n) {
    Displacement d{u(rng), u(rng), u(rng)};
    if (d.is_zero()) d.dh = 1;
    const Medium m = n % 2 ? Medium::Water : Medium::Air;
    const auto direct = simulate_stop_stop(CostTable::fold(d), m, kParams, 1.0);
    const TableEntry& e = tables().table(m).entry(d);
    EXPECT_NEAR(e.energy, direct.energy, 1e-9);
    EXPECT_NEAR(e.duration, direct.duration, 1e-9);
  }
}

TEST(CostTable, SettledStateHoldsAfterRecordedTime) {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> u(-8, 8);
  const SettlingCriterion& sc = kParams.settling;
  for (int n = 0; n < 10; ++n) {
    Displacement d{std::abs(u(rng)), std::abs(u(rng)), u(rng)};
    if (d.is_zero()) d.dx = 2;
    const Medium m = n % 2 ? Medium::Water : Medium::Air;
    std::vector<TraceSample> trace;
    const auto r = simulate_stop_stop(d, m, kParams, 1.0, &trace);
    const Vec3 target = world_to_inertial(Vec3(d.dx, d.dy, d.dh));
    int checked = 0;
    for (const TraceSample& s : trace) {
      if (s.t < r.duration) continue;
      for (int k = 0; k < 3; ++k) {
        const double band = std::max(sc.fraction * std::abs(target[k]), sc.floor);
        ASSERT_LE(std::abs(s.x[k] - target[k]), band) << "axis " << k << " t " << s.t;
      }
      ++checked;
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(CostTable, TextRoundTripIsExact) {
  for (Medium m : {Medium::Air, Medium::Water}) {
    std::stringstream ss;
    write_table(ss, tables().table(m));
    const std::string first = ss.str();
    const CostTable back = read_table(ss);
    EXPECT_EQ(back, tables().table(m));
    std::stringstream again;
    write_table(again, back);
    EXPECT_EQ(again.str(), first);
  }
}

TEST(CostTable, RebuildIsIdenticalRegardlessOfThreads) {
  const CostTable rebuilt = build_table(Medium::Air, kParams, 1.0, 2);
  EXPECT_EQ(rebuilt, tables().table(Medium::Air));
}

TEST(TableSet, RefusesStaleOrMismatchedTables) {
  const CostTable& air = tables().table(Medium::Air);
  const CostTable& water = tables().table(Medium::Water);
  EXPECT_THROW(TableSet(air, water, kParams.hash() + 1), StaleTable);
  EXPECT_THROW(TableSet(water, air, kParams.hash()), StaleTable);
  DynamicsParams other;
  other.v_c = 1.5;
  EXPECT_NE(other.hash(), kParams.hash());
}

TEST(TableSet, Aggregates) {
  double min_rate = 1e300;
  double max_unit = 0.0;
  for (Medium m : {Medium::Air, Medium::Water}) {
    for (int s = 0; s < CostTable::kStored; ++s) {
      const Displacement d = CostTable::slot_displacement(s);
      if (d.is_zero()) continue;
      const double e = tables().lookup(m, d);
      min_rate = std::min(min_rate, e / std::sqrt(double(d.dx * d.dx + d.dy * d.dy + d.dh * d.dh)));
      if (std::max({d.dx, d.dy, std::abs(d.dh)}) == 1) max_unit = std::max(max_unit, e);
    }
  }
  EXPECT_DOUBLE_EQ(tables().min_rate(), min_rate);
  EXPECT_DOUBLE_EQ(tables().max_unit_cost(), max_unit);
}

TEST(TransitionCost, ComposesBothTables) {
  const WaterSurface w{10.0};
  const Vec3 above(3.5, 4.5, 10.5);
  const Vec3 below(3.5, 4.5, 9.5);
  EXPECT_DOUBLE_EQ(transition_cost(tables(), above, below, w),
                   tables().lookup(Medium::Air, {0, 0, -1}) + tables().lookup(Medium::Water, {0, 0, -1}));
  EXPECT_DOUBLE_EQ(transition_cost(tables(), below, above, w),
                   tables().lookup(Medium::Air, {0, 0, 1}) + tables().lookup(Medium::Water, {0, 0, 1}));
  EXPECT_NE(transition_cost(tables(), below, above, w), transition_cost(tables(), above, below, w));

  const Vec3 high(3.5, 4.5, 12.5);
  const Vec3 deep(3.5, 4.5, 7.5);
  EXPECT_DOUBLE_EQ(transition_cost(tables(), high, deep, w),
                   tables().lookup(Medium::Air, {0, 0, -3}) + tables().lookup(Medium::Water, {0, 0, -3}));
}

TEST(TransitionCost, RejectsNonVerticalOrSameSide) {
  const WaterSurface w{10.0};
  EXPECT_THROW(transition_cost(tables(), Vec3(1.5, 1.5, 10.5), Vec3(2.5, 1.5, 9.5), w), InvalidArgument);
  EXPECT_THROW(transition_cost(tables(), Vec3(1.5, 1.5, 11.5), Vec3(1.5, 1.5, 10.5), w), InvalidArgument);
}

TEST(TransitionCost, CrossingFlightNearComposedEstimate) {
  // Rest 1.5 m above the surface to rest 1.5 m below it, flown through the switch.
  FlightOptions opts;
  opts.dt = kParams.dt;
  opts.water.level = 0.0;
  VehicleState s0;
  s0.x = world_to_inertial(Vec3(0, 0, 1.5));
  const Vec3 target = world_to_inertial(Vec3(0, 0, -1.5));
  Flight flight(kParams.make_stack(), opts, s0);
  KinematicState start;
  start.x = s0.x;
  const TrajectorySegment seg = build_spline(start, 0.0, target, target, kParams.v_c, kParams.spline);
  const double band = kParams.settling.fraction * 3.0;
  double entered = -1.0;
  double energy_at_entry = 0.0;
  while (flight.state().t < seg.t2 + 20.0) {
    const bool inside = ((flight.state().x - target).cwiseAbs().array() <= band).all();
    if (!inside) entered = -1.0;
    if (inside && entered < 0.0) {
      entered = flight.state().t;
      energy_at_entry = flight.state().energy;
    }
    flight.step(eval_spline(seg, std::min(flight.state().t, seg.t2)));
  }
  ASSERT_GE(entered, 0.0);
  const double composed = transition_cost(tables(), Vec3(0, 0, 1.5), Vec3(0, 0, -1.5), opts.water);
  EXPECT_NEAR(energy_at_entry / composed, 1.0, 0.3);
}

}  // namespace
}  // namespace amphi
