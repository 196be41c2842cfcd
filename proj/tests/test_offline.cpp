#include "doctest.h"

#include <cmath>

#include "eglb/baselines.hpp"
#include "eglb/eglb.hpp"
#include "eglb/metrics.hpp"
#include "eglb/model.hpp"
#include "eglb/offline.hpp"
#include "eglb/traces.hpp"

#include "test_helpers.hpp"

using namespace eglb;
using testutil::make_fleet;
using testutil::make_slot;
using testutil::unit_equity;

namespace {

Trace tiny_trace(double load0, double load1) {
  Trace t;
  t.fleet = make_fleet({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, SizingMode::PerfectRightSize, 1);
  t.slots.push_back(
      make_slot(0, {load0}, {20.0, 60.0}, {1.1, 1.1}, {0.5, 0.1}, {4.0, 1.0}, {1.0, 1.0}));
  t.slots.push_back(
      make_slot(1, {load1}, {55.0, 25.0}, {1.1, 1.1}, {0.2, 0.4}, {1.5, 3.0}, {1.0, 1.0}));
  return t;
}

// Exhaustive routing-grid optimum for the tiny 2-slot, 2-DC, 1-gateway case.
double grid_optimum(const Trace& t, const EquitySpec& eq, int points = 1001) {
  double best = 1e300;
  const auto slopes0 = marginal_coefficients(t.fleet, t.slots[0]);
  const auto slopes1 = marginal_coefficients(t.fleet, t.slots[1]);
  auto scale = equity_scale(t.fleet, eq);
  for (int a = 0; a < points; ++a) {
    double x0 = t.slots[0].load[0] * a / (points - 1);
    if (x0 > t.fleet.capacity[0] || t.slots[0].load[0] - x0 > t.fleet.capacity[1]) continue;
    for (int b = 0; b < points; ++b) {
      double y0 = t.slots[1].load[0] * b / (points - 1);
      if (y0 > t.fleet.capacity[0] || t.slots[1].load[0] - y0 > t.fleet.capacity[1]) continue;
      double l00 = x0, l01 = t.slots[0].load[0] - x0;
      double l10 = y0, l11 = t.slots[1].load[0] - y0;
      double energy = slopes0.energy_cost[0] * l00 + slopes0.energy_cost[1] * l01 +
                      slopes1.energy_cost[0] * l10 + slopes1.energy_cost[1] * l11;
      double c0 = slopes0.carbon[0] * l00 + slopes1.carbon[0] * l10;
      double c1 = slopes0.carbon[1] * l01 + slopes1.carbon[1] * l11;
      double w0 = slopes0.water[0] * l00 + slopes1.water[0] * l10;
      double w1 = slopes0.water[1] * l01 + slopes1.water[1] * l11;
      double v = energy / 2.0 +
                 eq.mu_carbon * std::max(eq.theta_carbon[0] * c0 * scale[0] / 2.0,
                                         eq.theta_carbon[1] * c1 * scale[1] / 2.0) +
                 eq.mu_water * std::max(eq.theta_water[0] * w0 * scale[0] / 2.0,
                                        eq.theta_water[1] * w1 * scale[1] / 2.0);
      best = std::min(best, v);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("mu = 0 decomposes into the per-slot energy optimum, gap zero") {
  Trace t = synth(small_profile(3, 3), 36, 8);
  EquitySpec eq = unit_equity(3, 0.0, 0.0);
  auto sol = solve_offline(t, eq);
  CHECK(sol.gap_estimate == 0.0);
  CHECK(sol.converged);
  auto energy = run_energy(t);
  for (int k = 0; k < t.horizon(); ++k)
    CHECK(sol.decisions[k].data == energy.schedule.decisions[k].data);
}

TEST_CASE("matches an exhaustive routing grid on a tiny instance") {
  Trace t = tiny_trace(0.9, 1.3);
  EquitySpec eq = unit_equity(2, 100.0, 20.0);
  OfflineOptions opt;
  opt.tol = 1e-6;
  auto sol = solve_offline(t, eq, opt);
  double grid = grid_optimum(t, eq);
  // Grid resolution ~1e-3 MW; slopes are O(100), so allow a small slack.
  CHECK(sol.objective <= grid + 1e-6 * std::max(1.0, grid) + 1e-9);
  CHECK(sol.objective >= grid - 0.5);
  CHECK(sol.dual_bound <= sol.objective + 1e-9);
  CHECK(sol.gap_estimate <= 1e-5 * std::max(1.0, sol.objective));
}

TEST_CASE("weak duality and feasibility on a larger instance") {
  Trace t = synth(small_profile(5, 5), 96, 13);
  EquitySpec eq = unit_equity(5, 1500.0, 60.0);
  OfflineOptions opt;
  opt.tol = 1e-4;
  auto sol = solve_offline(t, eq, opt);
  CHECK(sol.dual_bound <= sol.objective + 1e-9);
  CHECK(sol.gap_estimate <= 1e-4 * std::max(1.0, std::abs(sol.objective)) * 1.01);
  for (int k = 0; k < t.horizon(); ++k)
    CHECK_NOTHROW(check_decision(t.fleet, t.slots[k], sol.decisions[k]));
}

TEST_CASE("offline dominates online and the baselines") {
  Trace t = synth(small_profile(4, 4), 72, 29);
  EquitySpec eq = unit_equity(4, 1500.0, 60.0);
  OfflineOptions opt;
  auto sol = solve_offline(t, eq, opt);
  double tol = 1e-4 * std::max(1.0, std::abs(sol.objective));

  RunConfig cfg;
  cfg.equity = eq;
  cfg.eta = 0.003;
  CHECK(sol.objective <= objective(run(t, cfg).schedule.decisions, t, eq) + tol);
  CHECK(sol.objective <= objective(run_energy(t).schedule.decisions, t, eq) + tol);
  CHECK(sol.objective <= objective(run_carbon(t).schedule.decisions, t, eq) + tol);
  CHECK(sol.objective <= objective(run_water(t).schedule.decisions, t, eq) + tol);
  CHECK(sol.objective <= objective(run_nearest(t).schedule.decisions, t, eq) + tol);
}

TEST_CASE("full-horizon window with no carry reproduces solve_offline") {
  Trace t = synth(small_profile(2, 2), 24, 3);
  EquitySpec eq = unit_equity(2, 500.0, 30.0);
  std::vector<double> zero(2, 0.0);
  auto windowed = solve_window(t, 0, t.horizon(), eq, zero, zero, 0);
  auto full = solve_offline(t, eq);
  REQUIRE(windowed.size() == full.decisions.size());
  for (size_t k = 0; k < windowed.size(); ++k)
    CHECK(windowed[k].data == full.decisions[k].data);
}

TEST_CASE("single-slot window with mu = 0 is one transport solve") {
  Trace t = synth(small_profile(2, 2), 8, 3);
  EquitySpec eq = unit_equity(2, 0.0, 0.0);
  std::vector<double> zero(2, 0.0);
  auto w = solve_window(t, 5, 1, eq, zero, zero, 5);
  auto energy = run_energy(t);
  REQUIRE(w.size() == 1);
  CHECK(w[0].data == energy.schedule.decisions[5].data);
}

TEST_CASE("carried footprints steer the window away from the loaded DC") {
  // Symmetric two-DC instance: without carry the tie-break prefers DC0.
  Trace t;
  t.fleet = make_fleet({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, SizingMode::PerfectRightSize, 1);
  for (int k = 0; k < 4; ++k)
    t.slots.push_back(
        make_slot(k, {1.0}, {50.0, 50.0}, {1.1, 1.1}, {0.3, 0.3}, {2.0, 2.0}, {1.0, 1.0}));
  EquitySpec eq = unit_equity(2, 1000.0, 0.0);
  std::vector<double> zero(2, 0.0);
  auto no_carry = solve_window(t, 0, 4, eq, zero, zero, 4);
  std::vector<double> skew{50.0, 0.0};
  auto with_carry = solve_window(t, 0, 4, eq, skew, zero, 4);
  double load0_no = 0.0, load0_with = 0.0;
  for (int k = 0; k < 4; ++k) {
    load0_no += no_carry[k](0, 0);
    load0_with += with_carry[k](0, 0);
  }
  CHECK(load0_with < load0_no - 0.5);
}

TEST_CASE("mpc with a full-horizon window reproduces the offline solution") {
  Trace t = synth(small_profile(3, 3), 24, 17);
  EquitySpec eq = unit_equity(3, 1500.0, 60.0);
  auto sol = solve_offline(t, eq);
  auto mpc = run_mpc(t, eq, t.horizon() + 5);
  REQUIRE(static_cast<int>(mpc.schedule.decisions.size()) == t.horizon());
  for (int k = 0; k < t.horizon(); ++k)
    CHECK(mpc.schedule.decisions[k].data == sol.decisions[k].data);
}

TEST_CASE("mpc with window 1 and mu = 0 reproduces the energy baseline") {
  Trace t = synth(small_profile(3, 3), 24, 17);
  EquitySpec eq = unit_equity(3, 0.0, 0.0);
  auto mpc = run_mpc(t, eq, 1);
  auto energy = run_energy(t);
  for (int k = 0; k < t.horizon(); ++k)
    CHECK(mpc.schedule.decisions[k].data == energy.schedule.decisions[k].data);
}

TEST_CASE("24-slot lookahead lands between the offline optimum and the online run") {
  Trace t = synth(skewed10_profile(), 168, 3);
  EquitySpec eq = unit_equity(10, 1500.0, 60.0);
  OfflineOptions opt;
  opt.tol = 1e-4;
  auto off = solve_offline(t, eq, opt);
  OfflineOptions mpc_opt;
  mpc_opt.tol = 1e-3;
  auto mpc = run_mpc(t, eq, 24, mpc_opt);
  RunConfig cfg;
  cfg.equity = eq;
  cfg.eta = 0.03;
  auto online = run(t, cfg);
  double tol = 1e-3 * off.objective;
  CHECK(off.objective <= mpc.report.objective + tol);
  CHECK(mpc.report.objective <= online.report.objective + tol);
}
