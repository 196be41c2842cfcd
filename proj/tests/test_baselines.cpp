#include "doctest.h"

#include "eglb/baselines.hpp"
#include "eglb/errors.hpp"
#include "eglb/traces.hpp"

#include "test_helpers.hpp"

using namespace eglb;
using testutil::make_fleet;
using testutil::make_slot;

namespace {

Trace two_dc_trace(std::vector<double> price, std::vector<double> carbon,
                   std::vector<double> wue_d, std::vector<double> wue_i,
                   double load = 0.5) {
  Trace t;
  t.fleet = make_fleet({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, SizingMode::PerfectRightSize, 1);
  t.slots.push_back(make_slot(0, {load}, std::move(price), {1.0, 1.0}, std::move(carbon),
                              std::move(wue_d), std::move(wue_i)));
  return t;
}

}  // namespace

TEST_CASE("energy baseline routes to the cheap DC") {
  Trace t = two_dc_trace({10.0, 20.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0});
  auto r = run_energy(t);
  CHECK(r.schedule.decisions[0](0, 0) == doctest::Approx(0.5));
  CHECK(r.schedule.decisions[0](1, 0) == 0.0);

  Trace single;
  single.fleet = make_fleet({1.0}, {0.0}, {1.0});
  single.slots.push_back(make_slot(0, {0.7}, {5.0}, {1.0}, {0.0}, {0.0}, {0.0}));
  auto rs = run_energy(single);
  CHECK(rs.schedule.decisions[0](0, 0) == doctest::Approx(0.7));
}

TEST_CASE("carbon baseline prefers the low-carbon DC; ties go to the lowest index") {
  Trace t = two_dc_trace({10.0, 5.0}, {0.5, 0.1}, {0.0, 0.0}, {0.0, 0.0});
  auto r = run_carbon(t);
  CHECK(r.schedule.decisions[0](1, 0) == doctest::Approx(0.5));

  Trace uniform = two_dc_trace({10.0, 5.0}, {0.3, 0.3}, {0.0, 0.0}, {0.0, 0.0});
  auto u = run_carbon(uniform);
  CHECK(u.schedule.decisions[0](0, 0) == doctest::Approx(0.5));  // lowest index on tie
}

TEST_CASE("water baseline follows the direct WUE when indirect is zero") {
  Trace t = two_dc_trace({1.0, 1.0}, {0.0, 0.0}, {1.0, 9.0}, {0.0, 0.0});
  auto r = run_water(t);
  CHECK(r.schedule.decisions[0](0, 0) == doctest::Approx(0.5));
}

TEST_CASE("weighted baselines degenerate to the single-metric ones") {
  Trace t = synth(small_profile(4, 4), 48, 19);
  auto energy = run_energy(t);
  auto carbon = run_carbon(t);
  auto we = run_weighted(t, 1.0, 0.0, 0.0);
  auto wc = run_weighted(t, 0.0, 1.0, 0.0);
  for (int k = 0; k < t.horizon(); ++k) {
    CHECK(we.schedule.decisions[k].data == energy.schedule.decisions[k].data);
    CHECK(wc.schedule.decisions[k].data == carbon.schedule.decisions[k].data);
  }
}

TEST_CASE("weighted baseline matches a brute-force split search") {
  Trace t = two_dc_trace({30.0, 80.0}, {0.6, 0.1}, {5.0, 1.0}, {1.0, 1.0}, 0.9);
  auto r = run_weighted(t, 1.0, 1500.0, 60.0);
  const auto& in = t.slots[0];
  double best = 1e300, best_a = 0.0;
  for (int q = 0; q <= 900; ++q) {
    double a = q / 1000.0;  // load on DC0, rest on DC1
    double b = 0.9 - a;
    double cost = 0.0;
    for (int i = 0; i < 2; ++i) {
      double load = i == 0 ? a : b;
      cost += in.price[i] * load + 1500.0 * in.carbon_intensity[i] * load +
              60.0 * (in.wue_direct[i] + in.wue_indirect[i]) * load;
    }
    if (cost < best) {
      best = cost;
      best_a = a;
    }
  }
  CHECK(r.schedule.decisions[0](0, 0) == doctest::Approx(best_a).epsilon(1e-6));
}

TEST_CASE("nearest routing is the static map") {
  Trace t = synth(small_profile(3, 3), 24, 5);
  auto r = run_nearest(t);
  for (int k = 0; k < t.horizon(); ++k)
    for (int j = 0; j < 3; ++j) {
      CHECK(r.schedule.decisions[k](t.fleet.nearest_map[j], j) ==
            doctest::Approx(t.slots[k].load[j]));
    }
}

TEST_CASE("overloaded nearest DC raises an error naming it") {
  Trace t;
  t.fleet = make_fleet({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, SizingMode::PerfectRightSize, 2);
  t.fleet.nearest_map = {0, 0};  // both gateways pile onto DC0
  t.slots.push_back(
      make_slot(0, {0.8, 0.8}, {1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}));
  try {
    run_nearest(t);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("dc 0") != std::string::npos);
  }
}

TEST_CASE("energy baseline has the lowest total energy cost") {
  Trace t = synth(skewed10_profile(), 96, 23);
  double energy_cost = run_energy(t).report.total_energy_cost;
  CHECK(run_carbon(t).report.total_energy_cost >= energy_cost - 1e-6);
  CHECK(run_water(t).report.total_energy_cost >= energy_cost - 1e-6);
  CHECK(run_weighted(t, 1.0, 1500.0, 60.0).report.total_energy_cost >= energy_cost - 1e-6);
  CHECK(run_nearest(t).report.total_energy_cost >= energy_cost - 1e-6);
}
