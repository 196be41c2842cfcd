#include "doctest.h"

#include <cmath>

#include "eglb/errors.hpp"
#include "eglb/model.hpp"
#include "eglb/traces.hpp"

#include "test_helpers.hpp"

using namespace eglb;
using testutil::make_fleet;
using testutil::make_slot;
using testutil::single_route;

TEST_CASE("server energy under both sizing modes") {
  // Perfectly right-sized, no static term: energy = power x time.
  auto spec = make_fleet({1.0}, {0.0}, {1.0});
  CHECK(server_energy(spec, single_route(0.5))[0] == doctest::Approx(0.5).epsilon(1e-12));

  // Always on: static term alone at zero load.
  auto on = make_fleet({1.0}, {0.2}, {0.8}, SizingMode::AlwaysOn);
  CHECK(server_energy(on, single_route(0.0))[0] == doctest::Approx(0.2).epsilon(1e-12));

  // Right-sized with both terms.
  auto prs = make_fleet({1.0}, {0.2}, {0.8});
  CHECK(server_energy(prs, single_route(0.5))[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("energy cost") {
  auto spec = make_fleet({1.0}, {1.0}, {1.0}, SizingMode::AlwaysOn);
  auto in = make_slot(0, {0.0}, {64.931}, {1.1}, {0.0}, {0.0}, {0.0});
  // e = 1 MWh at zero load.
  CHECK(energy_cost(spec, in, single_route(0.0)) == doctest::Approx(71.4241).epsilon(1e-9));

  auto zero = make_fleet({1.0}, {0.0}, {1.0});
  CHECK(energy_cost(zero, in, single_route(0.0)) == 0.0);

  auto two = make_fleet({1.0, 1.0}, {1.0, 2.0}, {1.0, 1.0}, SizingMode::AlwaysOn, 2);
  auto in2 = make_slot(0, {0.0, 0.0}, {10.0, 20.0}, {1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0},
                       {0.0, 0.0});
  Decision x(2, 2, 0.0);
  CHECK(energy_cost(two, in2, x) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("carbon footprint") {
  auto spec = make_fleet({1.0}, {1.0}, {1.0}, SizingMode::AlwaysOn);
  auto in = make_slot(0, {0.0}, {0.0}, {1.1}, {0.4011}, {0.0}, {0.0});
  CHECK(carbon_footprint(spec, in, single_route(0.0))[0] ==
        doctest::Approx(0.44121).epsilon(1e-9));

  in.carbon_intensity = {0.0};
  CHECK(carbon_footprint(spec, in, single_route(0.0))[0] == 0.0);

  auto two = make_fleet({1.0}, {2.0}, {1.0}, SizingMode::AlwaysOn);
  auto in2 = make_slot(0, {0.0}, {0.0}, {1.2}, {0.5}, {0.0}, {0.0});
  CHECK(carbon_footprint(two, in2, single_route(0.0))[0] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("water footprint: direct WUE skips the PUE factor") {
  auto spec = make_fleet({1.0}, {1.0}, {1.0}, SizingMode::AlwaysOn);
  auto in = make_slot(0, {0.0}, {0.0}, {1.1}, {0.0}, {1.0}, {1.8});
  CHECK(water_footprint(spec, in, single_route(0.0))[0] == doctest::Approx(2.98).epsilon(1e-9));

  in.wue_direct = {0.0};
  in.wue_indirect = {0.0};
  CHECK(water_footprint(spec, in, single_route(0.0))[0] == 0.0);

  auto three = make_fleet({1.0}, {3.0}, {1.0}, SizingMode::AlwaysOn);
  auto in2 = make_slot(0, {0.0}, {0.0}, {1.0}, {0.0}, {2.0}, {1.0});
  CHECK(water_footprint(three, in2, single_route(0.0))[0] == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("marginal coefficients") {
  auto on = make_fleet({1.0}, {0.0}, {1.0}, SizingMode::AlwaysOn);
  auto in = make_slot(0, {0.0}, {10.0}, {1.0}, {0.0}, {0.0}, {0.0});
  CHECK(marginal_coefficients(on, in).energy_cost[0] == doctest::Approx(10.0).epsilon(1e-12));

  auto prs = make_fleet({1.0}, {0.5}, {0.5});
  CHECK(energy_slope(prs)[0] == doctest::Approx(1.0).epsilon(1e-12));

  in.price = {0.0};
  CHECK(marginal_coefficients(on, in).energy_cost[0] == 0.0);
}

TEST_CASE("costs are affine in assigned load: offset + slope * load") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    auto mode = trial % 2 == 0 ? SizingMode::PerfectRightSize : SizingMode::AlwaysOn;
    double cap = rng.uniform(0.5, 5.0);
    auto spec = make_fleet({cap}, {rng.uniform(0.0, 2.0)}, {rng.uniform(0.1, 3.0)}, mode);
    auto in = make_slot(0, {0.0}, {rng.uniform(1.0, 300.0)}, {rng.uniform(1.0, 2.0)},
                        {rng.uniform(0.0, 1.0)}, {rng.uniform(0.0, 9.0)},
                        {rng.uniform(0.0, 3.0)});
    auto m = marginal_coefficients(spec, in);
    auto b_energy = energy_intercept(spec);
    double load = rng.uniform(0.0, cap);
    auto x = single_route(load);

    double g = energy_cost(spec, in, x);
    double g_affine = in.price[0] * in.pue[0] * b_energy[0] + m.energy_cost[0] * load;
    CHECK(g == doctest::Approx(g_affine).epsilon(1e-12));

    double c = carbon_footprint(spec, in, x)[0];
    double c_affine = in.carbon_intensity[0] * in.pue[0] * b_energy[0] + m.carbon[0] * load;
    CHECK(c == doctest::Approx(c_affine).epsilon(1e-12));

    double w = water_footprint(spec, in, x)[0];
    double w_affine =
        (in.wue_direct[0] + in.wue_indirect[0] * in.pue[0]) * b_energy[0] + m.water[0] * load;
    CHECK(w == doctest::Approx(w_affine).epsilon(1e-12));
  }
}

TEST_CASE("footprints depend only on per-DC totals, not the gateway split") {
  auto spec = make_fleet({2.0, 2.0}, {0.1, 0.2}, {1.0, 1.5}, SizingMode::AlwaysOn, 3);
  auto in = make_slot(0, {0.4, 0.6, 0.5}, {10.0, 20.0}, {1.1, 1.2}, {0.3, 0.4}, {1.0, 2.0},
                      {0.5, 0.7});
  Decision a(2, 3, 0.0);
  a(0, 0) = 0.4;
  a(0, 1) = 0.6;
  a(1, 2) = 0.5;
  Decision b(2, 3, 0.0);  // same row totals, different split
  b(0, 0) = 0.1;
  b(0, 1) = 0.5;
  b(0, 2) = 0.4;
  b(1, 0) = 0.3;
  b(1, 1) = 0.1;
  b(1, 2) = 0.1;
  REQUIRE(assigned_load(a)[0] == doctest::Approx(assigned_load(b)[0]));
  REQUIRE(assigned_load(a)[1] == doctest::Approx(assigned_load(b)[1]));
  auto ca = carbon_footprint(spec, in, a), cb = carbon_footprint(spec, in, b);
  auto wa = water_footprint(spec, in, a), wb = water_footprint(spec, in, b);
  for (int i = 0; i < 2; ++i) {
    CHECK(ca[i] == doctest::Approx(cb[i]).epsilon(1e-12));
    CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-12));
  }
}

TEST_CASE("structural errors") {
  auto spec = make_fleet({1.0}, {0.0}, {1.0});
  CHECK_THROWS_AS(server_energy_from_load(spec, {1.0, 2.0}), StructuralError);
  Decision wrong(2, 1, 0.0);
  CHECK_THROWS_AS(server_energy(spec, wrong), StructuralError);

  // Connectivity violations and conservation failures are rejected.
  auto in = make_slot(0, {1.0}, {1.0}, {1.0}, {0.0}, {0.0}, {0.0});
  Decision bad = single_route(0.5);
  CHECK_THROWS_AS(check_decision(spec, in, bad), StructuralError);
  Decision good = single_route(1.0);
  CHECK_NOTHROW(check_decision(spec, in, good));
}

TEST_CASE("fleet invariants") {
  auto spec = make_fleet({1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, SizingMode::PerfectRightSize, 2);
  CHECK_NOTHROW(spec.validate());

  auto disconnected = spec;
  disconnected.connectivity.set(0, 1, false);
  disconnected.connectivity.set(1, 1, false);
  CHECK_THROWS_AS(disconnected.validate(), StructuralError);

  auto bad_nearest = spec;
  bad_nearest.connectivity.set(bad_nearest.nearest_map[1], 1, false);
  CHECK_THROWS_AS(bad_nearest.validate(), StructuralError);

  auto zero_dynamic = spec;
  zero_dynamic.energy_model.dynamic_energy[0] = 0.0;
  CHECK_THROWS_AS(zero_dynamic.validate(), StructuralError);
}
