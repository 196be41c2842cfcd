#include "doctest.h"

#include <cmath>

#include "eglb/bounds.hpp"
#include "eglb/eglb.hpp"
#include "eglb/offline.hpp"
#include "eglb/traces.hpp"

#include "test_helpers.hpp"

using namespace eglb;
using testutil::unit_equity;

TEST_CASE("constant formulas") {
  Trace t = synth(small_profile(1, 1), 4, 2);
  EquitySpec eq = unit_equity(1, 0.0, 0.0);
  auto k = constants(t, eq, {2.0}, {0.0});
  CHECK(k.B == doctest::Approx(2.0).epsilon(1e-12));  // 0.5 * 1 * 4
  CHECK(k.C == 0.0);
  CHECK(k.D == 0.0);

  EquitySpec weighted = unit_equity(1, 1500.0, 60.0);
  auto kw = constants(t, weighted, {2.0}, {0.0});
  CHECK(kw.C == doctest::Approx(1560.0).epsilon(1e-12));
  CHECK(kw.theta_m == 1.0);
  CHECK(kw.M == doctest::Approx(t.fleet.capacity[0]));
  CHECK(kw.c_m > 0.0);
  CHECK(kw.w_m > 0.0);
}

TEST_CASE("cost bound check passes at equality and fails on fabricated violations") {
  Trace t = synth(small_profile(2, 2), 8, 2);
  EquitySpec eq = unit_equity(2, 1500.0, 60.0);
  auto zc = default_zbar_carbon(t, eq);
  auto zw = default_zbar_water(t, eq);
  auto k = constants(t, eq, zc, zw);

  auto equal = check_cost_bound(100.0, 100.0, k, 0.01, 8);
  CHECK(equal.pass);
  CHECK(equal.slack == doctest::Approx(equal.bound - 100.0));

  double bound_terms = equal.bound - 100.0;
  auto violated = check_cost_bound(100.0 + 2.0 * bound_terms, 100.0, k, 0.01, 8);
  CHECK_FALSE(violated.pass);
  CHECK(violated.slack < 0.0);
}

TEST_CASE("dual-norm check: trivial horizon, real runs, and a negative control") {
  Trace t = synth(small_profile(2, 2), 8, 2);
  EquitySpec eq = unit_equity(2, 1500.0, 60.0);
  auto k = constants(t, eq, default_zbar_carbon(t, eq), default_zbar_water(t, eq));

  CHECK(check_dual_norm(std::vector<double>(4, 0.0), k, 0.01, 0).pass);

  RunConfig cfg;
  cfg.equity = eq;
  cfg.eta = 0.05;
  auto r = run(t, cfg);
  auto dn = check_dual_norm(r.schedule, k, cfg.eta, t.horizon());
  CHECK(dn.pass);

  std::vector<double> huge(4, dn.bound);
  CHECK_FALSE(check_dual_norm(huge, k, cfg.eta, t.horizon()).pass);
}

TEST_CASE("cost and multiplier-norm bounds hold on end-to-end runs") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Trace t = synth(small_profile(2, 2), 100, seed);
    EquitySpec eq = unit_equity(2, 1500.0, 60.0);
    RunConfig cfg;
    cfg.equity = eq;
    cfg.eta = 0.01;
    auto online = run(t, cfg);
    OfflineOptions opt;
    opt.tol = 1e-3;
    auto off = solve_offline(t, eq, opt);
    auto k = constants(t, eq, default_zbar_carbon(t, eq), default_zbar_water(t, eq));
    auto t1 =
        check_cost_bound(online.report.objective, off.objective, k, cfg.eta, t.horizon());
    CHECK(t1.pass);
    auto dn = check_dual_norm(online.schedule, k, cfg.eta, t.horizon());
    CHECK(dn.pass);
  }
}

TEST_CASE("capacity-normalized runs satisfy the bounds in scaled units") {
  Trace t = synth(small_profile(3, 3), 72, 5);
  t.fleet.capacity = {800.0, 1000.0, 1200.0};
  t.fleet.energy_model.dynamic_energy = t.fleet.capacity;
  EquitySpec eq = unit_equity(3, 1500.0, 60.0);
  eq.normalize_by_capacity = true;
  RunConfig cfg;
  cfg.equity = eq;
  cfg.eta = 5.0;  // scaled footprints are per-MW, so the step is larger
  auto online = run(t, cfg);
  OfflineOptions opt;
  opt.tol = 1e-3;
  auto off = solve_offline(t, eq, opt);
  CHECK(off.objective <= online.report.objective + 1e-3 * off.objective);
  auto k = constants(t, eq, default_zbar_carbon(t, eq), default_zbar_water(t, eq));
  CHECK(check_cost_bound(online.report.objective, off.objective, k, cfg.eta, t.horizon()).pass);
  CHECK(check_dual_norm(online.schedule, k, cfg.eta, t.horizon()).pass);
}
