#pragma once

#include <vector>

#include "eglb/traces.hpp"
#include "eglb/types.hpp"

namespace testutil {

// One-line fleet for unit tests: full connectivity, identity-ish nearest map.
inline eglb::FleetSpec make_fleet(std::vector<double> capacity, std::vector<double> static_e,
                                  std::vector<double> dynamic_e,
                                  eglb::SizingMode mode = eglb::SizingMode::PerfectRightSize,
                                  int n_gateways = 1) {
  eglb::FleetSpec spec;
  spec.n_datacenters = static_cast<int>(capacity.size());
  spec.n_gateways = n_gateways;
  spec.capacity = std::move(capacity);
  spec.connectivity = eglb::BoolMat(spec.n_datacenters, n_gateways, true);
  spec.energy_model.static_energy = std::move(static_e);
  spec.energy_model.dynamic_energy = std::move(dynamic_e);
  spec.energy_model.sizing_mode = mode;
  spec.nearest_map.assign(n_gateways, 0);
  for (int j = 0; j < n_gateways; ++j) spec.nearest_map[j] = j % spec.n_datacenters;
  return spec;
}

inline eglb::SlotInput make_slot(int t, std::vector<double> load, std::vector<double> price,
                                 std::vector<double> pue, std::vector<double> carbon,
                                 std::vector<double> wue_d, std::vector<double> wue_i) {
  eglb::SlotInput in;
  in.t = t;
  in.load = std::move(load);
  in.price = std::move(price);
  in.pue = std::move(pue);
  in.carbon_intensity = std::move(carbon);
  in.wue_direct = std::move(wue_d);
  in.wue_indirect = std::move(wue_i);
  return in;
}

inline eglb::Decision single_route(double mw) {
  eglb::Decision x(1, 1, 0.0);
  x(0, 0) = mw;
  return x;
}

inline eglb::EquitySpec unit_equity(int n, double mu_c, double mu_w) {
  eglb::EquitySpec eq;
  eq.theta_carbon.assign(n, 1.0);
  eq.theta_water.assign(n, 1.0);
  eq.mu_carbon = mu_c;
  eq.mu_water = mu_w;
  return eq;
}

}  // namespace testutil
