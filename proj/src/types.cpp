#include "eglb/types.hpp"

#include <string>

#include "eglb/errors.hpp"

namespace eglb {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw StructuralError(msg);
}

void check_vector(const std::vector<double>& v, int n, const char* name, double min_value) {
  require(static_cast<int>(v.size()) == n,
          std::string(name) + ": expected length " + std::to_string(n) + ", got " +
              std::to_string(v.size()));
  for (int i = 0; i < n; ++i) {
    require(v[i] == v[i], std::string(name) + "[" + std::to_string(i) + "] is NaN");
    require(v[i] >= min_value, std::string(name) + "[" + std::to_string(i) + "] = " +
                                   std::to_string(v[i]) + " below " + std::to_string(min_value));
  }
}

}  // namespace

void FleetSpec::validate() const {
  require(n_datacenters > 0, "n_datacenters must be positive");
  require(n_gateways > 0, "n_gateways must be positive");
  require(slot_hours > 0.0, "slot_hours must be positive");
  check_vector(capacity, n_datacenters, "capacity", 0.0);
  for (double m : capacity) require(m > 0.0, "capacity entries must be > 0");
  require(connectivity.rows == n_datacenters && connectivity.cols == n_gateways,
          "connectivity must be N x J");
  for (int j = 0; j < n_gateways; ++j) {
    bool any = false;
    for (int i = 0; i < n_datacenters; ++i) any = any || connectivity.at(i, j);
    require(any, "gateway " + std::to_string(j) + " has no allowed data center");
  }
  check_vector(energy_model.static_energy, n_datacenters, "static_energy", 0.0);
  check_vector(energy_model.dynamic_energy, n_datacenters, "dynamic_energy", 0.0);
  for (double e : energy_model.dynamic_energy) require(e > 0.0, "dynamic_energy must be > 0");
  require(static_cast<int>(nearest_map.size()) == n_gateways, "nearest_map must have length J");
  for (int j = 0; j < n_gateways; ++j) {
    int i = nearest_map[j];
    require(i >= 0 && i < n_datacenters, "nearest_map[" + std::to_string(j) + "] out of range");
    require(connectivity.at(i, j), "nearest_map[" + std::to_string(j) +
                                       "] points to a disconnected data center");
  }
}

void SlotInput::validate(int n_datacenters, int n_gateways) const {
  check_vector(load, n_gateways, "load", 0.0);
  check_vector(price, n_datacenters, "price", 0.0);
  check_vector(pue, n_datacenters, "pue", 1.0);
  check_vector(carbon_intensity, n_datacenters, "carbon_intensity", 0.0);
  check_vector(wue_direct, n_datacenters, "wue_direct", 0.0);
  check_vector(wue_indirect, n_datacenters, "wue_indirect", 0.0);
}

void EquitySpec::validate(int n_datacenters) const {
  check_vector(theta_carbon, n_datacenters, "theta_carbon", 0.0);
  check_vector(theta_water, n_datacenters, "theta_water", 0.0);
  require(mu_carbon >= 0.0, "mu_carbon must be >= 0");
  require(mu_water >= 0.0, "mu_water must be >= 0");
}

}  // namespace eglb
