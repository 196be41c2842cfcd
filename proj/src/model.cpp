#include "eglb/model.hpp"

#include <cmath>
#include <string>

#include "eglb/errors.hpp"

namespace eglb {

std::vector<double> assigned_load(const Decision& x) {
  std::vector<double> load(x.rows, 0.0);
  for (int i = 0; i < x.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < x.cols; ++j) s += x(i, j);
    load[i] = s;
  }
  return load;
}

std::vector<double> server_energy_from_load(const FleetSpec& spec,
                                            const std::vector<double>& load) {
  const int n = spec.n_datacenters;
  if (static_cast<int>(load.size()) != n)
    throw StructuralError("server_energy: load length " + std::to_string(load.size()) +
                          " != N = " + std::to_string(n));
  const auto& em = spec.energy_model;
  std::vector<double> e(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double util = load[i] / spec.capacity[i];
    double rho = em.sizing_mode == SizingMode::AlwaysOn ? 1.0 : util;
    e[i] = rho * em.static_energy[i] + util * em.dynamic_energy[i];
  }
  return e;
}

std::vector<double> server_energy(const FleetSpec& spec, const Decision& x) {
  if (x.rows != spec.n_datacenters || x.cols != spec.n_gateways)
    throw StructuralError("server_energy: decision is " + std::to_string(x.rows) + "x" +
                          std::to_string(x.cols) + ", fleet is " +
                          std::to_string(spec.n_datacenters) + "x" +
                          std::to_string(spec.n_gateways));
  return server_energy_from_load(spec, assigned_load(x));
}

double energy_cost(const FleetSpec& spec, const SlotInput& in, const Decision& x) {
  auto e = server_energy(spec, x);
  double g = 0.0;
  for (int i = 0; i < spec.n_datacenters; ++i) g += in.price[i] * in.pue[i] * e[i];
  return g;
}

std::vector<double> carbon_footprint(const FleetSpec& spec, const SlotInput& in,
                                     const Decision& x) {
  auto e = server_energy(spec, x);
  std::vector<double> c(spec.n_datacenters, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    c[i] = in.carbon_intensity[i] * in.pue[i] * e[i];
  return c;
}

std::vector<double> water_footprint(const FleetSpec& spec, const SlotInput& in,
                                    const Decision& x) {
  auto e = server_energy(spec, x);
  std::vector<double> w(spec.n_datacenters, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    w[i] = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * e[i];
  return w;
}

std::vector<double> energy_slope(const FleetSpec& spec) {
  const auto& em = spec.energy_model;
  std::vector<double> s(spec.n_datacenters, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i) {
    double num = em.sizing_mode == SizingMode::AlwaysOn
                     ? em.dynamic_energy[i]
                     : em.static_energy[i] + em.dynamic_energy[i];
    s[i] = num / spec.capacity[i];
  }
  return s;
}

std::vector<double> energy_intercept(const FleetSpec& spec) {
  const auto& em = spec.energy_model;
  std::vector<double> b(spec.n_datacenters, 0.0);
  if (em.sizing_mode == SizingMode::AlwaysOn)
    for (int i = 0; i < spec.n_datacenters; ++i) b[i] = em.static_energy[i];
  return b;
}

std::vector<double> energy_at_full(const FleetSpec& spec) {
  const auto& em = spec.energy_model;
  std::vector<double> e(spec.n_datacenters, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    e[i] = em.static_energy[i] + em.dynamic_energy[i];
  return e;
}

MarginalCoefficients marginal_coefficients(const FleetSpec& spec, const SlotInput& in) {
  auto de = energy_slope(spec);
  MarginalCoefficients m;
  m.energy_cost.resize(spec.n_datacenters);
  m.carbon.resize(spec.n_datacenters);
  m.water.resize(spec.n_datacenters);
  for (int i = 0; i < spec.n_datacenters; ++i) {
    m.energy_cost[i] = in.price[i] * in.pue[i] * de[i];
    m.carbon[i] = in.carbon_intensity[i] * in.pue[i] * de[i];
    m.water[i] = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * de[i];
  }
  return m;
}

std::vector<double> equity_scale(const FleetSpec& spec, const EquitySpec& equity) {
  std::vector<double> s(spec.n_datacenters, 1.0);
  if (equity.normalize_by_capacity)
    for (int i = 0; i < spec.n_datacenters; ++i) s[i] = 1.0 / spec.capacity[i];
  return s;
}

void check_decision(const FleetSpec& spec, const SlotInput& in, const Decision& x) {
  if (x.rows != spec.n_datacenters || x.cols != spec.n_gateways)
    throw StructuralError("decision has wrong shape");
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x(i, j) < 0.0)
        throw StructuralError("decision(" + std::to_string(i) + "," + std::to_string(j) +
                              ") is negative");
      if (!spec.connectivity.at(i, j) && x(i, j) != 0.0)
        throw StructuralError("decision routes over forbidden pair (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
    }
  for (int j = 0; j < x.cols; ++j) {
    double col = 0.0;
    for (int i = 0; i < x.rows; ++i) col += x(i, j);
    double tol = 1e-9 * std::max(1.0, in.load[j]);
    if (std::abs(col - in.load[j]) > tol)
      throw StructuralError("gateway " + std::to_string(j) + " conservation violated: assigned " +
                            std::to_string(col) + ", demand " + std::to_string(in.load[j]));
  }
  auto load = assigned_load(x);
  for (int i = 0; i < x.rows; ++i)
    if (load[i] > spec.capacity[i] + 1e-9)
      throw StructuralError("data center " + std::to_string(i) + " over capacity: " +
                            std::to_string(load[i]) + " > " + std::to_string(spec.capacity[i]));
}

}  // namespace eglb
