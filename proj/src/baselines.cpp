#include "eglb/baselines.hpp"

#include <string>

#include "eglb/errors.hpp"
#include "eglb/model.hpp"
#include "eglb/transport.hpp"

namespace eglb {

namespace {

EquitySpec zero_equity(int n) {
  EquitySpec eq;
  eq.theta_carbon.assign(n, 1.0);
  eq.theta_water.assign(n, 1.0);
  return eq;  // mu = 0: reports carry plain footprints, objective = avg energy cost
}

RunResult run_per_slot(const Trace& trace, double w_energy, double w_carbon, double w_water) {
  const FleetSpec& spec = trace.fleet;
  spec.validate();
  RunResult result;
  TransportInstance inst;
  inst.capacity = spec.capacity;
  inst.mask = spec.connectivity;
  for (const auto& in : trace.slots) {
    auto m = marginal_coefficients(spec, in);
    inst.unit_cost.resize(spec.n_datacenters);
    for (int i = 0; i < spec.n_datacenters; ++i)
      inst.unit_cost[i] = w_energy * m.energy_cost[i] + w_carbon * m.carbon[i] +
                          w_water * m.water[i];
    inst.demand = in.load;
    try {
      result.schedule.decisions.push_back(solve(inst).x);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("slot " + std::to_string(in.t) + ": " + e.what(), e.gateways());
    }
  }
  result.report = report(result.schedule.decisions, trace, zero_equity(spec.n_datacenters));
  return result;
}

}  // namespace

RunResult run_energy(const Trace& trace) { return run_per_slot(trace, 1.0, 0.0, 0.0); }
RunResult run_carbon(const Trace& trace) { return run_per_slot(trace, 0.0, 1.0, 0.0); }
RunResult run_water(const Trace& trace) { return run_per_slot(trace, 0.0, 0.0, 1.0); }

RunResult run_weighted(const Trace& trace, double w_energy, double w_carbon, double w_water) {
  return run_per_slot(trace, w_energy, w_carbon, w_water);
}

RunResult run_nearest(const Trace& trace) {
  const FleetSpec& spec = trace.fleet;
  spec.validate();
  RunResult result;
  for (const auto& in : trace.slots) {
    Decision x(spec.n_datacenters, spec.n_gateways, 0.0);
    for (int j = 0; j < spec.n_gateways; ++j) x(spec.nearest_map[j], j) = in.load[j];
    auto load = assigned_load(x);
    for (int i = 0; i < spec.n_datacenters; ++i)
      if (load[i] > spec.capacity[i] + 1e-9)
        throw InfeasibleError("slot " + std::to_string(in.t) + ": nearest routing overloads dc " +
                                  std::to_string(i) + " (" + std::to_string(load[i]) + " > " +
                                  std::to_string(spec.capacity[i]) + " MW)",
                              {});
    result.schedule.decisions.push_back(std::move(x));
  }
  result.report = report(result.schedule.decisions, trace, zero_equity(spec.n_datacenters));
  return result;
}

}  // namespace eglb
