#include "eglb/eglb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eglb/auxstep.hpp"
#include "eglb/dmd.hpp"
#include "eglb/errors.hpp"
#include "eglb/model.hpp"
#include "eglb/transport.hpp"

namespace eglb {

std::vector<double> primal_cost_vector(const SlotInput& in, const std::vector<double>& kappa,
                                       const FleetSpec& spec, const EquitySpec& equity) {
  const int n = spec.n_datacenters;
  if (static_cast<int>(kappa.size()) != 2 * n)
    throw StructuralError("kappa must have length 2N");
  auto m = marginal_coefficients(spec, in);
  auto scale = equity_scale(spec, equity);
  std::vector<double> cost(n);
  for (int i = 0; i < n; ++i)
    cost[i] = m.energy_cost[i] + kappa[i] * m.carbon[i] * scale[i] +
              kappa[n + i] * m.water[i] * scale[i];
  return cost;
}

std::vector<double> default_zbar_carbon(const Trace& trace, const EquitySpec& equity) {
  const int n = trace.fleet.n_datacenters;
  auto full = energy_at_full(trace.fleet);
  auto scale = equity_scale(trace.fleet, equity);
  std::vector<double> zbar(n, 0.0);
  for (const auto& slot : trace.slots)
    for (int i = 0; i < n; ++i)
      zbar[i] = std::max(zbar[i], slot.carbon_intensity[i] * slot.pue[i] * full[i] * scale[i]);
  return zbar;
}

std::vector<double> default_zbar_water(const Trace& trace, const EquitySpec& equity) {
  const int n = trace.fleet.n_datacenters;
  auto full = energy_at_full(trace.fleet);
  auto scale = equity_scale(trace.fleet, equity);
  std::vector<double> zbar(n, 0.0);
  for (const auto& slot : trace.slots)
    for (int i = 0; i < n; ++i)
      zbar[i] = std::max(zbar[i], (slot.wue_direct[i] + slot.wue_indirect[i] * slot.pue[i]) *
                                      full[i] * scale[i]);
  return zbar;
}

RunResult run(const Trace& trace, const RunConfig& config) {
  const FleetSpec& spec = trace.fleet;
  const int n = spec.n_datacenters;
  const int t_len = trace.horizon();
  spec.validate();
  config.equity.validate(n);
  if (!(config.eta > 0.0)) throw ConfigError("eta must be > 0");

  RunResult result;

  std::vector<double> zbar_c =
      config.zbar_carbon.empty() ? default_zbar_carbon(trace, config.equity) : config.zbar_carbon;
  std::vector<double> zbar_w =
      config.zbar_water.empty() ? default_zbar_water(trace, config.equity) : config.zbar_water;
  if (static_cast<int>(zbar_c.size()) != n || static_cast<int>(zbar_w.size()) != n)
    throw ConfigError("zbar vectors must have length N");

  DualState dual;
  dual.eta = config.eta;
  dual.kappa = config.kappa_init.empty() ? std::vector<double>(2 * n, 0.0) : config.kappa_init;
  if (static_cast<int>(dual.kappa.size()) != 2 * n)
    throw ConfigError("kappa_init must have length 2N");
  for (double k : dual.kappa)
    if (!(k >= 0.0)) throw ConfigError("kappa_init must be componentwise >= 0");

  bool no_equity_weight = config.equity.mu_carbon == 0.0 && config.equity.mu_water == 0.0;
  bool zbar_zero = std::all_of(zbar_c.begin(), zbar_c.end(), [](double v) { return v == 0.0; }) &&
                   std::all_of(zbar_w.begin(), zbar_w.end(), [](double v) { return v == 0.0; });
  if (no_equity_weight && zbar_zero && !config.freeze_dual)
    result.warnings.push_back(
        "mu and zbar are all zero: the subgradient is -[footprints], so the multipliers only "
        "grow; the run degenerates to an ever-harder footprint penalty");

  auto scale = equity_scale(spec, config.equity);

  Schedule& sched = result.schedule;
  sched.decisions.reserve(t_len);
  sched.aux_trajectory.reserve(t_len);
  sched.dual_trajectory.reserve(t_len + 1);
  sched.dual_trajectory.push_back(dual.kappa);

  TransportInstance inst;
  inst.capacity = spec.capacity;
  inst.mask = spec.connectivity;

  AuxBlock carbon_block{config.equity.mu_carbon, config.equity.theta_carbon, {}, zbar_c, {}};
  AuxBlock water_block{config.equity.mu_water, config.equity.theta_water, {}, zbar_w, {}};

  for (int t = 0; t < t_len; ++t) {
    const SlotInput& in = trace.slots[t];
    inst.unit_cost = primal_cost_vector(in, dual.kappa, spec, config.equity);
    inst.demand = in.load;
    TransportSolution sol;
    try {
      sol = solve(inst);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError("slot " + std::to_string(t) + ": " + e.what(), e.gateways());
    }

    carbon_block.kappa.assign(dual.kappa.begin(), dual.kappa.begin() + n);
    water_block.kappa.assign(dual.kappa.begin() + n, dual.kappa.end());
    auto aux = minimize_aux(carbon_block, water_block);

    auto carbon = carbon_footprint(spec, in, sol.x);
    auto water = water_footprint(spec, in, sol.x);
    for (int i = 0; i < n; ++i) {
      carbon[i] *= scale[i];
      water[i] *= scale[i];
    }
    auto d = subgradient(aux.z_carbon, aux.z_water, carbon, water);
    if (!config.freeze_dual) dual = update(dual, d);

    sched.decisions.push_back(std::move(sol.x));
    sched.aux_trajectory.emplace_back(std::move(aux.z_carbon), std::move(aux.z_water));
    sched.dual_trajectory.push_back(dual.kappa);
  }

  result.report = report(sched.decisions, trace, config.equity);
  return result;
}

}  // namespace eglb
