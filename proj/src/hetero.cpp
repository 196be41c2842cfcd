#include "eglb/hetero.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "dual_core.hpp"
#include "eglb/auxstep.hpp"
#include "eglb/dmd.hpp"
#include "eglb/errors.hpp"
#include "eglb/model.hpp"
#include "eglb/transport.hpp"

#include "json.hpp"

namespace eglb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void HeteroModel::validate(const FleetSpec& spec) const {
  const int n = spec.n_datacenters;
  if (n_models <= 0) throw StructuralError("n_models must be positive");
  if (energy_per_load.rows != n || energy_per_load.cols != n_models ||
      resource_per_load.rows != n || resource_per_load.cols != n_models)
    throw StructuralError("model matrices must be N x L");
  if (static_cast<int>(perf_cost_per_load.size()) != n_models)
    throw StructuralError("perf_cost_per_load must have length L");
  if (!(phi >= 0.0)) throw StructuralError("phi must be >= 0");
  for (double v : energy_per_load.data)
    if (!(v >= 0.0)) throw StructuralError("energy_per_load must be >= 0");
  for (double v : resource_per_load.data)
    if (!(v >= 0.0)) throw StructuralError("resource_per_load must be >= 0");
  for (double v : perf_cost_per_load)
    if (!(v >= 0.0)) throw StructuralError("perf_cost_per_load must be >= 0");
}

Mat hetero_operational_cost(const HeteroModel& model, const SlotInput& in,
                            const FleetSpec& spec) {
  Mat cost(spec.n_datacenters, model.n_models, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    for (int l = 0; l < model.n_models; ++l)
      cost(i, l) = in.price[i] * in.pue[i] * model.energy_per_load(i, l) +
                   model.phi * model.perf_cost_per_load[l];
  return cost;
}

Mat hetero_carbon_slope(const HeteroModel& model, const SlotInput& in, const FleetSpec& spec) {
  Mat s(spec.n_datacenters, model.n_models, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    for (int l = 0; l < model.n_models; ++l)
      s(i, l) = in.carbon_intensity[i] * in.pue[i] * model.energy_per_load(i, l);
  return s;
}

Mat hetero_water_slope(const HeteroModel& model, const SlotInput& in, const FleetSpec& spec) {
  Mat s(spec.n_datacenters, model.n_models, 0.0);
  for (int i = 0; i < spec.n_datacenters; ++i)
    for (int l = 0; l < model.n_models; ++l)
      s(i, l) = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * model.energy_per_load(i, l);
  return s;
}

// Parametric solution of  min c.y  s.t.  1.y = l, r.y <= capacity, y >= 0,
// traced as l grows: pure cheapest model while the resource is slack, then
// exchanges toward less resource-hungry models along the boundary. The
// marginals are nondecreasing (the value is convex in l).
CostCurve dc_cost_curve(const std::vector<double>& cost, const std::vector<double>& resource,
                        double capacity) {
  const int L = static_cast<int>(cost.size());
  if (L == 0 || resource.size() != cost.size())
    throw StructuralError("cost curve needs matching cost/resource vectors");
  if (!(capacity > 0.0)) throw StructuralError("cost curve capacity must be > 0");

  auto better_start = [&](int a, int b) {
    if (cost[a] != cost[b]) return cost[a] < cost[b];
    if (resource[a] != resource[b]) return resource[a] < resource[b];
    return a < b;
  };
  int a = 0;
  for (int l = 1; l < L; ++l)
    if (better_start(l, a)) a = l;

  CostCurve curve;
  if (resource[a] == 0.0) {
    curve.segments.push_back({kInf, cost[a], a, -1, 1.0, 0.0});
    curve.max_load = kInf;
    return curve;
  }
  curve.segments.push_back({capacity / resource[a], cost[a], a, -1, 1.0, 0.0});

  while (true) {
    // On the resource boundary with y = pure `a`; look for the cheapest
    // exchange toward a model with a smaller resource slope.
    int b = -1;
    double best_m = 0.0;
    for (int l = 0; l < L; ++l) {
      if (resource[l] >= resource[a]) continue;
      double m = (resource[a] * cost[l] - resource[l] * cost[a]) / (resource[a] - resource[l]);
      if (b == -1 || m < best_m ||
          (m == best_m && (resource[l] < resource[b] ||
                           (resource[l] == resource[b] && l < b)))) {
        b = l;
        best_m = m;
      }
    }
    if (b == -1) {
      curve.max_load = capacity / resource[a];
      return curve;
    }
    double denom = resource[a] - resource[b];
    double rate_b = resource[a] / denom;
    double rate_a = -resource[b] / denom;
    if (resource[b] == 0.0) {
      curve.segments.push_back({kInf, best_m, a, b, rate_a, rate_b});
      curve.max_load = kInf;
      return curve;
    }
    double width = capacity / resource[b] - capacity / resource[a];
    if (width > 0.0) curve.segments.push_back({width, best_m, a, b, rate_a, rate_b});
    a = b;
  }
}

std::vector<double> allocate_models(const CostCurve& curve, int n_models, double l) {
  std::vector<double> y(n_models, 0.0);
  double remaining = l;
  for (const auto& seg : curve.segments) {
    if (remaining <= 0.0) break;
    double take = std::min(remaining, seg.width);
    y[seg.model_a] += seg.rate_a * take;
    if (seg.model_b >= 0) y[seg.model_b] += seg.rate_b * take;
    remaining -= take;
  }
  if (remaining > 1e-9 * std::max(1.0, l))
    throw StructuralError("load exceeds the model catalog's feasible range");
  for (double& v : y) v = std::max(v, 0.0);  // clear -0 and exchange round-off
  return y;
}

HeteroSlotSolution solve_hetero_slot(const Mat& unit_cost, const HeteroModel& model,
                                     const FleetSpec& spec, const SlotInput& in) {
  const int n = spec.n_datacenters;
  const int L = model.n_models;
  if (unit_cost.rows != n || unit_cost.cols != L)
    throw StructuralError("unit cost matrix must be N x L");

  double total_demand = 0.0;
  for (double d : in.load) total_demand += d;

  std::vector<CostCurve> curves(n);
  std::vector<int> seg_dc;       // pseudo-DC -> real DC
  TransportInstance inst;
  inst.mask = BoolMat(0, 0);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<double> cost(L), res(L);
    for (int l = 0; l < L; ++l) {
      cost[l] = unit_cost(i, l);
      res[l] = model.resource_per_load(i, l);
    }
    curves[i] = dc_cost_curve(cost, res, spec.capacity[i]);
    for (const auto& seg : curves[i].segments) {
      double cap = std::isinf(seg.width) ? 2.0 * total_demand + 1.0 : seg.width;
      if (!(cap > 0.0)) continue;
      inst.unit_cost.push_back(seg.marginal);
      inst.capacity.push_back(cap);
      seg_dc.push_back(i);
    }
  }
  inst.demand = in.load;
  inst.mask = BoolMat(static_cast<int>(seg_dc.size()), spec.n_gateways, false);
  for (int s = 0; s < static_cast<int>(seg_dc.size()); ++s)
    for (int j = 0; j < spec.n_gateways; ++j)
      inst.mask.set(s, j, spec.connectivity.at(seg_dc[s], j));

  auto sol = solve(inst);

  HeteroSlotSolution out;
  out.x = Decision(n, spec.n_gateways, 0.0);
  for (int s = 0; s < static_cast<int>(seg_dc.size()); ++s)
    for (int j = 0; j < spec.n_gateways; ++j) out.x(seg_dc[s], j) += sol.x(s, j);

  out.y = Mat(n, L, 0.0);
  auto load = assigned_load(out.x);
  out.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    auto y = allocate_models(curves[i], L, load[i]);
    for (int l = 0; l < L; ++l) {
      out.y(i, l) = y[l];
      out.objective += unit_cost(i, l) * y[l];
    }
  }
  return out;
}

namespace {

// Upper bound on one DC's server energy per slot: models with a positive
// resource slope are limited by the capacity budget, resource-free models by
// the slot's total demand. With a single unit-slope model this reduces to the
// homogeneous full-capacity energy.
double max_energy(const HeteroModel& model, int i, double budget, double total_demand) {
  const int L = model.n_models;
  double bounded = 0.0, free = 0.0;
  for (int l = 0; l < L; ++l) {
    double r = model.resource_per_load(i, l);
    if (r > 0.0)
      bounded = std::max(bounded, model.energy_per_load(i, l) * (budget / r));
    else
      free = std::max(free, model.energy_per_load(i, l) * total_demand);
  }
  return bounded + free;
}

std::vector<std::vector<double>> slot_energies(const FleetSpec& spec, const HeteroModel& model,
                                               const std::vector<Mat>& ys) {
  std::vector<std::vector<double>> energy(ys.size());
  for (size_t t = 0; t < ys.size(); ++t) {
    energy[t].assign(spec.n_datacenters, 0.0);
    for (int i = 0; i < spec.n_datacenters; ++i) {
      double e = 0.0;
      for (int l = 0; l < model.n_models; ++l)
        e += model.energy_per_load(i, l) * ys[t](i, l);
      energy[t][i] = e;
    }
  }
  return energy;
}

double perf_cost(const HeteroModel& model, const std::vector<Mat>& ys) {
  double s = 0.0;
  for (const auto& y : ys)
    for (int i = 0; i < y.rows; ++i)
      for (int l = 0; l < y.cols; ++l) s += model.perf_cost_per_load[l] * y(i, l);
  return model.phi * s;
}

}  // namespace

std::vector<double> hetero_default_zbar_carbon(const Trace& trace, const HeteroModel& model,
                                               const EquitySpec& equity) {
  const int n = trace.fleet.n_datacenters;
  auto scale = equity_scale(trace.fleet, equity);
  std::vector<double> zbar(n, 0.0);
  for (const auto& slot : trace.slots) {
    double total = 0.0;
    for (double d : slot.load) total += d;
    for (int i = 0; i < n; ++i) {
      double full = max_energy(model, i, trace.fleet.capacity[i], total);
      zbar[i] = std::max(zbar[i], slot.carbon_intensity[i] * slot.pue[i] * full * scale[i]);
    }
  }
  return zbar;
}

std::vector<double> hetero_default_zbar_water(const Trace& trace, const HeteroModel& model,
                                              const EquitySpec& equity) {
  const int n = trace.fleet.n_datacenters;
  auto scale = equity_scale(trace.fleet, equity);
  std::vector<double> zbar(n, 0.0);
  for (const auto& slot : trace.slots) {
    double total = 0.0;
    for (double d : slot.load) total += d;
    for (int i = 0; i < n; ++i) {
      double full = max_energy(model, i, trace.fleet.capacity[i], total);
      zbar[i] = std::max(zbar[i], (slot.wue_direct[i] + slot.wue_indirect[i] * slot.pue[i]) *
                                      full * scale[i]);
    }
  }
  return zbar;
}

namespace {

struct HeteroSlots {
  std::vector<Decision> x;
  std::vector<Mat> y;
};

// Footprint factors per DC for one slot, in dual-system units per MWh.
struct FootprintFactors {
  std::vector<double> carbon, water;
};

FootprintFactors footprint_factors(const FleetSpec& spec, const SlotInput& in,
                                   const std::vector<double>& scale) {
  FootprintFactors f;
  f.carbon.resize(spec.n_datacenters);
  f.water.resize(spec.n_datacenters);
  for (int i = 0; i < spec.n_datacenters; ++i) {
    f.carbon[i] = in.carbon_intensity[i] * in.pue[i] * scale[i];
    f.water[i] = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * scale[i];
  }
  return f;
}

}  // namespace

HeteroRunResult run_hetero(const Trace& trace, const HeteroModel& model,
                           const HeteroRunConfig& config, HeteroAlgorithm algorithm) {
  const FleetSpec& spec = trace.fleet;
  spec.validate();
  model.validate(spec);
  const EquitySpec& equity = config.base.equity;
  equity.validate(spec.n_datacenters);
  const int n = spec.n_datacenters;
  const int L = model.n_models;
  const int t_len = trace.horizon();
  auto scale = equity_scale(spec, equity);

  HeteroRunResult result;

  auto finalize = [&](HeteroSlots&& slots) {
    result.decisions = std::move(slots.x);
    result.model_assignment = std::move(slots.y);
    auto energy = slot_energies(spec, model, result.model_assignment);
    result.report = report_from_energy(energy, trace, equity);
  };

  switch (algorithm) {
    case HeteroAlgorithm::Energy:
    case HeteroAlgorithm::Carbon:
    case HeteroAlgorithm::Water:
    case HeteroAlgorithm::Weighted: {
      HeteroSlots slots;
      for (const auto& in : trace.slots) {
        Mat cost(n, L, 0.0);
        if (algorithm == HeteroAlgorithm::Energy) {
          cost = hetero_operational_cost(model, in, spec);
        } else if (algorithm == HeteroAlgorithm::Carbon) {
          cost = hetero_carbon_slope(model, in, spec);
        } else if (algorithm == HeteroAlgorithm::Water) {
          cost = hetero_water_slope(model, in, spec);
        } else {
          Mat op = hetero_operational_cost(model, in, spec);
          Mat cs = hetero_carbon_slope(model, in, spec);
          Mat ws = hetero_water_slope(model, in, spec);
          for (size_t q = 0; q < cost.data.size(); ++q)
            cost.data[q] = config.w_energy * op.data[q] + config.w_carbon * cs.data[q] +
                           config.w_water * ws.data[q];
        }
        auto sol = solve_hetero_slot(cost, model, spec, in);
        slots.x.push_back(std::move(sol.x));
        slots.y.push_back(std::move(sol.y));
      }
      finalize(std::move(slots));
      break;
    }

    case HeteroAlgorithm::Nearest: {
      HeteroSlots slots;
      for (const auto& in : trace.slots) {
        Decision x(n, spec.n_gateways, 0.0);
        for (int j = 0; j < spec.n_gateways; ++j) x(spec.nearest_map[j], j) = in.load[j];
        auto load = assigned_load(x);
        Mat op = hetero_operational_cost(model, in, spec);
        Mat y(n, L, 0.0);
        for (int i = 0; i < n; ++i) {
          std::vector<double> cost(L), res(L);
          for (int l = 0; l < L; ++l) {
            cost[l] = op(i, l);
            res[l] = model.resource_per_load(i, l);
          }
          auto curve = dc_cost_curve(cost, res, spec.capacity[i]);
          if (load[i] > curve.max_load + 1e-9)
            throw InfeasibleError("slot " + std::to_string(in.t) +
                                      ": nearest routing overloads dc " + std::to_string(i),
                                  {});
          auto yi = allocate_models(curve, L, load[i]);
          for (int l = 0; l < L; ++l) y(i, l) = yi[l];
        }
        slots.x.push_back(std::move(x));
        slots.y.push_back(std::move(y));
      }
      finalize(std::move(slots));
      break;
    }

    case HeteroAlgorithm::Eglb: {
      std::vector<double> zbar_c = config.base.zbar_carbon.empty()
                                       ? hetero_default_zbar_carbon(trace, model, equity)
                                       : config.base.zbar_carbon;
      std::vector<double> zbar_w = config.base.zbar_water.empty()
                                       ? hetero_default_zbar_water(trace, model, equity)
                                       : config.base.zbar_water;
      DualState dual;
      dual.eta = config.base.eta;
      dual.kappa = config.base.kappa_init.empty() ? std::vector<double>(2 * n, 0.0)
                                                  : config.base.kappa_init;
      AuxBlock cblock{equity.mu_carbon, equity.theta_carbon, {}, zbar_c, {}};
      AuxBlock wblock{equity.mu_water, equity.theta_water, {}, zbar_w, {}};

      HeteroSlots slots;
      result.dual_trajectory.push_back(dual.kappa);
      for (const auto& in : trace.slots) {
        // Mirrors the homogeneous per-slot cost: operational slope plus
        // multiplier-weighted footprint slopes.
        Mat cost = hetero_operational_cost(model, in, spec);
        Mat cs = hetero_carbon_slope(model, in, spec);
        Mat ws = hetero_water_slope(model, in, spec);
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < L; ++l)
            cost(i, l) = cost(i, l) + dual.kappa[i] * cs(i, l) * scale[i] +
                         dual.kappa[n + i] * ws(i, l) * scale[i];
        auto sol = solve_hetero_slot(cost, model, spec, in);

        cblock.kappa.assign(dual.kappa.begin(), dual.kappa.begin() + n);
        wblock.kappa.assign(dual.kappa.begin() + n, dual.kappa.end());
        auto aux = minimize_aux(cblock, wblock);

        std::vector<double> carbon(n, 0.0), water(n, 0.0);
        for (int i = 0; i < n; ++i) {
          double e = 0.0;
          for (int l = 0; l < L; ++l) e += model.energy_per_load(i, l) * sol.y(i, l);
          carbon[i] = in.carbon_intensity[i] * in.pue[i] * e;
          water[i] = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * e;
          carbon[i] *= scale[i];
          water[i] *= scale[i];
        }
        dual = update(dual, subgradient(aux.z_carbon, aux.z_water, carbon, water));
        result.dual_trajectory.push_back(dual.kappa);
        slots.x.push_back(std::move(sol.x));
        slots.y.push_back(std::move(sol.y));
      }
      finalize(std::move(slots));
      break;
    }

    case HeteroAlgorithm::EglbOffline: {
      bool no_equity = true;
      for (int i = 0; i < n; ++i)
        no_equity = no_equity && equity.mu_carbon * equity.theta_carbon[i] == 0.0 &&
                    equity.mu_water * equity.theta_water[i] == 0.0;
      if (no_equity) {
        // Decomposes per slot into the operational-cost minimizer.
        HeteroRunConfig energy_cfg = config;
        auto sub = run_hetero(trace, model, energy_cfg, HeteroAlgorithm::Energy);
        sub.offline_gap = 0.0;
        sub.offline_dual = sub.operational_objective;
        return sub;
      }
      std::vector<double> zbar_c = hetero_default_zbar_carbon(trace, model, equity);
      std::vector<double> zbar_w = hetero_default_zbar_water(trace, model, equity);

      std::vector<FootprintFactors> factors(t_len);
      std::vector<Mat> op_cost(t_len);
      for (int t = 0; t < t_len; ++t) {
        factors[t] = footprint_factors(spec, trace.slots[t], scale);
        op_cost[t] = hetero_operational_cost(model, trace.slots[t], spec);
      }

      auto solve_slots = [&](const std::vector<double>& kap, auto&& per_slot) {
        for (int t = 0; t < t_len; ++t) {
          Mat cost = op_cost[t];
          for (int i = 0; i < n; ++i) {
            double pen =
                (kap[i] * factors[t].carbon[i] + kap[n + i] * factors[t].water[i]) / t_len;
            for (int l = 0; l < L; ++l)
              cost(i, l) = cost(i, l) / t_len + pen * model.energy_per_load(i, l);
          }
          per_slot(t, solve_hetero_slot(cost, model, spec, trace.slots[t]));
        }
      };

      HeteroSlots blended;
      blended.x.assign(t_len, Decision(n, spec.n_gateways, 0.0));
      blended.y.assign(t_len, Mat(n, L, 0.0));

      detail::DualProblem dp;
      dp.n = n;
      dp.slots = t_len;
      dp.e_scale = 1.0 / t_len;
      dp.theta_eff_c.resize(n);
      dp.theta_eff_w.resize(n);
      for (int i = 0; i < n; ++i) {
        dp.theta_eff_c[i] = equity.mu_carbon * equity.theta_carbon[i] / t_len;
        dp.theta_eff_w[i] = equity.mu_water * equity.theta_water[i] / t_len;
      }
      dp.offset_c.assign(n, 0.0);
      dp.offset_w.assign(n, 0.0);
      dp.zbar_c = zbar_c;
      dp.zbar_w = zbar_w;
      dp.evaluate = [&](const std::vector<double>& kap) {
        detail::OracleEval ev;
        ev.sum_fc.assign(n, 0.0);
        ev.sum_fw.assign(n, 0.0);
        solve_slots(kap, [&](int t, HeteroSlotSolution&& sol) {
          for (int i = 0; i < n; ++i) {
            double e = 0.0;
            for (int l = 0; l < L; ++l) {
              e += model.energy_per_load(i, l) * sol.y(i, l);
              ev.energy_sum += op_cost[t](i, l) * sol.y(i, l);
            }
            ev.sum_fc[i] += factors[t].carbon[i] * e;
            ev.sum_fw[i] += factors[t].water[i] * e;
          }
        });
        return ev;
      };
      dp.accumulate = [&](const std::vector<double>& kap, double weight) {
        solve_slots(kap, [&](int t, HeteroSlotSolution&& sol) {
          for (size_t q = 0; q < sol.x.data.size(); ++q)
            blended.x[t].data[q] += weight * sol.x.data[q];
          for (size_t q = 0; q < sol.y.data.size(); ++q)
            blended.y[t].data[q] += weight * sol.y.data[q];
        });
      };

      detail::DualOptions dopt;
      dopt.tol = config.offline.tol;
      dopt.max_iters = config.offline.max_iters;
      auto dr = detail::maximize_dual(dp, dopt);

      // Rescale gateway columns to exact demand after blending.
      for (int t = 0; t < t_len; ++t) {
        const auto& demand = trace.slots[t].load;
        for (int j = 0; j < spec.n_gateways; ++j) {
          double col = 0.0;
          for (int i = 0; i < n; ++i) col += blended.x[t](i, j);
          if (col > 0.0) {
            double f = demand[j] / col;
            for (int i = 0; i < n; ++i) blended.x[t](i, j) *= f;
          }
        }
      }
      result.offline_gap = dr.gap;
      result.offline_dual = dr.dual;
      result.offline_iterations = dr.iterations;
      finalize(std::move(blended));
      break;
    }
  }

  result.perf_cost_total = perf_cost(model, result.model_assignment);
  result.operational_objective =
      result.report.objective + result.perf_cost_total / static_cast<double>(t_len);
  return result;
}

HeteroModel hetero_model_from_json_file(const std::string& path, int n_datacenters) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open model file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    HeteroModel m;
    m.n_models = j.at("n_models").get<int>();
    m.phi = j.value("phi", 0.0);
    m.perf_cost_per_load = j.at("perf_cost_per_load").get<std::vector<double>>();
    auto fill = [&](const nlohmann::json& node, const char* name) {
      Mat out(n_datacenters, m.n_models, 0.0);
      if (node.is_array() && !node.empty() && node[0].is_array()) {
        auto rows = node.get<std::vector<std::vector<double>>>();
        if (static_cast<int>(rows.size()) != n_datacenters)
          throw ParseError(path + ": " + name + " must have N rows");
        for (int i = 0; i < n_datacenters; ++i) {
          if (static_cast<int>(rows[i].size()) != m.n_models)
            throw ParseError(path + ": " + name + " rows must have L entries");
          for (int l = 0; l < m.n_models; ++l) out(i, l) = rows[i][l];
        }
      } else if (node.is_array()) {
        // One row shared by every data center.
        auto row = node.get<std::vector<double>>();
        if (static_cast<int>(row.size()) != m.n_models)
          throw ParseError(path + ": " + name + " must have L entries");
        for (int i = 0; i < n_datacenters; ++i)
          for (int l = 0; l < m.n_models; ++l) out(i, l) = row[l];
      } else {
        throw ParseError(path + ": " + name + " must be an array");
      }
      return out;
    };
    m.energy_per_load = fill(j.at("energy_per_load"), "energy_per_load");
    m.resource_per_load = fill(j.at("resource_per_load"), "resource_per_load");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace eglb
