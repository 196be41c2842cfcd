#include "eglb/offline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "dual_core.hpp"
#include "eglb/auxstep.hpp"
#include "eglb/errors.hpp"
#include "eglb/model.hpp"
#include "eglb/transport.hpp"

namespace eglb {

namespace {

// Window subproblem over slots [w0, w0 + W):
//   min_x  e_scale * sum_t g_t(x_t)
//          + max_i[theta_eff_c_i * sumF_c_i + offset_c_i]
//          + max_i[theta_eff_w_i * sumF_w_i + offset_w_i]
// where sumF are footprint sums in dual-system units (capacity-normalized
// when the equity spec says so). theta_eff folds mu * theta / T_norm; offsets
// fold footprints carried in from slots before the window.
struct CoreProblem {
  const Trace* trace = nullptr;
  int w0 = 0;
  int W = 0;
  double e_scale = 1.0;
  std::vector<double> theta_eff_c, theta_eff_w;
  std::vector<double> offset_c, offset_w;
  std::vector<double> zbar_c, zbar_w;
  std::vector<double> scale;
};

struct SlotCoeffs {
  std::vector<double> sg, sc, sw;  // cost slope / scaled footprint slopes per DC
  double g0 = 0.0;                 // load-independent energy cost
  std::vector<double> fc0, fw0;    // load-independent scaled footprints
};

struct CoreResult {
  std::vector<Decision> decisions;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> kappa;
};

void parallel_slots(int count, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || count < 64) {
    for (int t = 0; t < count; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (count + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    int lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int t = lo; t < hi; ++t) fn(t);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<SlotCoeffs> precompute(const CoreProblem& p) {
  const FleetSpec& spec = p.trace->fleet;
  const int n = spec.n_datacenters;
  auto intercept = energy_intercept(spec);
  std::vector<SlotCoeffs> out(p.W);
  for (int k = 0; k < p.W; ++k) {
    const SlotInput& in = p.trace->slots[p.w0 + k];
    auto m = marginal_coefficients(spec, in);
    SlotCoeffs c;
    c.sg = std::move(m.energy_cost);
    c.sc.resize(n);
    c.sw.resize(n);
    c.fc0.resize(n);
    c.fw0.resize(n);
    for (int i = 0; i < n; ++i) {
      c.sc[i] = m.carbon[i] * p.scale[i];
      c.sw[i] = m.water[i] * p.scale[i];
      c.g0 += in.price[i] * in.pue[i] * intercept[i];
      c.fc0[i] = in.carbon_intensity[i] * in.pue[i] * intercept[i] * p.scale[i];
      c.fw0[i] = (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * intercept[i] * p.scale[i];
    }
    out[k] = std::move(c);
  }
  return out;
}

double primal_value(const CoreProblem& p, const std::vector<SlotCoeffs>& coeffs,
                    const std::vector<std::vector<double>>& loads) {
  const int n = p.trace->fleet.n_datacenters;
  double energy = 0.0;
  std::vector<double> sum_fc(n, 0.0), sum_fw(n, 0.0);
  for (int k = 0; k < p.W; ++k) {
    const auto& c = coeffs[k];
    double g = c.g0;
    for (int i = 0; i < n; ++i) {
      g += c.sg[i] * loads[k][i];
      sum_fc[i] += c.fc0[i] + c.sc[i] * loads[k][i];
      sum_fw[i] += c.fw0[i] + c.sw[i] * loads[k][i];
    }
    energy += g;
  }
  double hc = 0.0, hw = 0.0;
  for (int i = 0; i < n; ++i) {
    hc = std::max(hc, p.theta_eff_c[i] * sum_fc[i] + p.offset_c[i]);
    hw = std::max(hw, p.theta_eff_w[i] * sum_fw[i] + p.offset_w[i]);
  }
  return p.e_scale * energy + hc + hw;
}

// Per-slot energy-only optimum. The mu = 0 shortcut uses the raw cost slopes,
// so its decisions are bit-identical to the energy baseline's.
std::vector<Decision> energy_only_decisions(const CoreProblem& p,
                                            const std::vector<SlotCoeffs>& coeffs) {
  const FleetSpec& spec = p.trace->fleet;
  std::vector<Decision> out(p.W);
  TransportInstance inst;
  inst.capacity = spec.capacity;
  inst.mask = spec.connectivity;
  for (int k = 0; k < p.W; ++k) {
    inst.unit_cost = coeffs[k].sg;
    inst.demand = p.trace->slots[p.w0 + k].load;
    out[k] = solve(inst).x;
  }
  return out;
}

std::vector<std::vector<double>> per_slot_loads(const std::vector<Decision>& xs) {
  std::vector<std::vector<double>> loads(xs.size());
  for (size_t k = 0; k < xs.size(); ++k) loads[k] = assigned_load(xs[k]);
  return loads;
}

CoreResult solve_core(const CoreProblem& p, const OfflineOptions& opt,
                      std::vector<double> kappa0) {
  const FleetSpec& spec = p.trace->fleet;
  const int n = spec.n_datacenters;
  const int W = p.W;
  auto coeffs = precompute(p);

  bool no_carbon = true, no_water = true;
  for (int i = 0; i < n; ++i) {
    no_carbon = no_carbon && p.theta_eff_c[i] == 0.0;
    no_water = no_water && p.theta_eff_w[i] == 0.0;
  }
  if (no_carbon && no_water) {
    // Equity terms are constant: the problem decomposes per slot.
    CoreResult r;
    r.decisions = energy_only_decisions(p, coeffs);
    r.primal = primal_value(p, coeffs, per_slot_loads(r.decisions));
    r.dual = r.primal;
    r.converged = true;
    r.kappa.assign(2 * n, 0.0);
    return r;
  }

  int threads =
      opt.threads > 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, 8);

  auto solve_slots = [&](const std::vector<double>& kappa, auto&& per_slot) {
    parallel_slots(W, threads, [&](int k) {
      const auto& c = coeffs[k];
      TransportInstance inst;
      inst.capacity = spec.capacity;
      inst.mask = spec.connectivity;
      inst.demand = p.trace->slots[p.w0 + k].load;
      inst.unit_cost.resize(n);
      double inv_w = 1.0 / W;
      for (int i = 0; i < n; ++i)
        inst.unit_cost[i] =
            p.e_scale * c.sg[i] + inv_w * (kappa[i] * c.sc[i] + kappa[n + i] * c.sw[i]);
      per_slot(k, solve(inst).x);
    });
  };

  std::vector<Decision> blended(W, Decision(n, spec.n_gateways, 0.0));

  detail::DualProblem dp;
  dp.n = n;
  dp.slots = W;
  dp.e_scale = p.e_scale;
  dp.theta_eff_c = p.theta_eff_c;
  dp.theta_eff_w = p.theta_eff_w;
  dp.offset_c = p.offset_c;
  dp.offset_w = p.offset_w;
  dp.zbar_c = p.zbar_c;
  dp.zbar_w = p.zbar_w;
  dp.evaluate = [&](const std::vector<double>& kappa) {
    detail::OracleEval ev;
    ev.sum_fc.assign(n, 0.0);
    ev.sum_fw.assign(n, 0.0);
    std::vector<double> slot_g(W, 0.0);
    std::vector<std::vector<double>> slot_load(W);
    solve_slots(kappa, [&](int k, Decision&& x) {
      slot_load[k] = assigned_load(x);
      const auto& c = coeffs[k];
      double g = c.g0;
      for (int i = 0; i < n; ++i) g += c.sg[i] * slot_load[k][i];
      slot_g[k] = g;
    });
    for (int k = 0; k < W; ++k) {
      ev.energy_sum += slot_g[k];
      const auto& c = coeffs[k];
      for (int i = 0; i < n; ++i) {
        ev.sum_fc[i] += c.fc0[i] + c.sc[i] * slot_load[k][i];
        ev.sum_fw[i] += c.fw0[i] + c.sw[i] * slot_load[k][i];
      }
    }
    return ev;
  };
  dp.accumulate = [&](const std::vector<double>& kappa, double weight) {
    solve_slots(kappa, [&](int k, Decision&& x) {
      auto& acc = blended[k].data;
      for (size_t q = 0; q < acc.size(); ++q) acc[q] += weight * x.data[q];
    });
  };

  detail::DualOptions dopt;
  dopt.tol = opt.tol;
  dopt.max_iters = opt.max_iters;
  dopt.kappa_init = std::move(kappa0);
  auto dr = detail::maximize_dual(dp, dopt);

  // Rescale gateway columns to exact demand; blending keeps the polytope,
  // this only removes accumulated float drift.
  for (int k = 0; k < W; ++k) {
    const auto& demand = p.trace->slots[p.w0 + k].load;
    for (int j = 0; j < spec.n_gateways; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) col += blended[k](i, j);
      if (col > 0.0) {
        double f = demand[j] / col;
        for (int i = 0; i < n; ++i) blended[k](i, j) *= f;
      }
    }
  }

  CoreResult result;
  result.decisions = std::move(blended);
  result.primal = primal_value(p, coeffs, per_slot_loads(result.decisions));
  result.dual = dr.dual;
  result.gap = std::max(result.primal - result.dual, 0.0);
  result.iterations = dr.iterations;
  result.kappa = std::move(dr.kappa);
  result.converged =
      dr.converged && result.gap <= opt.tol * std::max(1.0, std::abs(result.primal)) * 1.5;
  if (!result.converged)
    result.converged = result.gap <= opt.tol * std::max(1.0, std::abs(result.primal));
  return result;
}

CoreProblem make_problem(const Trace& trace, const EquitySpec& equity, int w0, int W,
                         const std::vector<double>& carried_c,
                         const std::vector<double>& carried_w, int norm_slots) {
  const int n = trace.fleet.n_datacenters;
  CoreProblem p;
  p.trace = &trace;
  p.w0 = w0;
  p.W = W;
  p.e_scale = 1.0 / norm_slots;
  p.scale = equity_scale(trace.fleet, equity);
  p.theta_eff_c.resize(n);
  p.theta_eff_w.resize(n);
  p.offset_c.resize(n);
  p.offset_w.resize(n);
  for (int i = 0; i < n; ++i) {
    p.theta_eff_c[i] = equity.mu_carbon * equity.theta_carbon[i] / norm_slots;
    p.theta_eff_w[i] = equity.mu_water * equity.theta_water[i] / norm_slots;
    p.offset_c[i] = p.theta_eff_c[i] * p.scale[i] * carried_c[i];
    p.offset_w[i] = p.theta_eff_w[i] * p.scale[i] * carried_w[i];
  }
  p.zbar_c = default_zbar_carbon(trace, equity);
  p.zbar_w = default_zbar_water(trace, equity);
  return p;
}

}  // namespace

OfflineSolution solve_offline(const Trace& trace, const EquitySpec& equity,
                              const OfflineOptions& options) {
  trace.fleet.validate();
  equity.validate(trace.fleet.n_datacenters);
  if (trace.horizon() == 0) throw StructuralError("cannot solve an empty trace");
  std::vector<double> zero(trace.fleet.n_datacenters, 0.0);
  CoreProblem p = make_problem(trace, equity, 0, trace.horizon(), zero, zero, trace.horizon());
  auto r = solve_core(p, options, {});
  OfflineSolution sol;
  sol.decisions = std::move(r.decisions);
  sol.objective = r.primal;
  sol.dual_bound = r.dual;
  sol.gap_estimate = r.gap;
  sol.iterations = r.iterations;
  sol.converged = r.converged;
  sol.kappa = std::move(r.kappa);
  return sol;
}

std::vector<Decision> solve_window(const Trace& trace, int window_start, int window_len,
                                   const EquitySpec& equity,
                                   const std::vector<double>& carried_carbon,
                                   const std::vector<double>& carried_water, int elapsed_slots,
                                   const OfflineOptions& options) {
  if (window_len < 1) throw ConfigError("window length must be >= 1");
  if (window_start < 0 || window_start + window_len > trace.horizon())
    throw ConfigError("window exceeds the trace horizon");
  CoreProblem p = make_problem(trace, equity, window_start, window_len, carried_carbon,
                               carried_water, elapsed_slots + window_len);
  return solve_core(p, options, {}).decisions;
}

RunResult run_mpc(const Trace& trace, const EquitySpec& equity, int window,
                  const OfflineOptions& options) {
  trace.fleet.validate();
  equity.validate(trace.fleet.n_datacenters);
  if (window < 1) throw ConfigError("window must be >= 1");
  const int t_len = trace.horizon();
  const int n = trace.fleet.n_datacenters;

  RunResult result;
  if (window >= t_len) {
    // Full foresight: the window problem is the offline problem.
    auto sol = solve_offline(trace, equity, options);
    result.schedule.decisions = std::move(sol.decisions);
    result.report = report(result.schedule.decisions, trace, equity);
    return result;
  }

  std::vector<double> carried_c(n, 0.0), carried_w(n, 0.0);
  std::vector<double> kappa;  // warm start across windows
  for (int t = 0; t < t_len; ++t) {
    int w = std::min(window, t_len - t);
    CoreProblem p = make_problem(trace, equity, t, w, carried_c, carried_w, t + w);
    auto r = solve_core(p, options, kappa);
    kappa = r.kappa;
    Decision x = std::move(r.decisions[0]);
    auto carbon = carbon_footprint(trace.fleet, trace.slots[t], x);
    auto water = water_footprint(trace.fleet, trace.slots[t], x);
    for (int i = 0; i < n; ++i) {
      carried_c[i] += carbon[i];
      carried_w[i] += water[i];
    }
    result.schedule.decisions.push_back(std::move(x));
  }
  result.report = report(result.schedule.decisions, trace, equity);
  return result;
}

}  // namespace eglb
