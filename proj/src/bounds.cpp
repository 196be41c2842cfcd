#include "eglb/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "eglb/errors.hpp"
#include "eglb/model.hpp"

namespace eglb {

BoundConstants constants(const Trace& trace, const EquitySpec& equity,
                         const std::vector<double>& zbar_carbon,
                         const std::vector<double>& zbar_water) {
  const int n = trace.fleet.n_datacenters;
  equity.validate(n);
  if (static_cast<int>(zbar_carbon.size()) != n || static_cast<int>(zbar_water.size()) != n)
    throw StructuralError("zbar vectors must have length N");

  BoundConstants k;
  double max_zc = 0.0, max_zw = 0.0;
  for (int i = 0; i < n; ++i) {
    max_zc = std::max(max_zc, zbar_carbon[i]);
    max_zw = std::max(max_zw, zbar_water[i]);
    k.M = std::max(k.M, trace.fleet.capacity[i]);
    k.theta_m = std::max({k.theta_m, equity.theta_carbon[i], equity.theta_water[i]});
  }
  k.B = 0.5 * n * max_zc * max_zc + 0.5 * n * max_zw * max_zw;

  auto scale = equity_scale(trace.fleet, equity);
  for (const auto& slot : trace.slots) {
    auto m = marginal_coefficients(trace.fleet, slot);
    for (int i = 0; i < n; ++i) {
      k.c_m = std::max(k.c_m, m.carbon[i] * scale[i]);
      k.w_m = std::max(k.w_m, m.water[i] * scale[i]);
    }
  }
  k.C = k.theta_m * (equity.mu_carbon + equity.mu_water);
  k.D = k.theta_m * (equity.mu_carbon * k.c_m + equity.mu_water * k.w_m);
  return k;
}

BoundCheck check_cost_bound(double online_cost, double offline_cost, const BoundConstants& k,
                          double eta, int T) {
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  if (T <= 0) throw ConfigError("T must be positive");
  BoundCheck c;
  c.value = online_cost;
  c.bound = offline_cost + eta * k.B * T +
            k.C * std::sqrt(2.0 / T * (k.B + k.M / eta * k.D));
  c.slack = c.bound - c.value;
  c.pass = c.slack >= 0.0;
  return c;
}

BoundCheck check_dual_norm(const std::vector<double>& kappa_final, const BoundConstants& k,
                           double eta, int T) {
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  if (T < 0) throw ConfigError("T must be >= 0");
  BoundCheck c;
  double norm2 = 0.0;
  for (double v : kappa_final) norm2 += v * v;
  c.value = std::sqrt(norm2);
  c.bound = eta * std::sqrt(2.0 * T * (k.B + k.M / eta * k.D));
  c.slack = c.bound - c.value;
  c.pass = c.slack >= 0.0;
  return c;
}

BoundCheck check_dual_norm(const Schedule& schedule, const BoundConstants& k, double eta, int T) {
  if (schedule.dual_trajectory.empty())
    throw StructuralError("schedule has no dual trajectory");
  return check_dual_norm(schedule.dual_trajectory.back(), k, eta, T);
}

}  // namespace eglb
