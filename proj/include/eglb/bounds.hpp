#pragma once

#include "eglb/eglb.hpp"

namespace eglb {

// Constants of the online-vs-offline cost bound and the dual-norm bound.
// Footprint-derived quantities are in the units the dual system sees
// (capacity-normalized when the equity spec says so).
struct BoundConstants {
  double B = 0.0;        // N/2 * max_i zbar_c_i^2 + N/2 * max_i zbar_w_i^2
  double C = 0.0;        // theta_m * (mu_c + mu_w)
  double D = 0.0;        // theta_m * (mu_c * c_m + mu_w * w_m)
  double M = 0.0;        // max capacity
  double theta_m = 0.0;  // max gradient of any H
  double c_m = 0.0;      // max carbon marginal over the trace
  double w_m = 0.0;      // max water marginal over the trace
};

BoundConstants constants(const Trace& trace, const EquitySpec& equity,
                         const std::vector<double>& zbar_carbon,
                         const std::vector<double>& zbar_water);

struct BoundCheck {
  bool pass = false;
  double value = 0.0;  // quantity being bounded
  double bound = 0.0;  // its certified bound
  double slack = 0.0;  // bound - value
};

// online_cost <= offline_cost + eta*B*T + C*sqrt((2/T)*(B + (M/eta)*D)).
BoundCheck check_cost_bound(double online_cost, double offline_cost, const BoundConstants& k,
                          double eta, int T);

// ||kappa_{T+1}|| <= eta * sqrt(2T * (B + (M/eta)*D)), valid for runs started
// from kappa_1 = 0 with the quadratic reference.
BoundCheck check_dual_norm(const std::vector<double>& kappa_final, const BoundConstants& k,
                           double eta, int T);
BoundCheck check_dual_norm(const Schedule& schedule, const BoundConstants& k, double eta, int T);

}  // namespace eglb
