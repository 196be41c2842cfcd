#pragma once

#include <utility>

#include "eglb/metrics.hpp"
#include "eglb/traces.hpp"
#include "eglb/types.hpp"

namespace eglb {

struct RunConfig {
  EquitySpec equity;
  double eta = 1.7e-4;
  // Upper bounds for the auxiliary variables; empty = derive from the trace
  // as the largest per-slot footprint at full capacity.
  std::vector<double> zbar_carbon;
  std::vector<double> zbar_water;
  // Initial multipliers; empty = zero vector.
  std::vector<double> kappa_init;
  // Diagnostic: skip the dual update so kappa stays at kappa_init.
  bool freeze_dual = false;
};

struct Schedule {
  std::vector<Decision> decisions;                  // T
  std::vector<std::vector<double>> dual_trajectory; // T+1 entries of length 2N
  std::vector<std::pair<std::vector<double>, std::vector<double>>> aux_trajectory;  // T
};

struct RunResult {
  Schedule schedule;
  RunReport report;
  std::vector<std::string> warnings;
};

// Per-DC unit cost of the per-slot primal step:
//   s_g + kappa_c * s_c * scale + kappa_w * s_w * scale,
// where s_* are the marginal coefficients and scale is 1/M_i under capacity
// normalization.
std::vector<double> primal_cost_vector(const SlotInput& in, const std::vector<double>& kappa,
                                       const FleetSpec& spec, const EquitySpec& equity);

// Largest per-slot footprint at full capacity over the trace, in the units
// the dual system sees (capacity-normalized when the equity spec says so).
std::vector<double> default_zbar_carbon(const Trace& trace, const EquitySpec& equity);
std::vector<double> default_zbar_water(const Trace& trace, const EquitySpec& equity);

// Online equity-aware run: per slot, primal transport solve at the current
// multipliers, auxiliary-variable step, subgradient, mirror-descent update.
RunResult run(const Trace& trace, const RunConfig& config);

}  // namespace eglb
