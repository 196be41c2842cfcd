#pragma once

#include "eglb/eglb.hpp"

namespace eglb {

struct OfflineOptions {
  double tol = 1e-4;  // relative duality gap target
  int max_iters = 600;  // dual evaluations (cuts)
  int threads = 0;    // 0 = pick from hardware
};

struct OfflineSolution {
  std::vector<Decision> decisions;
  double objective = 0.0;     // primal value of the returned decisions
  double dual_bound = 0.0;    // best dual value (lower bound on the optimum)
  double gap_estimate = 0.0;  // objective - dual_bound, >= 0
  int iterations = 0;
  bool converged = false;
  std::vector<double> kappa;  // multipliers at the best dual value
};

// Full-horizon optimum via Lagrangian dual decomposition: a cutting-plane
// maximizer of the concave dual, where each evaluation decomposes into T
// transport solves plus one auxiliary step per footprint block, and the
// primal is recovered as the master's convex combination of inner minimizers.
OfflineSolution solve_offline(const Trace& trace, const EquitySpec& equity,
                              const OfflineOptions& options = {});

// Receding-horizon subproblem over slots [window_start, window_start + window_len):
// the equity terms are evaluated on (carried + window footprints) normalized by
// elapsed + window slots. Footprints are carried in raw units.
std::vector<Decision> solve_window(const Trace& trace, int window_start, int window_len,
                                   const EquitySpec& equity,
                                   const std::vector<double>& carried_carbon,
                                   const std::vector<double>& carried_water, int elapsed_slots,
                                   const OfflineOptions& options = {});

// Model-predictive control: at each slot solve the window subproblem with
// perfect in-window foresight, apply the first decision, carry footprints
// forward. window >= T short-circuits to solve_offline.
RunResult run_mpc(const Trace& trace, const EquitySpec& equity, int window,
                  const OfflineOptions& options = {});

}  // namespace eglb
