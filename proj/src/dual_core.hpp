#pragma once

// Internal: cutting-plane maximizer for the Lagrangian duals of the
// footprint-coupled scheduling problems. One evaluation of the dual solves
// every per-slot primal subproblem plus the auxiliary blocks; the master is a
// tiny dense-simplex LP over the multiplier box (the optimal multipliers are
// componentwise bounded by the impact-function slopes). The master's cut
// weights recover the primal as a convex combination of inner minimizers.

#include <functional>
#include <vector>

namespace eglb::detail {

struct Cut {
  std::vector<double> kappa;  // evaluation point, length 2N
  double value = 0.0;         // dual value g(kappa)
  std::vector<double> grad;   // supergradient, length 2N
  double energy_sum = 0.0;    // sum_t g_t of the inner minimizer
  std::vector<double> sum_fc, sum_fw;  // footprint sums of the inner minimizer
};

struct MasterResult {
  double upper = 0.0;          // model optimum, an upper bound on max g
  std::vector<double> kappa;   // argmax of the model
  std::vector<double> lambda;  // cut weights (convex combination)
};

// max_{0 <= kappa <= ub} min_j (value_j + grad_j . (kappa - kappa_j)).
MasterResult solve_master(const std::vector<Cut>& cuts, const std::vector<double>& ub);

// Per-slot primal oracle: solves every slot subproblem at the given
// multipliers and reports the inner minimizer's energy sum and footprint
// sums (in dual-system units, intercepts included).
struct OracleEval {
  double energy_sum = 0.0;
  std::vector<double> sum_fc, sum_fw;
};

struct DualProblem {
  int n = 0;                   // data centers
  int slots = 0;               // window length W
  double e_scale = 1.0;        // energy weight in the objective
  std::vector<double> theta_eff_c, theta_eff_w;  // applied to footprint sums
  std::vector<double> offset_c, offset_w;        // carried-in constants
  std::vector<double> zbar_c, zbar_w;            // per-slot auxiliary bounds

  std::function<OracleEval(const std::vector<double>& kappa)> evaluate;
  // Adds weight * (inner minimizer at kappa) into the caller's decision
  // accumulator; called only for the few cuts with positive weight.
  std::function<void(const std::vector<double>& kappa, double weight)> accumulate;
};

struct DualResult {
  double primal = 0.0;   // objective of the accumulated combination
  double dual = 0.0;     // best dual value (lower bound)
  double upper = 0.0;    // final model bound
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> kappa;  // multipliers at the best dual value
};

struct DualOptions {
  double tol = 1e-4;
  int max_iters = 600;
  std::vector<double> kappa_init;  // optional extra starting point
};

// Objective of a combination with the given energy and footprint sums.
double combination_value(const DualProblem& p, double energy_sum,
                         const std::vector<double>& sum_fc, const std::vector<double>& sum_fw);

DualResult maximize_dual(const DualProblem& p, const DualOptions& opt);

}  // namespace eglb::detail
