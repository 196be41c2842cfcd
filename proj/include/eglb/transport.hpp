#pragma once

#include "eglb/types.hpp"

namespace eglb {

// Per-slot routing subproblem: minimize sum_i unit_cost_i * (assigned load at i)
// over the transportation polytope
//   { x >= 0 : sum_i x_ij = demand_j, sum_j x_ij <= capacity_i, x_ij = 0 where !mask }.
struct TransportInstance {
  std::vector<double> unit_cost;  // per data center
  std::vector<double> capacity;   // per data center, > 0
  std::vector<double> demand;     // per gateway, >= 0
  BoolMat mask;                   // N x J
};

struct Feasibility {
  bool feasible = false;
  double max_flow = 0.0;
  // When infeasible: gateways whose combined demand exceeds the capacity
  // reachable from them.
  std::vector<int> gateway_witness;
};

Feasibility check_feasible(const TransportInstance& inst);

struct TransportSolution {
  Decision x;
  double objective = 0.0;
};

// Successive-shortest-path min-cost flow. Costs live on the data center side
// only, so every augmenting path costs exactly the unit cost of its final
// data center; ties break toward the lowest data center index.
// Throws InfeasibleError with the max-flow witness when demand cannot be met.
TransportSolution solve(const TransportInstance& inst);

}  // namespace eglb
