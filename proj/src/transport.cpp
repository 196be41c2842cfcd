#include "eglb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "eglb/errors.hpp"

namespace eglb {

namespace {

struct FlowState {
  int n = 0, j = 0;
  const TransportInstance* inst = nullptr;
  Decision x;
  std::vector<double> assigned;   // per DC
  std::vector<double> remaining;  // per gateway
  std::vector<double> avail_tol;  // per DC
  std::vector<double> rem_tol;    // per gateway

  explicit FlowState(const TransportInstance& in)
      : n(static_cast<int>(in.capacity.size())),
        j(static_cast<int>(in.demand.size())),
        inst(&in),
        x(n, static_cast<int>(in.demand.size()), 0.0),
        assigned(n, 0.0),
        remaining(in.demand),
        avail_tol(n),
        rem_tol(in.demand.size()) {
    for (int i = 0; i < n; ++i) avail_tol[i] = 1e-12 * std::max(1.0, in.capacity[i]);
    for (int g = 0; g < j; ++g) rem_tol[g] = 1e-12 * std::max(1.0, in.demand[g]);
  }

  bool dc_available(int i) const { return inst->capacity[i] - assigned[i] > avail_tol[i]; }
  bool gw_active(int g) const { return remaining[g] > rem_tol[g]; }

  // Residual search from every unsatisfied gateway. Forward arcs follow the
  // mask; backward arcs follow positive flow. Returns parent pointers.
  void search(std::vector<int>& parent_dc, std::vector<int>& parent_gw,
              std::vector<char>& seen_dc, std::vector<char>& seen_gw) const {
    parent_dc.assign(n, -1);
    parent_gw.assign(j, -1);
    seen_dc.assign(n, 0);
    seen_gw.assign(j, 0);
    std::vector<int> queue;
    queue.reserve(n + j);
    for (int g = 0; g < j; ++g)
      if (gw_active(g)) {
        seen_gw[g] = 1;
        parent_gw[g] = -1;
        queue.push_back(g);  // gateways encoded as [0, j)
      }
    for (size_t head = 0; head < queue.size(); ++head) {
      int node = queue[head];
      if (node < j) {
        int g = node;
        for (int i = 0; i < n; ++i)
          if (!seen_dc[i] && inst->mask.at(i, g)) {
            seen_dc[i] = 1;
            parent_dc[i] = g;
            queue.push_back(j + i);
          }
      } else {
        int i = node - j;
        for (int g = 0; g < j; ++g)
          if (!seen_gw[g] && x(i, g) > 0.0) {
            seen_gw[g] = 1;
            parent_gw[g] = i;
            queue.push_back(g);
          }
      }
    }
  }

  // Pushes flow along the parent chain ending at DC `target`. Returns the
  // amount pushed.
  double augment(int target, const std::vector<int>& parent_dc,
                 const std::vector<int>& parent_gw) {
    // Collect the path as alternating increase arcs (dc, gw) and decrease
    // arcs; the chain ends at a gateway with untapped demand.
    std::vector<std::pair<int, int>> inc, dec;
    int dc = target;
    int root = -1;
    while (true) {
      int g = parent_dc[dc];
      inc.emplace_back(dc, g);
      if (parent_gw[g] == -1) {
        root = g;
        break;
      }
      int d = parent_gw[g];
      dec.emplace_back(d, g);
      dc = d;
    }
    double b = std::min(remaining[root], inst->capacity[target] - assigned[target]);
    for (auto [d, g] : dec) b = std::min(b, x(d, g));
    if (b <= 0.0) return 0.0;
    for (auto [d, g] : inc) x(d, g) += b;
    for (auto [d, g] : dec) x(d, g) -= b;
    remaining[root] -= b;
    assigned[target] += b;
    return b;
  }
};

}  // namespace

Feasibility check_feasible(const TransportInstance& inst) {
  FlowState st(inst);
  std::vector<int> parent_dc, parent_gw;
  std::vector<char> seen_dc, seen_gw;
  const int max_iters = 4 * (st.n + st.j + st.n * st.j) + 64;
  for (int it = 0; it < max_iters; ++it) {
    bool any = false;
    for (int g = 0; g < st.j; ++g) any = any || st.gw_active(g);
    if (!any) break;
    st.search(parent_dc, parent_gw, seen_dc, seen_gw);
    int target = -1;
    for (int i = 0; i < st.n; ++i)
      if (seen_dc[i] && st.dc_available(i)) {
        target = i;
        break;
      }
    if (target == -1) {
      Feasibility f;
      f.feasible = false;
      for (int g = 0; g < st.j; ++g)
        if (seen_gw[g]) f.gateway_witness.push_back(g);
      for (double r : st.remaining) f.max_flow += r;
      double total = 0.0;
      for (double d : inst.demand) total += d;
      f.max_flow = total - f.max_flow;
      return f;
    }
    if (st.augment(target, parent_dc, parent_gw) <= 0.0) break;
  }
  Feasibility f;
  f.feasible = true;
  for (int g = 0; g < st.j; ++g) f.feasible = f.feasible && !st.gw_active(g);
  double total = 0.0, rem = 0.0;
  for (double d : inst.demand) total += d;
  for (double r : st.remaining) rem += r;
  f.max_flow = total - rem;
  return f;
}

TransportSolution solve(const TransportInstance& inst) {
  const int n = static_cast<int>(inst.capacity.size());
  const int j = static_cast<int>(inst.demand.size());
  if (static_cast<int>(inst.unit_cost.size()) != n || inst.mask.rows != n || inst.mask.cols != j)
    throw StructuralError("transport instance has inconsistent dimensions");
  for (double d : inst.demand)
    if (!(d >= 0.0)) throw StructuralError("transport demand must be >= 0");
  for (double c : inst.capacity)
    if (!(c > 0.0)) throw StructuralError("transport capacity must be > 0");

  FlowState st(inst);
  std::vector<int> parent_dc, parent_gw;
  std::vector<char> seen_dc, seen_gw;
  const int max_iters = 4 * (n + j + n * j) + 64;
  int it = 0;
  for (; it < max_iters; ++it) {
    bool any = false;
    for (int g = 0; g < j; ++g) any = any || st.gw_active(g);
    if (!any) break;
    st.search(parent_dc, parent_gw, seen_dc, seen_gw);
    // Every augmenting path costs exactly the unit cost of its terminal DC,
    // so the shortest path targets the cheapest reachable one; ties go to
    // the lowest index.
    int target = -1;
    for (int i = 0; i < n; ++i) {
      if (!seen_dc[i] || !st.dc_available(i)) continue;
      if (target == -1 || inst.unit_cost[i] < inst.unit_cost[target]) target = i;
    }
    if (target == -1) {
      std::vector<int> witness;
      for (int g = 0; g < j; ++g)
        if (seen_gw[g]) witness.push_back(g);
      std::string msg = "infeasible routing: gateways {";
      for (size_t k = 0; k < witness.size(); ++k)
        msg += (k ? "," : "") + std::to_string(witness[k]);
      msg += "} exceed the capacity reachable from them";
      throw InfeasibleError(msg, witness);
    }
    if (st.augment(target, parent_dc, parent_gw) <= 0.0) break;
  }
  if (it >= max_iters)
    throw std::logic_error("transport solver exceeded its augmentation budget");

  TransportSolution sol;
  sol.x = std::move(st.x);
  sol.objective = 0.0;
  for (int i = 0; i < n; ++i) {
    double load = 0.0;
    for (int g = 0; g < j; ++g) load += sol.x(i, g);
    sol.objective += inst.unit_cost[i] * load;
  }
  return sol;
}

}  // namespace eglb
