#include "eglb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eglb/errors.hpp"
#include "eglb/model.hpp"

namespace eglb {

namespace {

RunReport build_report(const std::vector<std::vector<double>>& slot_energy, const Trace& trace,
                       const EquitySpec& equity) {
  const int n = trace.fleet.n_datacenters;
  const int t_len = static_cast<int>(slot_energy.size());
  if (t_len == 0) throw StructuralError("cannot report on an empty schedule");
  if (t_len != trace.horizon())
    throw StructuralError("schedule length does not match the trace horizon");
  equity.validate(n);

  RunReport r;
  r.n_datacenters = n;
  r.n_slots = t_len;
  r.slot_energy_cost.assign(t_len, 0.0);
  r.carbon_total.assign(n, 0.0);
  r.water_total.assign(n, 0.0);

  for (int t = 0; t < t_len; ++t) {
    const SlotInput& in = trace.slots[t];
    const auto& e = slot_energy[t];
    double g = 0.0;
    for (int i = 0; i < n; ++i) {
      g += in.price[i] * in.pue[i] * e[i];
      r.carbon_total[i] += in.carbon_intensity[i] * in.pue[i] * e[i];
      r.water_total[i] += (in.wue_direct[i] + in.wue_indirect[i] * in.pue[i]) * e[i];
    }
    r.slot_energy_cost[t] = g;
    r.total_energy_cost += g;
  }
  r.avg_energy_cost = r.total_energy_cost / n;

  auto summarize = [&](const std::vector<double>& per_dc, double& avg, double& mx,
                       double& ratio) {
    double total = 0.0;
    mx = 0.0;
    for (double v : per_dc) {
      total += v;
      mx = std::max(mx, v);
    }
    avg = total / n;
    ratio = avg > 0.0 ? mx / avg : 1.0;  // all-zero footprints are trivially equal
  };
  summarize(r.carbon_total, r.carbon_avg, r.carbon_max, r.carbon_max_over_avg);
  summarize(r.water_total, r.water_avg, r.water_max, r.water_max_over_avg);

  auto scale = equity_scale(trace.fleet, equity);
  double h_carbon = 0.0, h_water = 0.0;
  for (int i = 0; i < n; ++i) {
    h_carbon = std::max(h_carbon, equity.theta_carbon[i] * (r.carbon_total[i] / t_len) * scale[i]);
    h_water = std::max(h_water, equity.theta_water[i] * (r.water_total[i] / t_len) * scale[i]);
  }
  r.objective =
      r.total_energy_cost / t_len + equity.mu_carbon * h_carbon + equity.mu_water * h_water;
  return r;
}

}  // namespace

RunReport report_from_energy(const std::vector<std::vector<double>>& slot_energy,
                             const Trace& trace, const EquitySpec& equity) {
  return build_report(slot_energy, trace, equity);
}

RunReport report(const std::vector<Decision>& decisions, const Trace& trace,
                 const EquitySpec& equity) {
  std::vector<std::vector<double>> energy(decisions.size());
  for (size_t t = 0; t < decisions.size(); ++t)
    energy[t] = server_energy(trace.fleet, decisions[t]);
  return build_report(energy, trace, equity);
}

double objective(const std::vector<Decision>& decisions, const Trace& trace,
                 const EquitySpec& equity) {
  return report(decisions, trace, equity).objective;
}

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << "slots: " << r.n_slots << ", data centers: " << r.n_datacenters << '\n';
  out << "energy cost  total " << r.total_energy_cost << "  avg " << r.avg_energy_cost << '\n';
  out << "water  (m3)  avg " << r.water_avg << "  max " << r.water_max << "  max/avg "
      << r.water_max_over_avg << '\n';
  out << "carbon (ton) avg " << r.carbon_avg << "  max " << r.carbon_max << "  max/avg "
      << r.carbon_max_over_avg << '\n';
  out << "objective " << r.objective << '\n';
  return out.str();
}

}  // namespace eglb
