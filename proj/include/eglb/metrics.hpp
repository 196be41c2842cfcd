#pragma once

#include <string>

#include "eglb/traces.hpp"
#include "eglb/types.hpp"

namespace eglb {

struct RunReport {
  int n_datacenters = 0;
  int n_slots = 0;

  double total_energy_cost = 0.0;            // USD over the horizon
  double avg_energy_cost = 0.0;              // total / N (per-location average)
  std::vector<double> slot_energy_cost;      // per slot

  std::vector<double> carbon_total;          // per-DC total, ton
  double carbon_avg = 0.0;
  double carbon_max = 0.0;
  double carbon_max_over_avg = 1.0;

  std::vector<double> water_total;           // per-DC total, m3
  double water_avg = 0.0;
  double water_max = 0.0;
  double water_max_over_avg = 1.0;

  double objective = 0.0;                    // equity-weighted objective value
};

// Equity-weighted objective on realized decisions:
//   (1/T) sum_t g_t + mu_c * max_i H_c(avg carbon_i) + mu_w * max_i H_w(avg water_i)
double objective(const std::vector<Decision>& decisions, const Trace& trace,
                 const EquitySpec& equity);

RunReport report(const std::vector<Decision>& decisions, const Trace& trace,
                 const EquitySpec& equity);

// Same metrics computed from per-slot per-DC server energy (T x N); used by
// the heterogeneous-model pipeline where energy is not a function of the
// routing matrix alone.
RunReport report_from_energy(const std::vector<std::vector<double>>& slot_energy,
                             const Trace& trace, const EquitySpec& equity);

// Aligned single-run text summary.
std::string to_text(const RunReport& r);

}  // namespace eglb
