#pragma once

#include "eglb/eglb.hpp"

namespace eglb {

// Equity-oblivious per-slot optimizers. Each slot is solved independently
// with the transport module, so every decision is optimal for its stated
// per-slot objective.

RunResult run_energy(const Trace& trace);
RunResult run_carbon(const Trace& trace);
RunResult run_water(const Trace& trace);

// unit cost = w_energy * s_g + w_carbon * s_c + w_water * s_w.
RunResult run_weighted(const Trace& trace, double w_energy, double w_carbon, double w_water);

// Static routing: every gateway sends its whole load to its nearest data
// center. Throws InfeasibleError naming the overloaded data center when a
// nearest DC cannot absorb its gateways' load.
RunResult run_nearest(const Trace& trace);

}  // namespace eglb
