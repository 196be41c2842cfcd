#pragma once

#include "eglb/types.hpp"

namespace eglb {

// Per-data-center total assigned load (row sums of the decision matrix), MW.
std::vector<double> assigned_load(const Decision& x);

// Server energy e_i = rho_i * Es_i + (load_i / M_i) * Ed_i, MWh.
std::vector<double> server_energy_from_load(const FleetSpec& spec, const std::vector<double>& load);
std::vector<double> server_energy(const FleetSpec& spec, const Decision& x);

// Total energy cost sum_i p_i * gamma_i * e_i, USD.
double energy_cost(const FleetSpec& spec, const SlotInput& in, const Decision& x);

// Carbon footprint c_i = alpha_i * gamma_i * e_i, ton.
std::vector<double> carbon_footprint(const FleetSpec& spec, const SlotInput& in, const Decision& x);

// Water footprint w_i = (eps_i + beta_i * gamma_i) * e_i, m3. The direct WUE
// applies to server energy without the PUE factor.
std::vector<double> water_footprint(const FleetSpec& spec, const SlotInput& in, const Decision& x);

// Derivatives of the three cost functions with respect to assigned load.
struct MarginalCoefficients {
  std::vector<double> energy_cost;  // USD/MW
  std::vector<double> carbon;       // ton/MW
  std::vector<double> water;        // m3/MW
};
MarginalCoefficients marginal_coefficients(const FleetSpec& spec, const SlotInput& in);

// d e_i / d load: Ed/M under AlwaysOn, (Es + Ed)/M under PerfectRightSize.
std::vector<double> energy_slope(const FleetSpec& spec);

// Server energy at zero load (the load-independent part of e_i).
std::vector<double> energy_intercept(const FleetSpec& spec);

// Server energy with every data center at full capacity.
std::vector<double> energy_at_full(const FleetSpec& spec);

// Per-DC factor applied to footprints before H: 1/M_i when
// normalize_by_capacity is set, otherwise 1.
std::vector<double> equity_scale(const FleetSpec& spec, const EquitySpec& equity);

// Throws StructuralError if x violates the mask, gateway conservation
// (tolerance 1e-9 relative), or capacity (tolerance 1e-9).
void check_decision(const FleetSpec& spec, const SlotInput& in, const Decision& x);

}  // namespace eglb
