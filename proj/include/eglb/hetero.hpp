#pragma once

#include "eglb/eglb.hpp"
#include "eglb/offline.hpp"

namespace eglb {

// Heterogeneous model catalog: each data center may split its assigned load
// across L model variants with different energy, capacity-resource, and
// accuracy-cost slopes. All per-load functions are linear with zero
// intercept.
struct HeteroModel {
  int n_models = 0;                        // L
  Mat energy_per_load;                     // N x L, MWh per MW-slot
  Mat resource_per_load;                   // N x L, capacity units per MW
  std::vector<double> perf_cost_per_load;  // L, accuracy-loss units per MW
  double phi = 0.0;                        // USD per accuracy-loss unit

  void validate(const FleetSpec& spec) const;
};

// Operational cost slopes per (data center, model):
//   p_i * gamma_i * energy_per_load_il + phi * perf_cost_per_load_l.
Mat hetero_operational_cost(const HeteroModel& model, const SlotInput& in, const FleetSpec& spec);
// Footprint slopes per (data center, model), via the substituted energy.
Mat hetero_carbon_slope(const HeteroModel& model, const SlotInput& in, const FleetSpec& spec);
Mat hetero_water_slope(const HeteroModel& model, const SlotInput& in, const FleetSpec& spec);

// Cost of serving one DC's load when split optimally across models, as a
// convex piecewise-linear function of total load: segments of nondecreasing
// marginal cost, plus the parametric model mix needed to recover y.
struct CostCurve {
  struct Segment {
    double width;          // load range covered by this segment
    double marginal;       // cost per MW on this segment
    int model_a, model_b;  // mix: dy_a = rate_a * dl, dy_b = rate_b * dl (b = -1 for pure)
    double rate_a, rate_b;
  };
  std::vector<Segment> segments;
  double max_load = 0.0;  // finite capacity in load units (inf when a model is free)
};

CostCurve dc_cost_curve(const std::vector<double>& cost, const std::vector<double>& resource,
                        double capacity);

// Model mix serving total load `l` along the curve (fills segments in order).
std::vector<double> allocate_models(const CostCurve& curve, int n_models, double l);

struct HeteroSlotSolution {
  Decision x;     // N x J routing
  Mat y;          // N x L model assignment
  double objective = 0.0;
};

// Exact per-slot optimum of the two-layer problem: gateway -> DC routing plus
// DC -> model assignment under the per-DC resource budget. Solved as a
// transport problem over the per-DC cost-curve segments.
HeteroSlotSolution solve_hetero_slot(const Mat& unit_cost, const HeteroModel& model,
                                     const FleetSpec& spec, const SlotInput& in);

enum class HeteroAlgorithm { Eglb, EglbOffline, Energy, Carbon, Water, Weighted, Nearest };

struct HeteroRunConfig {
  RunConfig base;                 // equity, eta, zbar, kappa_init
  double w_energy = 1.0, w_carbon = 0.0, w_water = 0.0;  // for Weighted
  OfflineOptions offline;
};

struct HeteroRunResult {
  std::vector<Decision> decisions;                   // T routing matrices
  std::vector<Mat> model_assignment;                 // T of N x L
  std::vector<std::vector<double>> dual_trajectory;  // for Eglb
  RunReport report;
  double perf_cost_total = 0.0;        // phi-weighted accuracy cost, USD
  double operational_objective = 0.0;  // report.objective + perf_cost_total / T
  double offline_gap = 0.0;            // for EglbOffline
  double offline_dual = 0.0;
  int offline_iterations = 0;
};

// Runs the selected algorithm with the heterogeneous slot solver substituted
// for the homogeneous primal step. With L = 1 and unit resource slope this
// reproduces the homogeneous pipeline.
HeteroRunResult run_hetero(const Trace& trace, const HeteroModel& model,
                           const HeteroRunConfig& config, HeteroAlgorithm algorithm);

// Largest per-slot footprints at full resource usage (bounded by the slot's
// total demand), in dual-system units.
std::vector<double> hetero_default_zbar_carbon(const Trace& trace, const HeteroModel& model,
                                               const EquitySpec& equity);
std::vector<double> hetero_default_zbar_water(const Trace& trace, const HeteroModel& model,
                                              const EquitySpec& equity);

HeteroModel hetero_model_from_json_file(const std::string& path, int n_datacenters);

}  // namespace eglb
