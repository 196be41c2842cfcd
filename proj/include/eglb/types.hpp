#pragma once

#include <cstdint>
#include <vector>

namespace eglb {

// Dense row-major matrix, value semantics.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  bool operator==(const Mat& o) const = default;
};

struct BoolMat {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> data;

  BoolMat() = default;
  BoolMat(int r, int c, bool fill = false)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill ? 1 : 0) {}

  void set(int i, int j, bool v) { data[static_cast<size_t>(i) * cols + j] = v ? 1 : 0; }
  bool at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j] != 0; }

  bool operator==(const BoolMat& o) const = default;
};

// How the server cluster tracks its assigned load.
//   PerfectRightSize: idle servers are switched off, utilization rho = load / capacity.
//   AlwaysOn:         the whole cluster stays powered, rho = 1.
enum class SizingMode { PerfectRightSize, AlwaysOn };

struct EnergyModel {
  std::vector<double> static_energy;   // MWh per slot when the cluster is fully powered
  std::vector<double> dynamic_energy;  // MWh per slot at full utilization
  SizingMode sizing_mode = SizingMode::PerfectRightSize;
};

// Static description of the fleet: data centers, gateways, connectivity.
struct FleetSpec {
  int n_datacenters = 0;              // N
  int n_gateways = 0;                 // J
  std::vector<double> capacity;       // MW of server power per data center
  BoolMat connectivity;               // N x J, true = routing allowed
  EnergyModel energy_model;
  std::vector<int> nearest_map;       // gateway -> its nearest data center
  double slot_hours = 1.0;

  // Throws StructuralError on dimension or invariant violations.
  void validate() const;
};

// One slot of exogenous inputs.
struct SlotInput {
  int t = 0;
  std::vector<double> load;              // MW arriving per gateway
  std::vector<double> price;             // USD/MWh per data center
  std::vector<double> pue;               // >= 1
  std::vector<double> carbon_intensity;  // ton/MWh
  std::vector<double> wue_direct;        // m3/MWh of server energy (== L/kWh)
  std::vector<double> wue_indirect;      // m3/MWh of total energy

  void validate(int n_datacenters, int n_gateways) const;

  bool operator==(const SlotInput& o) const = default;
};

// Linear environmental-impact functions H_i(v) = theta_i * v and their weights.
struct EquitySpec {
  std::vector<double> theta_carbon;  // USD/ton
  std::vector<double> theta_water;   // USD/m3
  double mu_carbon = 0.0;
  double mu_water = 0.0;
  // Divide footprints by the data center capacity before applying H
  // (proportional-fairness variant).
  bool normalize_by_capacity = false;

  void validate(int n_datacenters) const;
};

// Routing decision for one slot: x(i, j) MW routed from gateway j to data center i.
using Decision = Mat;

}  // namespace eglb
