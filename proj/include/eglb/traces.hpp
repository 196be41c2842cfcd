#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "eglb/types.hpp"

namespace eglb {

struct Trace {
  FleetSpec fleet;
  std::vector<SlotInput> slots;
  std::string provenance;

  int horizon() const { return static_cast<int>(slots.size()); }
  void validate() const;
};

// Directory layout (CSV, UTF-8, header row required, long format):
//   workloads.csv     t,gateway,load_mw
//   datacenters.csv   t,dc,price_usd_per_mwh,pue,carbon_ton_per_mwh,
//                     wue_direct_m3_per_mwh,wue_indirect_m3_per_mwh
//   fleet.csv         dc,capacity_mw,static_energy_mwh,dynamic_energy_mwh
//   connectivity.csv  dc,gateway,allowed
//   nearest.csv       gateway,dc
// Floats are serialized as shortest round-trip decimals, so save/load is
// bit-exact. Sizing mode and slot duration are runtime settings, not trace
// data; load() leaves them at their defaults.
Trace load(const std::string& dir);
void save(const Trace& trace, const std::string& dir);

// Deterministic PRNG used by all generators: std::mt19937_64 raw output
// mapped to doubles via (x >> 11) * 2^-53, identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  // Derives an independent stream for (seed, a, b) via splitmix64.
  Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b);
  double uniform01();
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

// Splits one aggregate load series across J gateways:
// per-gateway value = base/J * (1 + u), u ~ Uniform[-perturbation, +perturbation],
// clamped at 0.
std::vector<std::vector<double>> distribute_to_gateways(const std::vector<double>& base,
                                                        int n_gateways, double perturbation,
                                                        std::uint64_t seed);

// Extends a trace to target_slots by appending perturbed copies of itself.
// The first block is the unmodified original; each appended block carries an
// independent multiplicative perturbation of the workloads only.
Trace augment(const Trace& base, int target_slots, double perturbation, std::uint64_t seed);

// Sinusoid-plus-noise synthetic series: level * (1 + diurnal * sin) * (1 + noise * u).
struct SynthSeries {
  std::vector<double> level;         // one per data center (or gateway for load)
  double diurnal_frac = 0.0;
  double noise_frac = 0.0;
  double phase_step_hours = 0.0;     // phase offset between consecutive series
};

struct SynthProfile {
  std::string name;
  int n_datacenters = 0;
  int n_gateways = 0;
  std::vector<double> capacity_mw;
  std::vector<double> static_energy_mwh;
  std::vector<double> dynamic_energy_mwh;
  SizingMode sizing_mode = SizingMode::PerfectRightSize;
  double slot_hours = 1.0;
  double period_hours = 24.0;
  std::vector<double> pue;           // constant per data center
  BoolMat connectivity;              // empty => fully connected
  std::vector<int> nearest_map;      // empty => gateway j -> j % N
  SynthSeries load;                  // per gateway
  SynthSeries price;
  SynthSeries carbon;
  SynthSeries wue_direct;
  SynthSeries wue_indirect;
};

Trace synth(const SynthProfile& profile, int n_slots, std::uint64_t seed);

// Ten data centers with realistic price/carbon/WUE spreads; the cheapest
// locations carry the worst water and carbon intensities, so cost-only
// routing concentrates environmental load there.
SynthProfile skewed10_profile();

// Small fleets for tests and sweeps (slices of the 10-DC profile).
SynthProfile small_profile(int n_datacenters, int n_gateways);

SynthProfile profile_from_json_file(const std::string& path);

}  // namespace eglb
