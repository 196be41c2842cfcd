#include "eglb/traces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "eglb/errors.hpp"
#include "eglb/transport.hpp"

#include "json.hpp"

namespace eglb {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Deterministic PRNG

namespace {

std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s ^= a * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= b * 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(s);
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seed) {}
Rng::Rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) : engine_(mix_stream(seed, a, b)) {}

double Rng::uniform01() {
  // 53-bit mantissa from the raw 64-bit output; identical on every platform,
  // unlike std::uniform_real_distribution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

// ---------------------------------------------------------------------------
// CSV helpers

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct CsvReader {
  std::string path;
  std::ifstream in;
  int line_no = 0;

  explicit CsvReader(const std::string& p) : path(p), in(p) {
    if (!in) throw ParseError(path + ": cannot open file");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + msg);
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      fields.clear();
      size_t start = 0;
      while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
          fields.push_back(line.substr(start));
          break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
      }
      return true;
    }
    return false;
  }

  void expect_header(const std::string& header) {
    std::vector<std::string> fields;
    if (!next(fields)) fail("missing header row");
    std::string joined;
    for (size_t i = 0; i < fields.size(); ++i) joined += (i ? "," : "") + fields[i];
    if (joined != header) fail("expected header '" + header + "', got '" + joined + "'");
  }

  int parse_int(const std::string& s, const char* name) const {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(std::string("bad integer for ") + name + ": '" + s + "'");
    return v;
  }

  double parse_double(const std::string& s, const char* name) const {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      fail(std::string("bad number for ") + name + ": '" + s + "'");
    if (std::isnan(v)) fail(std::string(name) + " is NaN");
    return v;
  }

  double parse_nonneg(const std::string& s, const char* name) const {
    double v = parse_double(s, name);
    if (v < 0.0) fail(std::string(name) + " must be >= 0, got " + s);
    return v;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Trace validation

void Trace::validate() const {
  fleet.validate();
  const int n = fleet.n_datacenters;
  const int j = fleet.n_gateways;
  for (const auto& slot : slots) slot.validate(n, j);
  // Every slot's demand must be routable under the mask and capacities.
  TransportInstance inst;
  inst.capacity = fleet.capacity;
  inst.mask = fleet.connectivity;
  inst.unit_cost.assign(n, 0.0);
  for (const auto& slot : slots) {
    inst.demand = slot.load;
    auto f = check_feasible(inst);
    if (!f.feasible) {
      std::string msg = "slot " + std::to_string(slot.t) + " infeasible: gateways {";
      for (size_t k = 0; k < f.gateway_witness.size(); ++k)
        msg += (k ? "," : "") + std::to_string(f.gateway_witness[k]);
      throw InfeasibleError(msg + "} exceed reachable capacity", f.gateway_witness);
    }
  }
}

// ---------------------------------------------------------------------------
// Load / save

Trace load(const std::string& dir) {
  Trace trace;
  FleetSpec& fleet = trace.fleet;

  {
    CsvReader r((fs::path(dir) / "fleet.csv").string());
    r.expect_header("dc,capacity_mw,static_energy_mwh,dynamic_energy_mwh");
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 4) r.fail("expected 4 fields");
      int dc = r.parse_int(f[0], "dc");
      if (dc != static_cast<int>(fleet.capacity.size()))
        r.fail("dc ids must be contiguous from 0; got " + f[0]);
      fleet.capacity.push_back(r.parse_nonneg(f[1], "capacity_mw"));
      fleet.energy_model.static_energy.push_back(r.parse_nonneg(f[2], "static_energy_mwh"));
      fleet.energy_model.dynamic_energy.push_back(r.parse_nonneg(f[3], "dynamic_energy_mwh"));
    }
    fleet.n_datacenters = static_cast<int>(fleet.capacity.size());
    if (fleet.n_datacenters == 0) r.fail("fleet.csv has no data rows");
  }

  {
    CsvReader r((fs::path(dir) / "nearest.csv").string());
    r.expect_header("gateway,dc");
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 2) r.fail("expected 2 fields");
      int gw = r.parse_int(f[0], "gateway");
      if (gw != static_cast<int>(fleet.nearest_map.size()))
        r.fail("gateway ids must be contiguous from 0; got " + f[0]);
      fleet.nearest_map.push_back(r.parse_int(f[1], "dc"));
    }
    fleet.n_gateways = static_cast<int>(fleet.nearest_map.size());
    if (fleet.n_gateways == 0) r.fail("nearest.csv has no data rows");
  }

  {
    CsvReader r((fs::path(dir) / "connectivity.csv").string());
    r.expect_header("dc,gateway,allowed");
    fleet.connectivity = BoolMat(fleet.n_datacenters, fleet.n_gateways, false);
    std::vector<char> seen(static_cast<size_t>(fleet.n_datacenters) * fleet.n_gateways, 0);
    std::vector<std::string> f;
    while (r.next(f)) {
      if (f.size() != 3) r.fail("expected 3 fields");
      int dc = r.parse_int(f[0], "dc");
      int gw = r.parse_int(f[1], "gateway");
      if (dc < 0 || dc >= fleet.n_datacenters) r.fail("dc out of range: " + f[0]);
      if (gw < 0 || gw >= fleet.n_gateways) r.fail("gateway out of range: " + f[1]);
      int allowed = r.parse_int(f[2], "allowed");
      if (allowed != 0 && allowed != 1) r.fail("allowed must be 0 or 1");
      size_t idx = static_cast<size_t>(dc) * fleet.n_gateways + gw;
      if (seen[idx]) r.fail("duplicate (dc,gateway) pair");
      seen[idx] = 1;
      fleet.connectivity.set(dc, gw, allowed == 1);
    }
    for (char s : seen)
      if (!s) r.fail("connectivity.csv must list every (dc,gateway) pair");
  }

  {
    CsvReader r((fs::path(dir) / "workloads.csv").string());
    r.expect_header("t,gateway,load_mw");
    std::vector<std::string> f;
    std::vector<std::vector<char>> seen;
    while (r.next(f)) {
      if (f.size() != 3) r.fail("expected 3 fields");
      int t = r.parse_int(f[0], "t");
      int gw = r.parse_int(f[1], "gateway");
      if (t < 0) r.fail("t must be >= 0");
      if (gw < 0 || gw >= fleet.n_gateways) r.fail("gateway out of range: " + f[1]);
      if (t >= static_cast<int>(trace.slots.size())) {
        trace.slots.resize(t + 1);
        seen.resize(t + 1);
      }
      auto& slot = trace.slots[t];
      if (slot.load.empty()) {
        slot.t = t;
        slot.load.assign(fleet.n_gateways, 0.0);
        seen[t].assign(fleet.n_gateways, 0);
      }
      if (seen[t][gw]) r.fail("duplicate (t,gateway) row");
      seen[t][gw] = 1;
      slot.load[gw] = r.parse_nonneg(f[2], "load_mw");
    }
    for (int t = 0; t < static_cast<int>(trace.slots.size()); ++t)
      for (int gw = 0; gw < fleet.n_gateways; ++gw)
        if (seen[t].empty() || !seen[t][gw])
          r.fail("missing workload row for t=" + std::to_string(t) +
                 ", gateway=" + std::to_string(gw));
  }

  {
    CsvReader r((fs::path(dir) / "datacenters.csv").string());
    r.expect_header(
        "t,dc,price_usd_per_mwh,pue,carbon_ton_per_mwh,wue_direct_m3_per_mwh,"
        "wue_indirect_m3_per_mwh");
    std::vector<std::string> f;
    std::vector<std::vector<char>> seen(trace.slots.size());
    while (r.next(f)) {
      if (f.size() != 7) r.fail("expected 7 fields");
      int t = r.parse_int(f[0], "t");
      int dc = r.parse_int(f[1], "dc");
      if (t < 0 || t >= static_cast<int>(trace.slots.size()))
        r.fail("t out of range (workloads.csv defines " + std::to_string(trace.slots.size()) +
               " slots): " + f[0]);
      if (dc < 0 || dc >= fleet.n_datacenters) r.fail("dc out of range: " + f[1]);
      auto& slot = trace.slots[t];
      if (slot.price.empty()) {
        slot.price.assign(fleet.n_datacenters, 0.0);
        slot.pue.assign(fleet.n_datacenters, 1.0);
        slot.carbon_intensity.assign(fleet.n_datacenters, 0.0);
        slot.wue_direct.assign(fleet.n_datacenters, 0.0);
        slot.wue_indirect.assign(fleet.n_datacenters, 0.0);
        seen[t].assign(fleet.n_datacenters, 0);
      }
      if (seen[t][dc]) r.fail("duplicate (t,dc) row");
      seen[t][dc] = 1;
      slot.price[dc] = r.parse_nonneg(f[2], "price_usd_per_mwh");
      double pue = r.parse_double(f[3], "pue");
      if (pue < 1.0) r.fail("pue must be >= 1, got " + f[3]);
      slot.pue[dc] = pue;
      slot.carbon_intensity[dc] = r.parse_nonneg(f[4], "carbon_ton_per_mwh");
      slot.wue_direct[dc] = r.parse_nonneg(f[5], "wue_direct_m3_per_mwh");
      slot.wue_indirect[dc] = r.parse_nonneg(f[6], "wue_indirect_m3_per_mwh");
    }
    for (int t = 0; t < static_cast<int>(trace.slots.size()); ++t)
      for (int dc = 0; dc < fleet.n_datacenters; ++dc)
        if (seen[t].empty() || !seen[t][dc])
          r.fail("missing datacenter row for t=" + std::to_string(t) +
                 ", dc=" + std::to_string(dc));
  }

  trace.provenance = "loaded from " + dir;
  trace.validate();
  return trace;
}

void save(const Trace& trace, const std::string& dir) {
  fs::create_directories(dir);
  const FleetSpec& fleet = trace.fleet;
  auto open = [&](const char* name) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    if (!out) throw ParseError(std::string(name) + ": cannot open for writing");
    return out;
  };

  {
    auto out = open("fleet.csv");
    out << "dc,capacity_mw,static_energy_mwh,dynamic_energy_mwh\n";
    for (int i = 0; i < fleet.n_datacenters; ++i)
      out << i << ',' << format_double(fleet.capacity[i]) << ','
          << format_double(fleet.energy_model.static_energy[i]) << ','
          << format_double(fleet.energy_model.dynamic_energy[i]) << '\n';
  }
  {
    auto out = open("nearest.csv");
    out << "gateway,dc\n";
    for (int j = 0; j < fleet.n_gateways; ++j) out << j << ',' << fleet.nearest_map[j] << '\n';
  }
  {
    auto out = open("connectivity.csv");
    out << "dc,gateway,allowed\n";
    for (int i = 0; i < fleet.n_datacenters; ++i)
      for (int j = 0; j < fleet.n_gateways; ++j)
        out << i << ',' << j << ',' << (fleet.connectivity.at(i, j) ? 1 : 0) << '\n';
  }
  {
    auto out = open("workloads.csv");
    out << "t,gateway,load_mw\n";
    for (const auto& slot : trace.slots)
      for (int j = 0; j < fleet.n_gateways; ++j)
        out << slot.t << ',' << j << ',' << format_double(slot.load[j]) << '\n';
  }
  {
    auto out = open("datacenters.csv");
    out << "t,dc,price_usd_per_mwh,pue,carbon_ton_per_mwh,wue_direct_m3_per_mwh,"
           "wue_indirect_m3_per_mwh\n";
    for (const auto& slot : trace.slots)
      for (int i = 0; i < fleet.n_datacenters; ++i)
        out << slot.t << ',' << i << ',' << format_double(slot.price[i]) << ','
            << format_double(slot.pue[i]) << ',' << format_double(slot.carbon_intensity[i]) << ','
            << format_double(slot.wue_direct[i]) << ',' << format_double(slot.wue_indirect[i])
            << '\n';
  }
}

// ---------------------------------------------------------------------------
// Generators

std::vector<std::vector<double>> distribute_to_gateways(const std::vector<double>& base,
                                                        int n_gateways, double perturbation,
                                                        std::uint64_t seed) {
  if (n_gateways <= 0) throw StructuralError("n_gateways must be positive");
  if (perturbation < 0.0) throw StructuralError("perturbation must be >= 0");
  std::vector<std::vector<double>> out(n_gateways);
  for (int j = 0; j < n_gateways; ++j) {
    Rng rng(seed, 0x676174 /* stream: gateway split */, static_cast<std::uint64_t>(j));
    out[j].resize(base.size());
    for (size_t t = 0; t < base.size(); ++t) {
      double u = perturbation == 0.0 ? 0.0 : rng.uniform(-perturbation, perturbation);
      out[j][t] = std::max(0.0, base[t] / n_gateways * (1.0 + u));
    }
  }
  return out;
}

Trace augment(const Trace& base, int target_slots, double perturbation, std::uint64_t seed) {
  const int t0 = base.horizon();
  if (t0 == 0) throw StructuralError("cannot augment an empty trace");
  if (target_slots < t0) throw StructuralError("target_slots must be >= the base horizon");
  Trace out = base;
  out.slots.reserve(target_slots);
  int repeat = 1;
  while (out.horizon() < target_slots) {
    for (int k = 0; k < t0 && out.horizon() < target_slots; ++k) {
      SlotInput slot = base.slots[k];
      slot.t = out.horizon();
      for (int j = 0; j < base.fleet.n_gateways; ++j) {
        Rng rng(seed, static_cast<std::uint64_t>(repeat),
                (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint64_t>(k));
        double u = perturbation == 0.0 ? 0.0 : rng.uniform(-perturbation, perturbation);
        slot.load[j] = std::max(0.0, slot.load[j] * (1.0 + u));
      }
      out.slots.push_back(std::move(slot));
    }
    ++repeat;
  }
  out.provenance = base.provenance + " augmented to " + std::to_string(target_slots) + " slots";
  out.validate();
  return out;
}

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

double series_value(const SynthSeries& s, int index, int t, double slot_hours,
                    double period_hours, Rng& rng) {
  double level = s.level[index];
  double phase = s.phase_step_hours * index;
  double diurnal =
      s.diurnal_frac == 0.0
          ? 1.0
          : 1.0 + s.diurnal_frac * std::sin(kTau * (t * slot_hours + phase) / period_hours);
  double u = rng.uniform01() * 2.0 - 1.0;  // consume one draw per slot regardless
  double noise = s.noise_frac == 0.0 ? 1.0 : 1.0 + s.noise_frac * u;
  return std::max(0.0, level * diurnal * noise);
}

}  // namespace

Trace synth(const SynthProfile& p, int n_slots, std::uint64_t seed) {
  if (n_slots <= 0) throw StructuralError("n_slots must be positive");
  Trace trace;
  FleetSpec& fleet = trace.fleet;
  fleet.n_datacenters = p.n_datacenters;
  fleet.n_gateways = p.n_gateways;
  fleet.capacity = p.capacity_mw;
  fleet.energy_model.static_energy = p.static_energy_mwh;
  fleet.energy_model.dynamic_energy = p.dynamic_energy_mwh;
  fleet.energy_model.sizing_mode = p.sizing_mode;
  fleet.slot_hours = p.slot_hours;
  fleet.connectivity =
      p.connectivity.rows > 0 ? p.connectivity : BoolMat(p.n_datacenters, p.n_gateways, true);
  if (p.nearest_map.empty()) {
    fleet.nearest_map.resize(p.n_gateways);
    for (int j = 0; j < p.n_gateways; ++j) fleet.nearest_map[j] = j % p.n_datacenters;
  } else {
    fleet.nearest_map = p.nearest_map;
  }

  enum StreamId : std::uint64_t { kLoad = 1, kPrice, kCarbon, kWueDirect, kWueIndirect };
  auto make_rngs = [&](StreamId id, int count) {
    std::vector<Rng> rngs;
    rngs.reserve(count);
    for (int i = 0; i < count; ++i) rngs.emplace_back(seed, static_cast<std::uint64_t>(id), i);
    return rngs;
  };
  auto load_rng = make_rngs(kLoad, p.n_gateways);
  auto price_rng = make_rngs(kPrice, p.n_datacenters);
  auto carbon_rng = make_rngs(kCarbon, p.n_datacenters);
  auto wd_rng = make_rngs(kWueDirect, p.n_datacenters);
  auto wi_rng = make_rngs(kWueIndirect, p.n_datacenters);

  trace.slots.resize(n_slots);
  for (int t = 0; t < n_slots; ++t) {
    SlotInput& slot = trace.slots[t];
    slot.t = t;
    slot.load.resize(p.n_gateways);
    for (int j = 0; j < p.n_gateways; ++j)
      slot.load[j] = series_value(p.load, j, t, p.slot_hours, p.period_hours, load_rng[j]);
    slot.price.resize(p.n_datacenters);
    slot.pue = p.pue;
    slot.carbon_intensity.resize(p.n_datacenters);
    slot.wue_direct.resize(p.n_datacenters);
    slot.wue_indirect.resize(p.n_datacenters);
    for (int i = 0; i < p.n_datacenters; ++i) {
      slot.price[i] = series_value(p.price, i, t, p.slot_hours, p.period_hours, price_rng[i]);
      slot.carbon_intensity[i] =
          series_value(p.carbon, i, t, p.slot_hours, p.period_hours, carbon_rng[i]);
      slot.wue_direct[i] =
          series_value(p.wue_direct, i, t, p.slot_hours, p.period_hours, wd_rng[i]);
      slot.wue_indirect[i] =
          series_value(p.wue_indirect, i, t, p.slot_hours, p.period_hours, wi_rng[i]);
    }
  }
  trace.provenance = "synth profile=" + p.name + " slots=" + std::to_string(n_slots) +
                     " seed=" + std::to_string(seed);
  trace.validate();
  return trace;
}

// ---------------------------------------------------------------------------
// Profiles

namespace {

// Per-location levels with realistic spreads. The cheap locations carry the
// worst water or carbon intensity, so cost-only routing concentrates
// environmental load on them.
const std::vector<double> kPriceLevels = {65, 78, 81, 85, 315, 247, 248, 214, 129, 155};
const std::vector<double> kCarbonLevels = {0.40, 0.37, 0.42, 0.30, 0.33,
                                           0.48, 0.45, 0.14, 0.33, 0.53};
const std::vector<double> kWueDirectLevels = {4.6, 3.9, 3.6, 3.3, 2.9, 3.1, 1.4, 2.2, 0.8, 4.2};
const std::vector<double> kWueIndirectLevels = {1.0, 1.9, 2.1, 1.5, 1.5, 1.7, 1.5, 1.5, 1.5, 1.5};

std::vector<double> take(const std::vector<double>& v, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(v[i % v.size()]);
  return out;
}

SynthProfile base_profile(int n_dc, int n_gw, double capacity_mw) {
  SynthProfile p;
  p.n_datacenters = n_dc;
  p.n_gateways = n_gw;
  p.capacity_mw.assign(n_dc, capacity_mw);
  p.static_energy_mwh.assign(n_dc, 0.0);
  p.dynamic_energy_mwh.assign(n_dc, capacity_mw);  // 1 h slots: full load = capacity MWh
  p.sizing_mode = SizingMode::PerfectRightSize;
  p.slot_hours = 1.0;
  p.period_hours = 24.0;
  p.pue.assign(n_dc, 1.1);

  p.load.level.assign(n_gw, 0.45 * capacity_mw * n_dc / n_gw);
  p.load.diurnal_frac = 0.35;
  p.load.noise_frac = 0.08;
  p.load.phase_step_hours = 2.4;

  p.price.level = take(kPriceLevels, n_dc);
  p.price.diurnal_frac = 0.15;
  p.price.noise_frac = 0.05;
  p.price.phase_step_hours = 2.4;

  p.carbon.level = take(kCarbonLevels, n_dc);
  p.carbon.diurnal_frac = 0.12;
  p.carbon.noise_frac = 0.05;
  p.carbon.phase_step_hours = 2.4;

  p.wue_direct.level = take(kWueDirectLevels, n_dc);
  p.wue_direct.diurnal_frac = 0.25;
  p.wue_direct.noise_frac = 0.05;
  p.wue_direct.phase_step_hours = 2.4;

  p.wue_indirect.level = take(kWueIndirectLevels, n_dc);
  p.wue_indirect.diurnal_frac = 0.05;
  p.wue_indirect.noise_frac = 0.03;
  p.wue_indirect.phase_step_hours = 2.4;
  return p;
}

}  // namespace

SynthProfile skewed10_profile() {
  SynthProfile p = base_profile(10, 10, 1000.0);
  p.name = "skewed10";
  return p;
}

SynthProfile small_profile(int n_datacenters, int n_gateways) {
  SynthProfile p = base_profile(n_datacenters, n_gateways, 1000.0);
  p.name = "small" + std::to_string(n_datacenters);
  return p;
}

SynthProfile profile_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open profile");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  auto vec_or_fill = [&](const nlohmann::json& node, int n, const char* name) {
    std::vector<double> out;
    if (node.is_number()) {
      out.assign(n, node.get<double>());
    } else if (node.is_array()) {
      out = node.get<std::vector<double>>();
      if (static_cast<int>(out.size()) != n)
        throw ParseError(path + ": " + name + " must have length " + std::to_string(n));
    } else {
      throw ParseError(path + ": " + name + " must be a number or array");
    }
    return out;
  };
  auto series = [&](const nlohmann::json& node, int n, const char* name) {
    SynthSeries s;
    s.level = vec_or_fill(node.at("level"), n, name);
    s.diurnal_frac = node.value("diurnal_frac", 0.0);
    s.noise_frac = node.value("noise_frac", 0.0);
    s.phase_step_hours = node.value("phase_step_hours", 0.0);
    return s;
  };

  try {
    SynthProfile p;
    p.name = j.value("name", fs::path(path).stem().string());
    p.n_datacenters = j.at("n_datacenters").get<int>();
    p.n_gateways = j.at("n_gateways").get<int>();
    const int n = p.n_datacenters;
    p.capacity_mw = vec_or_fill(j.at("capacity_mw"), n, "capacity_mw");
    p.static_energy_mwh = vec_or_fill(j.value("static_energy_mwh", nlohmann::json(0.0)), n,
                                      "static_energy_mwh");
    if (j.contains("dynamic_energy_mwh"))
      p.dynamic_energy_mwh = vec_or_fill(j["dynamic_energy_mwh"], n, "dynamic_energy_mwh");
    else
      p.dynamic_energy_mwh = p.capacity_mw;
    p.sizing_mode = j.value("always_on", false) ? SizingMode::AlwaysOn
                                                : SizingMode::PerfectRightSize;
    p.slot_hours = j.value("slot_hours", 1.0);
    p.period_hours = j.value("period_hours", 24.0);
    p.pue = vec_or_fill(j.value("pue", nlohmann::json(1.1)), n, "pue");
    if (j.contains("connectivity")) {
      auto rows = j["connectivity"].get<std::vector<std::vector<int>>>();
      p.connectivity = BoolMat(p.n_datacenters, p.n_gateways, false);
      if (static_cast<int>(rows.size()) != p.n_datacenters)
        throw ParseError(path + ": connectivity must have N rows");
      for (int i = 0; i < p.n_datacenters; ++i) {
        if (static_cast<int>(rows[i].size()) != p.n_gateways)
          throw ParseError(path + ": connectivity rows must have J entries");
        for (int g = 0; g < p.n_gateways; ++g) p.connectivity.set(i, g, rows[i][g] != 0);
      }
    }
    if (j.contains("nearest_map")) p.nearest_map = j["nearest_map"].get<std::vector<int>>();
    p.load = series(j.at("load"), p.n_gateways, "load.level");
    p.price = series(j.at("price"), n, "price.level");
    p.carbon = series(j.at("carbon"), n, "carbon.level");
    p.wue_direct = series(j.at("wue_direct"), n, "wue_direct.level");
    p.wue_indirect = series(j.at("wue_indirect"), n, "wue_indirect.level");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace eglb
