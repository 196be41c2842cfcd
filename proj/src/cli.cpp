#include "eglb/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eglb/baselines.hpp"
#include "eglb/bounds.hpp"
#include "eglb/dmd.hpp"
#include "eglb/eglb.hpp"
#include "eglb/errors.hpp"
#include "eglb/hetero.hpp"
#include "eglb/metrics.hpp"
#include "eglb/model.hpp"
#include "eglb/offline.hpp"
#include "eglb/traces.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace eglb::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double_field(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(ctx + ": bad number '" + s + "'");
  return v;
}

struct CommonArgs {
  std::string trace_dir;
  std::string out_dir;
  double eta = 1.7e-4;
  double mu_c = 1500.0;
  double mu_w = 60.0;
  double theta_c = 1.0;
  double theta_w = 1.0;
  bool normalize = false;
  int window = 24;
  double w_carbon = 1500.0;
  double w_water = 60.0;
  double tol = 1e-4;
  int max_iters = 600;
  std::string hetero_file;
};

EquitySpec make_equity(const CommonArgs& a, int n) {
  EquitySpec eq;
  eq.theta_carbon.assign(n, a.theta_c);
  eq.theta_water.assign(n, a.theta_w);
  eq.mu_carbon = a.mu_c;
  eq.mu_water = a.mu_w;
  eq.normalize_by_capacity = a.normalize;
  return eq;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  out << contents;
}

void write_schedule_csv(const fs::path& path, const std::vector<Decision>& decisions) {
  std::ostringstream out;
  out << "t,dc,gateway,load_mw\n";
  for (size_t t = 0; t < decisions.size(); ++t)
    for (int i = 0; i < decisions[t].rows; ++i)
      for (int j = 0; j < decisions[t].cols; ++j)
        out << t << ',' << i << ',' << j << ',' << fmt(decisions[t](i, j)) << '\n';
  write_file(path, out.str());
}

void write_models_csv(const fs::path& path, const std::vector<Mat>& ys) {
  std::ostringstream out;
  out << "t,dc,model,load_mw\n";
  for (size_t t = 0; t < ys.size(); ++t)
    for (int i = 0; i < ys[t].rows; ++i)
      for (int l = 0; l < ys[t].cols; ++l)
        out << t << ',' << i << ',' << l << ',' << fmt(ys[t](i, l)) << '\n';
  write_file(path, out.str());
}

void write_duals_csv(const fs::path& path, const Schedule& sched) {
  std::ostringstream out;
  out << "t,dc,kappa_carbon,kappa_water,z_carbon,z_water\n";
  const int t_total = static_cast<int>(sched.dual_trajectory.size());
  for (int t = 0; t < t_total; ++t) {
    const auto& kappa = sched.dual_trajectory[t];
    const int n = static_cast<int>(kappa.size()) / 2;
    for (int i = 0; i < n; ++i) {
      out << t << ',' << i << ',' << fmt(kappa[i]) << ',' << fmt(kappa[n + i]) << ',';
      if (t < static_cast<int>(sched.aux_trajectory.size())) {
        out << fmt(sched.aux_trajectory[t].first[i]) << ','
            << fmt(sched.aux_trajectory[t].second[i]);
      } else {
        out << ',';
      }
      out << '\n';
    }
  }
  write_file(path, out.str());
}

std::vector<Decision> read_schedule_csv(const fs::path& path, int n, int j, int t_len) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  std::vector<Decision> out(t_len, Decision(n, j, 0.0));
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 4) throw ParseError(path.string() + ":" + std::to_string(line_no));
    int t = std::stoi(f[0]), dc = std::stoi(f[1]), gw = std::stoi(f[2]);
    if (t < 0 || t >= t_len || dc < 0 || dc >= n || gw < 0 || gw >= j)
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": index out of range");
    out[t](dc, gw) = parse_double_field(f[3], path.string() + ":" + std::to_string(line_no));
  }
  return out;
}

struct DualsFile {
  std::vector<std::vector<double>> kappa;  // T+1 x 2N
  std::vector<std::vector<double>> z_c, z_w;  // T x N
};

DualsFile read_duals_csv(const fs::path& path, int n, int t_len) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
  DualsFile d;
  d.kappa.assign(t_len + 1, std::vector<double>(2 * n, 0.0));
  d.z_c.assign(t_len, std::vector<double>(n, 0.0));
  d.z_w.assign(t_len, std::vector<double>(n, 0.0));
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    size_t start = 0;
    while (true) {
      size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        f.push_back(line.substr(start));
        break;
      }
      f.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (f.size() != 6) throw ParseError(path.string() + ":" + std::to_string(line_no));
    std::string ctx = path.string() + ":" + std::to_string(line_no);
    int t = std::stoi(f[0]), dc = std::stoi(f[1]);
    if (t < 0 || t > t_len || dc < 0 || dc >= n) throw ParseError(ctx + ": index out of range");
    d.kappa[t][dc] = parse_double_field(f[2], ctx);
    d.kappa[t][n + dc] = parse_double_field(f[3], ctx);
    if (t < t_len) {
      d.z_c[t][dc] = parse_double_field(f[4], ctx);
      d.z_w[t][dc] = parse_double_field(f[5], ctx);
    }
  }
  return d;
}

json report_to_json(const RunReport& r) {
  json out;
  out["n_datacenters"] = r.n_datacenters;
  out["n_slots"] = r.n_slots;
  out["total_energy_cost"] = r.total_energy_cost;
  out["avg_energy_cost"] = r.avg_energy_cost;
  out["carbon"] = {{"per_dc_total", r.carbon_total},
                   {"avg", r.carbon_avg},
                   {"max", r.carbon_max},
                   {"max_over_avg", r.carbon_max_over_avg}};
  out["water"] = {{"per_dc_total", r.water_total},
                  {"avg", r.water_avg},
                  {"max", r.water_max},
                  {"max_over_avg", r.water_max_over_avg}};
  out["objective"] = r.objective;
  out["slot_energy_cost"] = r.slot_energy_cost;
  return out;
}

const std::vector<std::string> kAllAlgos = {"energy", "carbon", "water",    "c2",  "all",
                                            "nearest", "eglb-off", "eglb-mpc", "eglb"};

struct AlgoOutcome {
  std::vector<Decision> decisions;
  RunReport report;
  Schedule schedule;  // dual/aux populated for eglb
  std::vector<std::string> warnings;
  bool has_offline = false;
  double offline_dual = 0.0, offline_gap = 0.0;
  int offline_iterations = 0;
  bool offline_converged = false;
};

AlgoOutcome run_algorithm(const Trace& trace, const std::string& algo, const CommonArgs& args) {
  const int n = trace.fleet.n_datacenters;
  EquitySpec equity = make_equity(args, n);
  OfflineOptions opt;
  opt.tol = args.tol;
  opt.max_iters = args.max_iters;
  AlgoOutcome out;

  auto from_result = [&](RunResult&& r) {
    out.schedule = std::move(r.schedule);
    out.decisions = out.schedule.decisions;
    out.warnings = std::move(r.warnings);
    // Metrics under the shared equity spec, whatever the algorithm optimized.
    out.report = report(out.decisions, trace, equity);
  };

  if (algo == "energy") {
    from_result(run_energy(trace));
  } else if (algo == "carbon") {
    from_result(run_carbon(trace));
  } else if (algo == "water") {
    from_result(run_water(trace));
  } else if (algo == "c2") {
    from_result(run_weighted(trace, 1.0, args.w_carbon, 0.0));
  } else if (algo == "all") {
    from_result(run_weighted(trace, 1.0, args.w_carbon, args.w_water));
  } else if (algo == "nearest") {
    from_result(run_nearest(trace));
  } else if (algo == "eglb") {
    RunConfig cfg;
    cfg.equity = equity;
    cfg.eta = args.eta;
    from_result(run(trace, cfg));
  } else if (algo == "eglb-mpc") {
    from_result(run_mpc(trace, equity, args.window, opt));
  } else if (algo == "eglb-off") {
    auto sol = solve_offline(trace, equity, opt);
    out.decisions = std::move(sol.decisions);
    out.schedule.decisions = out.decisions;
    out.report = report(out.decisions, trace, equity);
    out.has_offline = true;
    out.offline_dual = sol.dual_bound;
    out.offline_gap = sol.gap_estimate;
    out.offline_iterations = sol.iterations;
    out.offline_converged = sol.converged;
    if (!sol.converged)
      out.warnings.push_back("offline solver stopped at gap " + fmt(sol.gap_estimate) +
                             " before reaching the tolerance");
  } else {
    throw ConfigError("unknown algorithm: " + algo);
  }
  return out;
}

json config_to_json(const CommonArgs& args, const Trace& trace) {
  EquitySpec equity = make_equity(args, trace.fleet.n_datacenters);
  json cfg;
  cfg["eta"] = args.eta;
  cfg["mu_carbon"] = args.mu_c;
  cfg["mu_water"] = args.mu_w;
  cfg["theta_carbon"] = equity.theta_carbon;
  cfg["theta_water"] = equity.theta_water;
  cfg["normalize_by_capacity"] = args.normalize;
  cfg["window"] = args.window;
  cfg["w_carbon"] = args.w_carbon;
  cfg["w_water"] = args.w_water;
  cfg["offline_tol"] = args.tol;
  cfg["offline_max_iters"] = args.max_iters;
  cfg["zbar_carbon"] = default_zbar_carbon(trace, equity);
  cfg["zbar_water"] = default_zbar_water(trace, equity);
  cfg["hetero_model"] = args.hetero_file.empty() ? json(nullptr) : json(args.hetero_file);
  return cfg;
}

int cmd_run_hetero(const Trace& trace, const std::string& algo, const CommonArgs& args) {
  HeteroModel model = hetero_model_from_json_file(args.hetero_file, trace.fleet.n_datacenters);
  HeteroRunConfig cfg;
  cfg.base.equity = make_equity(args, trace.fleet.n_datacenters);
  cfg.base.eta = args.eta;
  cfg.w_carbon = args.w_carbon;
  cfg.w_water = args.w_water;
  cfg.offline.tol = args.tol;
  cfg.offline.max_iters = args.max_iters;

  HeteroAlgorithm ha;
  if (algo == "eglb") ha = HeteroAlgorithm::Eglb;
  else if (algo == "eglb-off") ha = HeteroAlgorithm::EglbOffline;
  else if (algo == "energy") ha = HeteroAlgorithm::Energy;
  else if (algo == "carbon") ha = HeteroAlgorithm::Carbon;
  else if (algo == "water") ha = HeteroAlgorithm::Water;
  else if (algo == "c2" || algo == "all") {
    ha = HeteroAlgorithm::Weighted;
    if (algo == "c2") cfg.w_water = 0.0;
    cfg.w_energy = 1.0;
  } else if (algo == "nearest") ha = HeteroAlgorithm::Nearest;
  else throw ConfigError("algorithm '" + algo + "' is not available with --hetero");

  auto r = run_hetero(trace, model, cfg, ha);
  fs::create_directories(args.out_dir);
  write_schedule_csv(fs::path(args.out_dir) / "schedule.csv", r.decisions);
  write_models_csv(fs::path(args.out_dir) / "models.csv", r.model_assignment);

  json doc;
  doc["algorithm"] = algo;
  doc["trace_dir"] = args.trace_dir;
  doc["config"] = config_to_json(args, trace);
  doc["report"] = report_to_json(r.report);
  doc["hetero"] = {{"perf_cost_total", r.perf_cost_total},
                   {"operational_objective", r.operational_objective}};
  if (ha == HeteroAlgorithm::EglbOffline)
    doc["offline"] = {{"dual_bound", r.offline_dual},
                      {"gap_estimate", r.offline_gap},
                      {"iterations", r.offline_iterations}};
  doc["files"] = {{"schedule", "schedule.csv"}, {"models", "models.csv"}};
  write_file(fs::path(args.out_dir) / "report.json", doc.dump(2) + "\n");
  std::cout << to_text(r.report);
  return 0;
}

int cmd_run(const std::string& algo, const CommonArgs& args) {
  Trace trace = load(args.trace_dir);
  if (!args.hetero_file.empty()) {
    if (algo == "eglb-mpc")
      throw ConfigError("eglb-mpc is not available with --hetero");
    return cmd_run_hetero(trace, algo, args);
  }

  AlgoOutcome out = run_algorithm(trace, algo, args);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';

  fs::create_directories(args.out_dir);
  write_schedule_csv(fs::path(args.out_dir) / "schedule.csv", out.decisions);
  write_duals_csv(fs::path(args.out_dir) / "duals.csv", out.schedule);

  json doc;
  doc["algorithm"] = algo;
  doc["trace_dir"] = args.trace_dir;
  doc["config"] = config_to_json(args, trace);
  doc["report"] = report_to_json(out.report);
  if (out.has_offline)
    doc["offline"] = {{"dual_bound", out.offline_dual},
                      {"gap_estimate", out.offline_gap},
                      {"iterations", out.offline_iterations},
                      {"converged", out.offline_converged}};
  if (algo == "eglb") {
    EquitySpec equity = make_equity(args, trace.fleet.n_datacenters);
    auto k = constants(trace, equity, default_zbar_carbon(trace, equity),
                       default_zbar_water(trace, equity));
    auto dn = check_dual_norm(out.schedule, k, args.eta, trace.horizon());
    doc["bounds"] = {{"constants",
                      {{"B", k.B},
                       {"C", k.C},
                       {"D", k.D},
                       {"M", k.M},
                       {"theta_m", k.theta_m},
                       {"c_m", k.c_m},
                       {"w_m", k.w_m}}},
                     {"dual_norm",
                      {{"pass", dn.pass},
                       {"value", dn.value},
                       {"bound", dn.bound},
                       {"slack", dn.slack}}}};
    if (!dn.pass) {
      std::cerr << "dual-norm bound violated\n";
      write_file(fs::path(args.out_dir) / "report.json", doc.dump(2) + "\n");
      return 1;
    }
  }
  if (!out.warnings.empty()) doc["warnings"] = out.warnings;
  doc["files"] = {{"schedule", "schedule.csv"}, {"duals", "duals.csv"}};
  write_file(fs::path(args.out_dir) / "report.json", doc.dump(2) + "\n");
  std::cout << to_text(out.report);
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  Trace trace = load(args.trace_dir);
  const int n = trace.fleet.n_datacenters;
  EquitySpec equity = make_equity(args, n);

  std::vector<std::pair<std::string, AlgoOutcome>> results;
  for (const auto& algo : kAllAlgos) results.emplace_back(algo, run_algorithm(trace, algo, args));

  const std::vector<std::pair<std::string, std::function<double(const RunReport&)>>> rows = {
      {"energy_avg_usd", [](const RunReport& r) { return r.avg_energy_cost; }},
      {"water_avg_m3", [](const RunReport& r) { return r.water_avg; }},
      {"water_max_m3", [](const RunReport& r) { return r.water_max; }},
      {"water_max_over_avg", [](const RunReport& r) { return r.water_max_over_avg; }},
      {"carbon_avg_ton", [](const RunReport& r) { return r.carbon_avg; }},
      {"carbon_max_ton", [](const RunReport& r) { return r.carbon_max; }},
      {"carbon_max_over_avg", [](const RunReport& r) { return r.carbon_max_over_avg; }},
      {"objective_usd", [](const RunReport& r) { return r.objective; }},
  };

  std::ostringstream csv;
  csv << "metric";
  for (const auto& [name, _] : results) csv << ',' << name;
  csv << '\n';
  for (const auto& [metric, get] : rows) {
    csv << metric;
    for (const auto& [_, outcome] : results) csv << ',' << fmt(get(outcome.report));
    csv << '\n';
  }

  std::ostringstream txt;
  txt << "trace: " << args.trace_dir << "  slots: " << trace.horizon()
      << "  data centers: " << n << '\n';
  txt.setf(std::ios::fixed);
  txt << std::setprecision(3);
  txt << std::setw(20) << "metric";
  for (const auto& [name, _] : results) txt << std::setw(12) << name;
  txt << '\n';
  for (const auto& [metric, get] : rows) {
    txt << std::setw(20) << metric;
    for (const auto& [_, outcome] : results) txt << std::setw(12) << get(outcome.report);
    txt << '\n';
  }

  // Weighted baselines are meant to keep total footprints below the offline
  // optimum's; report whether the configured weights achieved that.
  const RunReport& off = results[6].second.report;
  const RunReport& c2 = results[3].second.report;
  const RunReport& all = results[4].second.report;
  txt << "c2 total carbon <= eglb-off: " << (c2.carbon_avg <= off.carbon_avg ? "yes" : "no")
      << '\n';
  txt << "all total carbon <= eglb-off: " << (all.carbon_avg <= off.carbon_avg ? "yes" : "no")
      << '\n';
  txt << "all total water <= eglb-off: " << (all.water_avg <= off.water_avg ? "yes" : "no")
      << '\n';

  fs::create_directories(args.out_dir);
  write_file(fs::path(args.out_dir) / "compare.csv", csv.str());
  write_file(fs::path(args.out_dir) / "compare.txt", txt.str());
  std::cout << txt.str();
  return 0;
}

struct GenArgs {
  std::string out_dir;
  std::string profile_file;
  int days = 18;
  int slots = 0;
  std::uint64_t seed = 1;
  std::string augment_from;
  int target_slots = 0;
  double perturbation = 0.25;
};

int cmd_gen(const GenArgs& g) {
  if (!g.augment_from.empty()) {
    if (g.target_slots <= 0) throw ConfigError("--target-slots is required with --augment-from");
    Trace base = load(g.augment_from);
    Trace out = augment(base, g.target_slots, g.perturbation, g.seed);
    save(out, g.out_dir);
    std::cout << "augmented " << base.horizon() << " -> " << out.horizon() << " slots into "
              << g.out_dir << '\n';
    return 0;
  }
  SynthProfile profile =
      g.profile_file.empty() ? skewed10_profile() : profile_from_json_file(g.profile_file);
  int slots = g.slots > 0 ? g.slots : g.days * 24;
  Trace trace = synth(profile, slots, g.seed);
  save(trace, g.out_dir);
  std::cout << "generated " << slots << " slots (" << profile.name << ", seed " << g.seed
            << ") into " << g.out_dir << '\n';
  return 0;
}

struct VerifyArgs {
  std::string run_dir;
  std::string offline_dir;
  std::string trace_override;
};

int cmd_verify_bound(const VerifyArgs& v) {
  auto read_json = [](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw ParseError(p.string() + ": cannot open");
    json j;
    in >> j;
    return j;
  };
  json doc = read_json(fs::path(v.run_dir) / "report.json");
  std::string algo = doc.at("algorithm").get<std::string>();
  std::string trace_dir =
      v.trace_override.empty() ? doc.at("trace_dir").get<std::string>() : v.trace_override;
  Trace trace = load(trace_dir);
  const int n = trace.fleet.n_datacenters;
  const int t_len = trace.horizon();

  EquitySpec equity;
  const auto& cfg = doc.at("config");
  equity.theta_carbon = cfg.at("theta_carbon").get<std::vector<double>>();
  equity.theta_water = cfg.at("theta_water").get<std::vector<double>>();
  equity.mu_carbon = cfg.at("mu_carbon").get<double>();
  equity.mu_water = cfg.at("mu_water").get<double>();
  equity.normalize_by_capacity = cfg.at("normalize_by_capacity").get<bool>();
  double eta = cfg.at("eta").get<double>();
  auto zbar_c = cfg.at("zbar_carbon").get<std::vector<double>>();
  auto zbar_w = cfg.at("zbar_water").get<std::vector<double>>();

  bool ok = true;
  auto fail = [&](const std::string& msg) {
    std::cerr << "FAIL: " << msg << '\n';
    ok = false;
  };

  auto decisions = read_schedule_csv(fs::path(v.run_dir) / "schedule.csv", n,
                                     trace.fleet.n_gateways, t_len);
  for (int t = 0; t < t_len; ++t) {
    try {
      check_decision(trace.fleet, trace.slots[t], decisions[t]);
    } catch (const StructuralError& e) {
      fail("slot " + std::to_string(t) + ": " + e.what());
      break;
    }
  }

  RunReport recomputed = report(decisions, trace, equity);
  double stored_obj = doc.at("report").at("objective").get<double>();
  if (std::abs(recomputed.objective - stored_obj) >
      1e-9 * std::max(1.0, std::abs(recomputed.objective)))
    fail("stored objective " + fmt(stored_obj) + " != recomputed " + fmt(recomputed.objective));

  if (algo == "eglb") {
    auto duals = read_duals_csv(fs::path(v.run_dir) / "duals.csv", n, t_len);
    auto scale = equity_scale(trace.fleet, equity);
    DualState state;
    state.eta = eta;
    state.kappa = duals.kappa[0];
    for (int t = 0; t < t_len; ++t) {
      auto carbon = carbon_footprint(trace.fleet, trace.slots[t], decisions[t]);
      auto water = water_footprint(trace.fleet, trace.slots[t], decisions[t]);
      for (int i = 0; i < n; ++i) {
        carbon[i] *= scale[i];
        water[i] *= scale[i];
      }
      state = update(state, subgradient(duals.z_c[t], duals.z_w[t], carbon, water));
      if (state.kappa != duals.kappa[t + 1]) {
        fail("dual trajectory does not satisfy the update recurrence at slot " +
             std::to_string(t));
        break;
      }
    }
    auto k = constants(trace, equity, zbar_c, zbar_w);
    auto dn = check_dual_norm(duals.kappa[t_len], k, eta, t_len);
    if (!dn.pass)
      fail("dual-norm bound violated: |kappa| = " + fmt(dn.value) + " > " + fmt(dn.bound));
    else
      std::cout << "dual-norm bound: |kappa| = " << fmt(dn.value) << " <= " << fmt(dn.bound)
                << '\n';

    if (!v.offline_dir.empty()) {
      json off = read_json(fs::path(v.offline_dir) / "report.json");
      if (off.at("trace_dir").get<std::string>() != doc.at("trace_dir").get<std::string>())
        fail("offline run used a different trace");
      double offline_obj = off.at("report").at("objective").get<double>();
      auto t1 = check_cost_bound(recomputed.objective, offline_obj, k, eta, t_len);
      if (!t1.pass)
        fail("online/offline cost bound violated: " + fmt(t1.value) + " > " + fmt(t1.bound));
      else
        std::cout << "cost bound: online " << fmt(t1.value) << " <= " << fmt(t1.bound) << '\n';
    }
  }

  if (ok) std::cout << "verify-bound: all checks passed\n";
  return ok ? 0 : 1;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"equity-aware geographical load balancing simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string algo;

  auto add_common = [&](CLI::App* cmd, bool with_algo) {
    cmd->add_option("--trace", args.trace_dir, "trace directory")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    if (with_algo)
      cmd->add_option("--algo", algo, "one of: eglb, eglb-off, eglb-mpc, energy, carbon, water, "
                                      "c2, all, nearest")
          ->required();
    cmd->add_option("--eta", args.eta, "dual learning rate");
    cmd->add_option("--mu-c", args.mu_c, "carbon equity weight, USD/ton");
    cmd->add_option("--mu-w", args.mu_w, "water equity weight, USD/m3");
    cmd->add_option("--theta-c", args.theta_c, "carbon impact slope");
    cmd->add_option("--theta-w", args.theta_w, "water impact slope");
    cmd->add_flag("--normalize-by-capacity", args.normalize,
                  "divide footprints by capacity inside the impact functions");
    cmd->add_option("--window", args.window, "MPC lookahead in slots");
    cmd->add_option("--w-carbon", args.w_carbon, "carbon weight for c2/all");
    cmd->add_option("--w-water", args.w_water, "water weight for all");
    cmd->add_option("--tol", args.tol, "offline relative gap tolerance");
    cmd->add_option("--max-iters", args.max_iters, "offline iteration cap");
  };

  auto* run_cmd = app.add_subcommand("run", "run one algorithm on a trace");
  add_common(run_cmd, true);
  run_cmd->add_option("--hetero", args.hetero_file, "heterogeneous model catalog (JSON)");

  auto* compare_cmd = app.add_subcommand("compare", "run every algorithm and tabulate");
  add_common(compare_cmd, false);

  GenArgs gen_args;
  auto* gen_cmd = app.add_subcommand("gen", "generate or extend a synthetic trace");
  gen_cmd->add_option("--out", gen_args.out_dir, "output trace directory")->required();
  gen_cmd->add_option("--profile", gen_args.profile_file, "profile JSON (default: built-in)");
  gen_cmd->add_option("--days", gen_args.days, "days of hourly slots");
  gen_cmd->add_option("--slots", gen_args.slots, "slot count (overrides --days)");
  gen_cmd->add_option("--seed", gen_args.seed, "PRNG seed");
  gen_cmd->add_option("--augment-from", gen_args.augment_from,
                      "extend an existing trace instead of generating");
  gen_cmd->add_option("--target-slots", gen_args.target_slots, "length after augmentation");
  gen_cmd->add_option("--perturbation", gen_args.perturbation,
                      "multiplicative workload perturbation for augmentation");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify-bound", "re-check bounds on stored artifacts");
  verify_cmd->add_option("--run", verify_args.run_dir, "run output directory")->required();
  verify_cmd->add_option("--offline-run", verify_args.offline_dir,
                         "offline run to check the cost bound against");
  verify_cmd->add_option("--trace", verify_args.trace_override, "override the stored trace path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(algo, args);
    if (compare_cmd->parsed()) return cmd_compare(args);
    if (gen_cmd->parsed()) return cmd_gen(gen_args);
    if (verify_cmd->parsed()) return cmd_verify_bound(verify_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace eglb::cli
