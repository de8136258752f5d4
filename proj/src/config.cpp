#include "spinkick/config.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace spinkick {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& block, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw std::invalid_argument("unknown config key '" + key + "' in " + block);
}

}  // namespace

ExperimentConfig config_from_json_string(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  check_keys(j, "config root", {"geometry", "physics", "protocol", "analysis", "output", "engine"});

  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    check_keys(g, "geometry", {"kind", "chain_len", "rungs", "probe", "attach_1", "attach_2"});
    if (g.contains("kind")) cfg.geometry = g["kind"].get<std::string>();
    if (g.contains("chain_len")) cfg.chain_len = g["chain_len"].get<int>();
    if (g.contains("probe")) cfg.probe = g["probe"].get<int>();
    if (g.contains("attach_1")) cfg.attach_1 = g["attach_1"].get<int>();
    if (g.contains("attach_2")) cfg.attach_2 = g["attach_2"].get<int>();
    if (g.contains("rungs")) {
      cfg.rungs.clear();
      for (const json& jr : g["rungs"]) {
        check_keys(jr, "geometry.rungs[]", {"distance", "site_a", "site_b", "style"});
        RungConfig r;
        if (jr.contains("distance")) r.distance = jr["distance"].get<int>();
        if (jr.contains("site_a")) r.site_a = jr["site_a"].get<int>();
        if (jr.contains("site_b")) r.site_b = jr["site_b"].get<int>();
        if (jr.contains("style")) r.style = jr["style"].get<std::string>();
        cfg.rungs.push_back(r);
      }
    }
  }
  if (j.contains("physics")) {
    const json& p = j["physics"];
    check_keys(p, "physics", {"chain_coupling", "rung_ratio", "lambda", "tau", "steps"});
    if (p.contains("chain_coupling")) cfg.chain_coupling = p["chain_coupling"].get<double>();
    if (p.contains("rung_ratio")) cfg.rung_ratio = p["rung_ratio"].get<double>();
    if (p.contains("lambda")) {
      const auto v = p["lambda"].get<std::vector<double>>();
      if (v.size() != 3) throw std::invalid_argument("physics.lambda must have 3 components");
      cfg.lambda = {v[0], v[1], v[2]};
    }
    if (p.contains("tau")) cfg.tau = p["tau"].get<double>();
    if (p.contains("steps")) cfg.steps = p["steps"].get<int>();
  }
  if (j.contains("protocol")) {
    const json& p = j["protocol"];
    check_keys(p, "protocol", {"axis", "cycles", "realizations", "seed", "estimator"});
    if (p.contains("axis")) cfg.axis = p["axis"].get<std::string>();
    if (p.contains("cycles")) cfg.cycles = p["cycles"].get<int>();
    if (p.contains("realizations")) cfg.realizations = p["realizations"].get<int>();
    if (p.contains("seed")) cfg.seed = p["seed"].get<std::uint64_t>();
    if (p.contains("estimator")) cfg.estimator = p["estimator"].get<std::string>();
  }
  if (j.contains("analysis")) {
    const json& a = j["analysis"];
    check_keys(a, "analysis", {"slope_start_time", "window_fraction", "tolerance", "onset_band"});
    if (a.contains("slope_start_time")) cfg.slope_start_time = a["slope_start_time"].get<double>();
    if (a.contains("window_fraction")) cfg.window_fraction = a["window_fraction"].get<double>();
    if (a.contains("tolerance")) cfg.tolerance = a["tolerance"].get<double>();
    if (a.contains("onset_band")) cfg.onset_band = a["onset_band"].get<double>();
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"directory", "emit_profile"});
    if (o.contains("directory")) cfg.out_dir = o["directory"].get<std::string>();
    if (o.contains("emit_profile")) cfg.emit_profile = o["emit_profile"].get<bool>();
  }
  if (j.contains("engine")) {
    const json& e = j["engine"];
    check_keys(e, "engine", {"threads", "max_state_bytes", "dense_oracle_max_qubits"});
    if (e.contains("threads")) cfg.threads = e["threads"].get<int>();
    if (e.contains("max_state_bytes")) cfg.max_state_bytes = e["max_state_bytes"].get<std::uint64_t>();
    if (e.contains("dense_oracle_max_qubits"))
      cfg.dense_oracle_max_qubits = e["dense_oracle_max_qubits"].get<int>();
  }
  return cfg;
}

std::string config_to_json_string(const ExperimentConfig& cfg) {
  json rungs = json::array();
  for (const RungConfig& r : cfg.rungs)
    rungs.push_back({{"distance", r.distance},
                     {"site_a", r.site_a},
                     {"site_b", r.site_b},
                     {"style", r.style}});
  json j = {
      {"geometry",
       {{"kind", cfg.geometry},
        {"chain_len", cfg.chain_len},
        {"rungs", rungs},
        {"probe", cfg.probe},
        {"attach_1", cfg.attach_1},
        {"attach_2", cfg.attach_2}}},
      {"physics",
       {{"chain_coupling", cfg.chain_coupling},
        {"rung_ratio", cfg.rung_ratio},
        {"lambda", cfg.lambda},
        {"tau", cfg.tau},
        {"steps", cfg.steps}}},
      {"protocol",
       {{"axis", cfg.axis},
        {"cycles", cfg.cycles},
        {"realizations", cfg.realizations},
        {"seed", cfg.seed},
        {"estimator", cfg.estimator}}},
      {"analysis",
       {{"slope_start_time", cfg.slope_start_time},
        {"window_fraction", cfg.window_fraction},
        {"tolerance", cfg.tolerance},
        {"onset_band", cfg.onset_band}}},
      {"output", {{"directory", cfg.out_dir}, {"emit_profile", cfg.emit_profile}}},
      {"engine",
       {{"threads", cfg.threads},
        {"max_state_bytes", cfg.max_state_bytes},
        {"dense_oracle_max_qubits", cfg.dense_oracle_max_qubits}}},
  };
  return j.dump(2);
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> problems;
  auto bad = [&](const std::string& msg) { problems.push_back(msg); };

  if (cfg.geometry != "folded_chain" && cfg.geometry != "scattering")
    bad("geometry.kind must be 'folded_chain' or 'scattering'");
  if (cfg.chain_len < 4) bad("geometry.chain_len must be >= 4");
  if (cfg.geometry == "folded_chain") {
    for (const RungConfig& r : cfg.rungs) {
      if (r.style != "direct" && r.style != "midsite") bad("rung style must be 'direct' or 'midsite'");
      if (r.distance < 0 && (r.site_a < 0 || r.site_b < 0))
        bad("each rung needs a distance or an explicit (site_a, site_b) pair");
    }
  }
  if (!(cfg.tau > 0.0)) bad("physics.tau must be > 0");
  if (cfg.steps < 0) bad("physics.steps must be >= 0");
  if (!(cfg.rung_ratio >= 0.0)) bad("physics.rung_ratio must be >= 0");
  if (cfg.axis != "x" && cfg.axis != "y" && cfg.axis != "z") bad("protocol.axis must be x, y or z");
  if (cfg.cycles < 0) bad("protocol.cycles must be >= 0");
  if (cfg.realizations < 1) bad("protocol.realizations must be >= 1");
  if (cfg.estimator != "probe-state" && cfg.estimator != "probe-difference")
    bad("protocol.estimator must be 'probe-state' or 'probe-difference'");
  if (cfg.slope_start_time < 0.0) bad("analysis.slope_start_time must be >= 0");
  if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0))
    bad("analysis.window_fraction must be in (0, 1]");
  if (!(cfg.tolerance > 0.0)) bad("analysis.tolerance must be > 0");
  if (!(cfg.onset_band > 0.0)) bad("analysis.onset_band must be > 0");
  if (cfg.threads < 0) bad("engine.threads must be >= 0");
  return problems;
}

void require_valid(const ExperimentConfig& cfg) {
  const auto problems = validate_config(cfg);
  if (problems.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& p : problems) msg += " [" + p + "]";
  throw std::invalid_argument(msg);
}

LatticeSpec build_lattice(const ExperimentConfig& cfg) {
  require_valid(cfg);
  if (cfg.geometry == "scattering") {
    const int mid = cfg.chain_len / 2;
    const int a1 = cfg.attach_1 < 0 ? mid : cfg.attach_1;
    const int a2 = cfg.attach_2 < 0 ? mid : cfg.attach_2;
    return build_scattering_geometry(cfg.chain_len, a1, a2);
  }
  std::vector<std::pair<int, int>> direct;
  std::vector<std::pair<int, int>> midsite;
  for (const RungConfig& r : cfg.rungs) {
    int a = r.site_a, b = r.site_b;
    if (a < 0 || b < 0) {
      a = r.distance;
      b = cfg.chain_len - 1 - r.distance;
    }
    (r.style == "midsite" ? midsite : direct).emplace_back(a, b);
  }
  if (midsite.empty()) return build_folded_chain(cfg.chain_len, direct, RungStyle::DirectBond, cfg.probe);
  if (direct.empty()) return build_folded_chain(cfg.chain_len, midsite, RungStyle::MidSite, cfg.probe);
  throw std::invalid_argument("mixed direct/midsite rung styles in one lattice are not supported");
}

TrotterProgram build_program(const ExperimentConfig& cfg, const LatticeSpec& lattice) {
  FloquetSchedule sched{cfg.tau, cfg.steps};
  const InteractionVector vec{cfg.lambda[0], cfg.lambda[1], cfg.lambda[2]};
  return compile_program(lattice, sched, cfg.chain_coupling, cfg.rung_ratio * cfg.chain_coupling, vec);
}

TypicalityProtocol build_protocol(const ExperimentConfig& cfg) {
  TypicalityProtocol protocol;
  protocol.cycles = cfg.cycles;
  protocol.realizations = cfg.realizations;
  protocol.master_seed = cfg.seed;
  protocol.estimator =
      cfg.estimator == "probe-difference" ? EstimatorKind::ProbeDifference : EstimatorKind::ProbeState;
  return protocol;
}

Axis config_axis(const ExperimentConfig& cfg) { return axis_from_name(cfg.axis[0]); }

int slope_start_step_for(const ExperimentConfig& cfg) {
  int start = std::max(1, static_cast<int>(std::ceil(cfg.slope_start_time / cfg.tau - 1e-9)));
  // keep at least two slopes on short grids
  while (start > 1 && cfg.steps - start < 2) --start;
  return start;
}

void fill_meta(const ExperimentConfig& cfg, ExperimentMeta& meta) {
  meta.rung_vec = {cfg.lambda[0], cfg.lambda[1], cfg.lambda[2]};
  meta.rung_coupling = cfg.rung_ratio * cfg.chain_coupling;
  meta.chain_coupling = cfg.chain_coupling;
}

}  // namespace spinkick
