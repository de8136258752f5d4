// spinkick: desk-scale experiments on superdiffusion breakdown in kicked
// Heisenberg chains with tunable 2D rung interactions.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spinkick/analysis.hpp"
#include "spinkick/config.hpp"
#include "spinkick/correlator.hpp"
#include "spinkick/engine.hpp"
#include "spinkick/errors.hpp"
#include "spinkick/output.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace spinkick;

namespace {

// ---------------------------------------------------------------------------
// small helpers

std::string lambda_label(const std::array<double, 3>& lambda) {
  std::string out;
  for (double v : lambda) {
    if (v == std::floor(v) && v >= 0 && v <= 9) {
      out += static_cast<char>('0' + static_cast<int>(v));
    } else {
      if (!out.empty()) out += '_';
      out += format_double(v);
    }
  }
  return out;
}

std::array<double, 3> parse_lambda(const std::string& text) {
  std::array<double, 3> out{};
  std::stringstream ss(text);
  std::string part;
  int k = 0;
  while (std::getline(ss, part, ',')) {
    if (k >= 3) throw std::invalid_argument("lambda needs exactly 3 comma-separated components");
    out[k++] = std::stod(part);
  }
  if (k != 3) throw std::invalid_argument("lambda needs exactly 3 comma-separated components");
  return out;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(now).count());
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

fs::path output_root(const ExperimentConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv("SPINKICK_OUTPUT_ROOT")) return env;
  return "runs";
}

void check_memory_budget(const ExperimentConfig& cfg, int num_sites) {
  const int states = cfg.estimator == "probe-difference" ? 2 : 1;
  const std::uint64_t need = state_bytes(num_sites) * states;
  if (need > cfg.max_state_bytes)
    throw ResourceLimitError(
        "statevector needs " + std::to_string(need) + " bytes (" + std::to_string(num_sites) +
        " qubits at 16 B x 2^n x " + std::to_string(states) +
        " states/realization), over engine.max_state_bytes = " + std::to_string(cfg.max_state_bytes));
}

json manifest_base(const std::string& command, const ExperimentConfig& cfg, double wall_seconds) {
  const std::string cfg_json = config_to_json_string(cfg);
  return json{{"version", kVersion},
              {"command", command},
              {"config", json::parse(cfg_json)},
              {"config_fnv1a", fnv1a(cfg_json)},
              {"master_seed", cfg.seed},
              {"threads", thread_count()},
              {"wall_seconds", wall_seconds}};
}

// ---------------------------------------------------------------------------
// one simulate-style run (shared by simulate / sweep / tau-study)

struct RunResult {
  CorrelationSeries series;
  ExponentSeries exponents;
  TransportClass transport;
  int onset = 0;
};

RunResult run_one(const ExperimentConfig& cfg) {
  require_valid(cfg);
  const LatticeSpec lattice = build_lattice(cfg);
  check_memory_budget(cfg, lattice.num_sites);
  const TrotterProgram prog = build_program(cfg, lattice);

  RunResult r;
  r.series = run_autocorrelation(lattice, prog, config_axis(cfg), build_protocol(cfg));
  fill_meta(cfg, r.series.meta);
  r.exponents = running_average(local_exponents(r.series, slope_start_step_for(cfg)));
  const Window window = trailing_window(static_cast<int>(r.exponents.local.size()), cfg.window_fraction);
  r.transport = classify(r.exponents, window, cfg.tolerance);
  r.onset = breakdown_onset(r.exponents, cfg.onset_band);
  return r;
}

json run_summary(const ExperimentConfig& cfg, const RunResult& r) {
  return json{{"lambda", cfg.lambda},
              {"rung_ratio", cfg.rung_ratio},
              {"axis", cfg.axis},
              {"window_mean", r.transport.window_mean},
              {"deviation", r.transport.window_mean + 2.0 / 3.0},
              {"transport", transport_label_name(r.transport.label)},
              {"onset_step", r.onset}};
}

void write_run_artifacts(const fs::path& dir, const ExperimentConfig& cfg, const RunResult& r) {
  write_correlations_csv(dir / "correlations.csv", r.series);
  write_exponents_csv(dir / "exponents.csv", r.exponents);
  if (cfg.emit_profile) {
    const LatticeSpec lattice = build_lattice(cfg);
    const TrotterProgram prog = build_program(cfg, lattice);
    SpatialProfile profile = run_spatial_profile(lattice, prog, build_protocol(cfg));
    fill_meta(cfg, profile.meta);
    write_profile_csv(dir / "profile.csv", profile);
  }
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_simulate(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_one(cfg);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const fs::path dir = output_root(cfg) /
                       ("simulate-l" + lambda_label(cfg.lambda) + "-" + timestamp());
  write_run_artifacts(dir, cfg, r);
  json manifest = manifest_base("simulate", cfg, wall);
  manifest["result"] = run_summary(cfg, r);
  write_text_file(dir / "manifest.json", manifest.dump(2));

  std::cout << "simulate: lambda=(" << lambda_label(cfg.lambda) << ") ratio=" << cfg.rung_ratio
            << " -> " << transport_label_name(r.transport.label)
            << " (window mean " << format_double(r.transport.window_mean) << ") artifacts in "
            << dir.string() << "\n";
  return 0;
}

int cmd_scatter(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.geometry = "scattering";
  require_valid(cfg);

  struct Case {
    std::string name;
    std::array<double, 3> lambda;
    double ratio;
  };
  const std::vector<Case> cases = {
      {"uncoupled", {0, 0, 0}, 0.0},
      {"lam-110", {1, 1, 0}, cfg.rung_ratio},
      {"lam-001", {0, 0, 1}, cfg.rung_ratio},
  };

  const fs::path root = output_root(cfg) / ("scatter-" + timestamp());
  json cases_json = json::array();
  const auto t0 = std::chrono::steady_clock::now();
  for (const Case& c : cases) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.lambda = c.lambda;
    run_cfg.rung_ratio = c.ratio;
    const LatticeSpec lattice = build_lattice(run_cfg);
    check_memory_budget(run_cfg, lattice.num_sites);
    const TrotterProgram prog = build_program(run_cfg, lattice);
    SpatialProfile profile = run_spatial_profile(lattice, prog, build_protocol(run_cfg));
    fill_meta(run_cfg, profile.meta);
    const ScatteringSeries scat = scattering_coefficients(profile, lattice);

    const fs::path dir = root / c.name;
    write_profile_csv(dir / "profile.csv", profile);
    write_scattering_csv(dir / "scattering.csv", scat);
    write_text_file(dir / "lattice.json", to_json_string(lattice));

    double max_cross = 0.0, max_same = 0.0;
    for (std::size_t i = 0; i < scat.trans_cross.size(); ++i) {
      max_cross = std::max(max_cross, scat.trans_cross[i]);
      max_same = std::max(max_same, scat.trans_same[i]);
    }
    cases_json.push_back({{"case", c.name},
                          {"lambda", c.lambda},
                          {"rung_ratio", c.ratio},
                          {"max_T_cross", max_cross},
                          {"max_T_same", max_same}});
    std::cout << "scatter[" << c.name << "]: max |T_cross| = " << format_double(max_cross)
              << ", max |T_same| = " << format_double(max_same) << "\n";
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = manifest_base("scatter", cfg, wall);
  manifest["cases"] = cases_json;
  write_text_file(root / "manifest.json", manifest.dump(2));
  std::cout << "scatter: artifacts in " << root.string() << "\n";
  return 0;
}

int cmd_sweep(const ExperimentConfig& base, const std::vector<double>& ratios,
              const std::vector<std::string>& lambda_strings) {
  if (ratios.empty()) throw std::invalid_argument("sweep needs a non-empty --ratios list");
  for (double r : ratios)
    if (!(r > 0.0)) throw std::invalid_argument("sweep ratios must be positive");

  std::vector<std::array<double, 3>> lambdas;
  if (lambda_strings.empty()) {
    lambdas = {{0, 0, 1}, {1, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
  } else {
    for (const auto& s : lambda_strings) lambdas.push_back(parse_lambda(s));
  }

  const fs::path root = output_root(base) / ("sweep-" + timestamp());
  const auto t0 = std::chrono::steady_clock::now();

  json runs = json::array();
  // ranking needs the runs of one ratio together
  for (double ratio : ratios) {
    std::vector<ExponentSeries> series;
    std::vector<std::array<double, 3>> order;
    for (const auto& lambda : lambdas) {
      ExperimentConfig cfg = base;
      cfg.lambda = lambda;
      cfg.rung_ratio = ratio;
      const RunResult r = run_one(cfg);
      const fs::path dir = root / ("l" + lambda_label(lambda) + "-r" + format_double(ratio));
      write_run_artifacts(dir, cfg, r);
      json manifest = manifest_base("sweep", cfg, 0.0);
      manifest["result"] = run_summary(cfg, r);
      write_text_file(dir / "manifest.json", manifest.dump(2));
      runs.push_back(run_summary(cfg, r));
      series.push_back(r.exponents);
      order.push_back(lambda);
      std::cout << "sweep: lambda=" << lambda_label(lambda) << " ratio=" << format_double(ratio)
                << " -> " << transport_label_name(r.transport.label) << " (dev "
                << format_double(r.transport.window_mean + 2.0 / 3.0) << ")\n";
    }
    const Window window =
        trailing_window(static_cast<int>(series.front().local.size()), base.window_fraction);
    json ranking = json::array();
    for (const ResilienceEntry& e : resilience_rank(series, window))
      ranking.push_back({{"lambda", order[e.input_index]},
                         {"window_mean", e.window_mean},
                         {"deviation", e.deviation}});
    runs.push_back({{"ranking_for_ratio", ratio}, {"most_resilient_first", ranking}});
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = manifest_base("sweep", base, wall);
  manifest["ratios"] = ratios;
  manifest["runs"] = runs;
  write_text_file(root / "report.json", manifest.dump(2));
  std::cout << "sweep: report in " << (root / "report.json").string() << "\n";
  return 0;
}

int cmd_tau_study(const ExperimentConfig& base, const std::vector<double>& taus) {
  if (taus.empty()) throw std::invalid_argument("tau-study needs a non-empty --taus list");
  for (double t : taus)
    if (!(t > 0.0)) throw std::invalid_argument("tau values must be positive");

  const double total_time = base.tau * base.steps;
  const fs::path root = output_root(base) / ("tau-study-" + timestamp());
  const auto t0 = std::chrono::steady_clock::now();

  json entries = json::array();
  for (double tau : taus) {
    ExperimentConfig cfg = base;
    cfg.tau = tau;
    cfg.steps = std::max(2, static_cast<int>(std::llround(total_time / tau)));
    const RunResult r = run_one(cfg);
    const fs::path dir = root / ("tau-" + format_double(tau));
    write_run_artifacts(dir, cfg, r);

    // flattening metric: mean local slope over the trailing quarter in time
    const Window late = trailing_window(static_cast<int>(r.exponents.local.size()), 0.25);
    double slope_sum = 0.0;
    int slope_count = 0;
    for (int i = late.begin; i < late.end; ++i)
      if (r.exponents.valid[i]) {
        slope_sum += r.exponents.local[i];
        ++slope_count;
      }
    const double late_slope = slope_count ? slope_sum / slope_count : 0.0;

    json e = run_summary(cfg, r);
    e["tau"] = tau;
    e["steps"] = cfg.steps;
    e["late_local_slope_mean"] = late_slope;
    entries.push_back(e);
    std::cout << "tau-study: tau=" << format_double(tau) << " steps=" << cfg.steps << " -> dev "
              << format_double(r.transport.window_mean + 2.0 / 3.0) << ", late slope "
              << format_double(late_slope) << "\n";
  }

  json comparisons = json::array();
  for (std::size_t i = 0; i + 1 < entries.size(); ++i)
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const double di = entries[i]["deviation"].get<double>();
      const double dj = entries[j]["deviation"].get<double>();
      comparisons.push_back({{"tau_a", entries[i]["tau"]},
                             {"tau_b", entries[j]["tau"]},
                             {"same_breakdown_direction", di * dj >= 0.0},
                             {"flatter", std::abs(entries[i]["late_local_slope_mean"].get<double>()) <
                                                 std::abs(entries[j]["late_local_slope_mean"].get<double>())
                                             ? entries[i]["tau"]
                                             : entries[j]["tau"]}});
    }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = manifest_base("tau-study", base, wall);
  manifest["total_evolution_time"] = total_time;
  manifest["entries"] = entries;
  manifest["comparisons"] = comparisons;
  write_text_file(root / "report.json", manifest.dump(2));
  std::cout << "tau-study: report in " << (root / "report.json").string() << "\n";
  return 0;
}

int cmd_cycle_study(const ExperimentConfig& base, const std::vector<int>& cycle_list, int runs) {
  if (cycle_list.empty()) throw std::invalid_argument("cycle-study needs a non-empty --cycles-list");
  for (int c : cycle_list)
    if (c < 0) throw std::invalid_argument("cycle counts must be >= 0");
  if (runs < 2) throw std::invalid_argument("cycle-study needs at least 2 runs per cycle count");

  require_valid(base);
  const LatticeSpec lattice = build_lattice(base);
  check_memory_budget(base, lattice.num_sites);
  const TrotterProgram prog = build_program(base, lattice);
  const fs::path root = output_root(base) / ("cycle-study-" + timestamp());
  const auto t0 = std::chrono::steady_clock::now();

  json entries = json::array();
  for (int c : cycle_list) {
    // independent single-realization runs, each with its own derived seed
    Eigen::MatrixXd samples(runs, base.steps + 1);
    for (int r = 0; r < runs; ++r) {
      TypicalityProtocol protocol = build_protocol(base);
      protocol.cycles = c;
      protocol.realizations = 1;
      protocol.master_seed = derive_seed(derive_seed(base.seed, static_cast<std::uint64_t>(c)),
                                         static_cast<std::uint64_t>(r));
      const CorrelationSeries one = run_autocorrelation(lattice, prog, config_axis(base), protocol);
      for (int s = 0; s <= base.steps; ++s) samples(r, s) = one.mean[s];
    }
    std::vector<double> sem(base.steps + 1, 0.0);
    for (int s = 0; s <= base.steps; ++s) {
      const double mean = samples.col(s).mean();
      double var = 0.0;
      for (int r = 0; r < runs; ++r) var += (samples(r, s) - mean) * (samples(r, s) - mean);
      sem[s] = std::sqrt(var / (runs - 1)) / std::sqrt(static_cast<double>(runs));
    }
    // late-time figure: mean standard error over the trailing third of steps
    const int from = base.steps + 1 - std::max(1, (base.steps + 1) / 3);
    double late = 0.0;
    for (int s = from; s <= base.steps; ++s) late += sem[s];
    late /= (base.steps + 1 - from);

    std::ostringstream csv;
    csv << "step,time,stderr\n";
    for (int s = 0; s <= base.steps; ++s)
      csv << s << ',' << format_double(s * base.tau) << ',' << format_double(sem[s]) << '\n';
    write_text_file(root / ("stderr-c" + std::to_string(c) + ".csv"), csv.str());

    entries.push_back({{"cycles", c}, {"runs", runs}, {"late_time_stderr", late}});
    std::cout << "cycle-study: c=" << c << " late-time stderr " << format_double(late) << "\n";
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = manifest_base("cycle-study", base, wall);
  manifest["entries"] = entries;
  write_text_file(root / "report.json", manifest.dump(2));
  std::cout << "cycle-study: report in " << (root / "report.json").string() << "\n";
  return 0;
}

int cmd_oracle_check(const ExperimentConfig& cfg) {
  require_valid(cfg);
  const LatticeSpec lattice = build_lattice(cfg);
  if (lattice.num_sites > cfg.dense_oracle_max_qubits)
    throw ResourceLimitError("oracle-check needs <= " + std::to_string(cfg.dense_oracle_max_qubits) +
                             " qubits, geometry has " + std::to_string(lattice.num_sites));
  const TrotterProgram prog = build_program(cfg, lattice);
  const Axis axis = config_axis(cfg);

  const std::vector<double> exact = dense_trace_correlator(lattice, prog, lattice.probe,
                                                           lattice.probe, axis,
                                                           cfg.dense_oracle_max_qubits);
  const CorrelationSeries est = run_autocorrelation(lattice, prog, axis, build_protocol(cfg));

  double worst_excess = 0.0;
  int worst_step = -1;
  for (std::size_t s = 0; s < exact.size(); ++s) {
    const double bound = std::max(3.0 * est.sem[s], 0.02);
    const double excess = std::abs(est.mean[s] - exact[s]) - bound;
    if (excess > worst_excess) {
      worst_excess = excess;
      worst_step = static_cast<int>(s);
    }
  }

  json out = {{"qubits", lattice.num_sites},
              {"realizations", cfg.realizations},
              {"steps", prog.schedule.steps},
              {"pass", worst_step < 0},
              {"worst_step", worst_step},
              {"worst_excess", worst_excess}};
  std::cout << out.dump(2) << "\n";
  if (worst_step >= 0)
    throw NumericError("estimator disagrees with the dense oracle at step " +
                       std::to_string(worst_step));
  return 0;
}

// ---------------------------------------------------------------------------
// option plumbing

struct Overrides {
  CLI::Option* opt(const std::string& name) const {
    auto it = options.find(name);
    return it == options.end() ? nullptr : it->second;
  }
  std::map<std::string, CLI::Option*> options;

  std::string config_path, out, lambda_str, axis, estimator, geometry, rung_style;
  int chain_len = 0, steps = 0, cycles = 0, realizations = 0, probe = 0, threads = 0,
      attach_1 = 0, attach_2 = 0;
  double slope_start = 0;
  double tau = 0, ratio = 0, window_fraction = 0;
  std::uint64_t seed = 0, max_state_bytes = 0;
  std::vector<int> rung_distances;
  bool emit_profile = false;
};

void register_common(CLI::App* app, Overrides& ov) {
  auto& o = ov.options;
  o["config"] = app->add_option("--config", ov.config_path, "JSON config file");
  o["out"] = app->add_option("--out,-o", ov.out, "output directory root");
  o["chain_len"] = app->add_option("--chain-len,-n", ov.chain_len, "chain length (sites per chain)");
  o["steps"] = app->add_option("--steps,-N", ov.steps, "Floquet steps");
  o["tau"] = app->add_option("--tau", ov.tau, "kicking period");
  o["ratio"] = app->add_option("--ratio", ov.ratio, "J_perp / J");
  o["lambda"] = app->add_option("--lambda", ov.lambda_str, "rung interaction vector, e.g. 0,0,1");
  o["axis"] = app->add_option("--axis", ov.axis, "measurement axis x|y|z");
  o["cycles"] = app->add_option("--cycles,-c", ov.cycles, "random-state preparation cycles");
  o["realizations"] = app->add_option("--realizations,-M", ov.realizations, "typicality realizations");
  o["seed"] = app->add_option("--seed", ov.seed, "master seed");
  o["estimator"] =
      app->add_option("--estimator", ov.estimator, "probe-state or probe-difference");
  o["geometry"] = app->add_option("--geometry", ov.geometry, "folded_chain or scattering");
  o["rung_distance"] = app->add_option("--rung-distance", ov.rung_distances,
                                       "fold distance(s) of the rung attachment(s) from the probe");
  o["rung_style"] = app->add_option("--rung-style", ov.rung_style, "direct or midsite");
  o["probe"] = app->add_option("--probe", ov.probe, "probe site");
  o["attach_1"] = app->add_option("--attach1", ov.attach_1, "scattering attachment on chain 1");
  o["attach_2"] = app->add_option("--attach2", ov.attach_2, "scattering attachment on chain 2");
  o["threads"] = app->add_option("--threads", ov.threads, "worker threads (0 = hardware)");
  o["slope_start"] = app->add_option("--slope-start", ov.slope_start,
                                     "first slope's left time (skips the early transient)");
  o["window_fraction"] =
      app->add_option("--window-fraction", ov.window_fraction, "trailing analysis window fraction");
  o["max_state_bytes"] =
      app->add_option("--max-state-bytes", ov.max_state_bytes, "statevector memory cap per state");
  o["emit_profile"] = app->add_flag("--emit-profile", ov.emit_profile, "also write profile.csv");
}

ExperimentConfig finalize_config(const ExperimentConfig& defaults, const Overrides& ov) {
  ExperimentConfig cfg = defaults;
  if (ov.opt("config")->count()) {
    std::ifstream in(ov.config_path);
    if (!in) throw std::invalid_argument("cannot read config file: " + ov.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = config_from_json_string(buf.str());
    // command-specific defaults that the file did not mention stay intact
    if (defaults.geometry == "scattering" && buf.str().find("\"kind\"") == std::string::npos)
      cfg.geometry = defaults.geometry;
  }
  auto set_if = [&](const char* name, auto& dst, const auto& src) {
    if (ov.opt(name) && ov.opt(name)->count()) dst = src;
  };
  set_if("out", cfg.out_dir, ov.out);
  set_if("chain_len", cfg.chain_len, ov.chain_len);
  set_if("steps", cfg.steps, ov.steps);
  set_if("tau", cfg.tau, ov.tau);
  set_if("ratio", cfg.rung_ratio, ov.ratio);
  if (ov.opt("lambda")->count()) cfg.lambda = parse_lambda(ov.lambda_str);
  set_if("axis", cfg.axis, ov.axis);
  set_if("cycles", cfg.cycles, ov.cycles);
  set_if("realizations", cfg.realizations, ov.realizations);
  set_if("seed", cfg.seed, ov.seed);
  set_if("estimator", cfg.estimator, ov.estimator);
  set_if("geometry", cfg.geometry, ov.geometry);
  set_if("probe", cfg.probe, ov.probe);
  set_if("attach_1", cfg.attach_1, ov.attach_1);
  set_if("attach_2", cfg.attach_2, ov.attach_2);
  set_if("threads", cfg.threads, ov.threads);
  set_if("slope_start", cfg.slope_start_time, ov.slope_start);
  set_if("window_fraction", cfg.window_fraction, ov.window_fraction);
  set_if("max_state_bytes", cfg.max_state_bytes, ov.max_state_bytes);
  if (ov.opt("emit_profile")->count()) cfg.emit_profile = true;
  if (ov.opt("rung_distance")->count()) {
    cfg.rungs.clear();
    for (int d : ov.rung_distances) {
      RungConfig r;
      r.distance = d;
      if (ov.opt("rung_style")->count()) r.style = ov.rung_style;
      cfg.rungs.push_back(r);
    }
  } else if (ov.opt("rung_style")->count()) {
    for (RungConfig& r : cfg.rungs) r.style = ov.rung_style;
  }
  set_thread_count(cfg.threads);
  return cfg;
}

int report_error(int code, const std::string& message) {
  std::cerr << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ResourceLimitError& e) {
    return report_error(3, e.what());
  } catch (const NumericError& e) {
    return report_error(4, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(2, e.what());
  } catch (const json::exception& e) {
    return report_error(2, e.what());
  } catch (const std::exception& e) {
    return report_error(1, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinkick: kicked Heisenberg chains with 2D rung interactions"};
  app.require_subcommand(1);

  ExperimentConfig simulate_defaults;
  simulate_defaults.rungs = {RungConfig{.distance = 4, .site_a = -1, .site_b = -1, .style = "direct"}};

  ExperimentConfig scatter_defaults = simulate_defaults;
  scatter_defaults.geometry = "scattering";
  scatter_defaults.chain_len = 8;
  scatter_defaults.rung_ratio = 4.0;
  scatter_defaults.estimator = "probe-difference";

  ExperimentConfig cycle_defaults = simulate_defaults;
  cycle_defaults.chain_len = 14;

  ExperimentConfig oracle_defaults = simulate_defaults;
  oracle_defaults.chain_len = 8;
  oracle_defaults.rungs = {RungConfig{.distance = 2, .site_a = -1, .site_b = -1, .style = "direct"}};
  oracle_defaults.steps = 8;
  oracle_defaults.realizations = 200;

  Overrides ov_sim, ov_scatter, ov_sweep, ov_tau, ov_cycle, ov_validate, ov_oracle;

  auto* simulate = app.add_subcommand("simulate", "autocorrelation + exponent pipeline");
  register_common(simulate, ov_sim);

  auto* scatter = app.add_subcommand("scatter", "scattering coefficients off the rung");
  register_common(scatter, ov_scatter);

  auto* sweep = app.add_subcommand("sweep", "grid over interaction types and J_perp/J ratios");
  register_common(sweep, ov_sweep);
  std::vector<double> sweep_ratios;
  sweep->add_option("--ratios", sweep_ratios, "J_perp/J values")->delimiter(',');
  std::vector<std::string> sweep_lambdas;
  sweep->add_option("--lambdas", sweep_lambdas, "interaction vectors, e.g. 0,0,1;1,1,0")
      ->delimiter(';');

  auto* tau_study = app.add_subcommand("tau-study", "kicking-period comparison at fixed total time");
  register_common(tau_study, ov_tau);
  std::vector<double> taus;
  tau_study->add_option("--taus", taus, "kicking periods")->delimiter(',');

  auto* cycle_study = app.add_subcommand("cycle-study", "randomization-depth standard-error study");
  register_common(cycle_study, ov_cycle);
  std::vector<std::string> cycle_list_raw;
  cycle_study->add_option("--cycles-list", cycle_list_raw, "cycle counts")->delimiter(',');
  int cycle_runs = 5;
  cycle_study->add_option("--runs", cycle_runs, "independent runs per cycle count");

  auto* validate_cmd = app.add_subcommand("validate-config", "check a config file");
  register_common(validate_cmd, ov_validate);

  auto* oracle = app.add_subcommand("oracle-check", "typicality estimator vs dense trace oracle");
  register_common(oracle, ov_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(2, e.get_name() + std::string(": ") + e.what());
  }

  if (simulate->parsed())
    return guarded([&] { return cmd_simulate(finalize_config(simulate_defaults, ov_sim)); });
  if (scatter->parsed())
    return guarded([&] { return cmd_scatter(finalize_config(scatter_defaults, ov_scatter)); });
  if (sweep->parsed())
    return guarded(
        [&] { return cmd_sweep(finalize_config(simulate_defaults, ov_sweep), sweep_ratios, sweep_lambdas); });
  if (tau_study->parsed())
    return guarded([&] { return cmd_tau_study(finalize_config(simulate_defaults, ov_tau), taus); });
  if (cycle_study->parsed())
    return guarded([&] {
      std::vector<int> cycle_list;
      for (const std::string& c : cycle_list_raw) {
        std::size_t used = 0;
        const int value = std::stoi(c, &used);
        if (used != c.size()) throw std::invalid_argument("bad cycle count: " + c);
        cycle_list.push_back(value);
      }
      return cmd_cycle_study(finalize_config(cycle_defaults, ov_cycle), cycle_list, cycle_runs);
    });
  if (validate_cmd->parsed())
    return guarded([&] {
      const ExperimentConfig cfg = finalize_config(simulate_defaults, ov_validate);
      const auto problems = validate_config(cfg);
      if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
        throw std::invalid_argument(msg);
      }
      std::cout << json{{"ok", true}}.dump() << "\n";
      return 0;
    });
  if (oracle->parsed())
    return guarded([&] { return cmd_oracle_check(finalize_config(oracle_defaults, ov_oracle)); });
  return report_error(2, "no subcommand given");
}
