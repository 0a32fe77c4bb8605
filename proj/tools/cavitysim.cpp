// Command-line front end: every subcommand resolves a full parameter set
// (defaults < preset < config file < flags), writes plot-ready CSV plus a
// JSON summary that embeds the resolved configuration, and exits 0 on
// success, 2 on validation errors, 3 on numerical failures.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cqed/config.hpp"
#include "cqed/constants.hpp"
#include "cqed/detection.hpp"
#include "cqed/ensemble.hpp"
#include "cqed/errors.hpp"
#include "cqed/experiments.hpp"
#include "cqed/io.hpp"
#include "cqed/rng.hpp"
#include "cqed/steady_state.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;  // section.key=value
  std::string output_dir = ".";
  std::string name;  // output basename, defaults to the subcommand
};

cqed::RunConfig resolve_config(const CommonOptions& common) {
  cqed::RunConfig config = cqed::default_config();
  cqed::apply_preset(config, common.preset);

  std::string path = common.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("CAVITYSIM_CONFIG"); env != nullptr && *env != '\0') path = env;
  }
  if (!path.empty()) config = cqed::load_config_file(path, config);

  for (const std::string& item : common.overrides) {
    const auto eq = item.find('=');
    const auto dot = item.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw cqed::ValidationError("override '" + item + "' must look like section.key=value");
    }
    std::istringstream ini("[" + item.substr(0, dot) + "]\n" + item.substr(dot + 1, eq - dot - 1) +
                           " = " + item.substr(eq + 1) + "\n");
    config = cqed::parse_config(ini, config);
  }
  return config;
}

std::string defaults_hash_hex() {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(cqed::fnv1a64(cqed::to_ini(cqed::default_config()))));
  return buffer;
}

json base_summary(const std::string& subcommand, const cqed::RunConfig& config, const json& args) {
  json summary;
  summary["tool"] = "cavitysim";
  summary["version"] = cqed::kToolVersion;
  summary["defaults_hash"] = defaults_hash_hex();
  summary["subcommand"] = subcommand;
  summary["args"] = args;
  summary["seed"] = config.ensemble.master_seed;
  summary["resolved_config"] = cqed::to_ini(config);
  return summary;
}

void write_summary(const fs::path& path, const json& summary) {
  std::ofstream out(path);
  if (!out) throw cqed::ValidationError("cannot open summary file '" + path.string() + "'");
  out << summary.dump(2) << "\n";
}

fs::path output_path(const CommonOptions& common, const std::string& fallback,
                     const std::string& extension) {
  const std::string base = common.name.empty() ? fallback : common.name;
  fs::create_directories(common.output_dir);
  return fs::path(common.output_dir) / (base + extension);
}

std::vector<double> parse_value_list(const std::string& text) {
  // either "lo:hi:count" or a comma-separated list
  std::vector<double> values;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1) {
      throw cqed::ValidationError("range '" + text + "' must look like lo:hi:count");
    }
    for (long i = 0; i < count; ++i) {
      values.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    return values;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw cqed::ValidationError("empty value list '" + text + "'");
  return values;
}

int run_derive(const CommonOptions& common) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  const double c1 = cqed::cooperativity(model.atom.g_max, model.derived.kappa, model.atom.gamma);
  const cqed::TrapFrequencies freqs = cqed::trap_frequencies(model.trap, model.atom.mass);
  const double efficiency = model.detection.mirror_fraction * model.detection.path_efficiency;

  json out;
  out["finesse"] = model.derived.finesse;
  out["fsr_thz"] = model.derived.fsr * 1e-12;
  out["kappa_over_2pi_mhz"] = cqed::angular_to_mhz(model.derived.kappa);
  out["waist_um"] = model.derived.waist * 1e6;
  out["mode_volume_lambda3"] =
      model.derived.mode_volume / std::pow(model.cavity.probe_wavelength, 3);
  out["beat_half_length_um"] = model.derived.beat_half_length * 1e6;
  out["cooperativity_c1"] = c1;
  out["radial_freq_khz"] = cqed::angular_to_khz(freqs.radial);
  out["axial_freq_khz"] = cqed::angular_to_khz(freqs.axial);
  out["mirror_outcoupling"] = model.detection.mirror_fraction;
  out["photon_detection_efficiency"] = efficiency;

  std::cout << out.dump(2) << "\n";
  json summary = base_summary("derive", config, json::object());
  summary["outputs"] = out;
  write_summary(output_path(common, "derive", "_summary.json"), summary);
  return 0;
}

int run_transmission(const CommonOptions& common, const std::string& g_list,
                     const std::string& delta_list) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  const std::vector<double> gs = g_list.empty()
                                     ? std::vector<double>{config.atom.g_max_mhz}
                                     : parse_value_list(g_list);
  const std::vector<double> deltas = delta_list.empty()
                                         ? std::vector<double>{config.drive.delta_pa_mhz}
                                         : parse_value_list(delta_list);

  const fs::path csv_path = output_path(common, "transmission", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"g_over_2pi", "delta_pa_over_2pi", "T_rel", "n_photon",
                                          "atomic_excitation", "converged"});
  bool all_converged = true;
  for (double g_mhz : gs) {
    for (double delta_mhz : deltas) {
      cqed::DriveParams drive = model.drive;
      drive.delta_pa = cqed::mhz_to_angular(delta_mhz);
      const cqed::SteadyStateResult r = cqed::transmission(
          cqed::mhz_to_angular(g_mhz), drive, model.derived.kappa, model.atom.gamma);
      all_converged = all_converged && r.converged;
      csv.row({g_mhz, delta_mhz, r.transmission_rel, r.photon_number, r.atomic_excitation,
               r.converged ? 1.0 : 0.0});
    }
  }
  if (!all_converged) std::cerr << "warning: some points did not pass truncation convergence\n";

  json args;
  args["g_mhz"] = g_list;
  args["delta_mhz"] = delta_list;
  json summary = base_summary("transmission", config, args);
  summary["outputs"]["points"] = gs.size() * deltas.size();
  summary["outputs"]["all_converged"] = all_converged;
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "transmission", "_summary.json"), summary);
  std::cout << "wrote " << csv_path.string() << "\n";
  return 0;
}

int run_average(const CommonOptions& common) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  cqed::TransmissionTable table(model.drive, model.derived.kappa, model.atom.gamma,
                                model.ensemble.g_bin, model.ensemble.delta_bin);
  const cqed::AveragedTransmission result = cqed::averaged_transmission(
      model.ensemble, model.geometry, model.atom, model.drive, table, 0.0, 1.0, model.workers);

  const fs::path csv_path = output_path(common, "average", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"temperature_mK", "delta_MHz", "T_rel_mean",
                                          "T_rel_stderr", "n_samples", "seed"});
  csv.row_mixed({cqed::CsvWriter::format(config.ensemble.temperature_mk),
                 cqed::CsvWriter::format(config.drive.delta_pa_mhz),
                 cqed::CsvWriter::format(result.mean), cqed::CsvWriter::format(result.std_error),
                 std::to_string(config.ensemble.n_samples),
                 std::to_string(config.ensemble.master_seed)});

  std::cout << "T_rel = " << result.mean << " +- " << result.std_error << "\n";
  json summary = base_summary("average", config, json::object());
  summary["outputs"]["t_rel_mean"] = result.mean;
  summary["outputs"]["t_rel_stderr"] = result.std_error;
  summary["outputs"]["table_bins"] = table.size();
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "average", "_summary.json"), summary);
  return 0;
}

int run_fit_temp(const CommonOptions& common, double target) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  cqed::TransmissionTable table(model.drive, model.derived.kappa, model.atom.gamma,
                                model.ensemble.g_bin, model.ensemble.delta_bin);
  const double fitted = cqed::fit_temperature(target, model.ensemble, model.geometry, model.atom,
                                              model.drive, table, 1e-6, 1e-3, 5e-6, model.workers);

  cqed::EnsembleSpec at_fit = model.ensemble;
  at_fit.temperature = fitted;
  const cqed::AveragedTransmission check = cqed::averaged_transmission(
      at_fit, model.geometry, model.atom, model.drive, table, 0.0, 1.0, model.workers);

  const fs::path csv_path = output_path(common, "fit_temp", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"temperature_mK", "delta_MHz", "T_rel_mean",
                                          "T_rel_stderr", "n_samples", "seed"});
  csv.row_mixed({cqed::CsvWriter::format(fitted * 1e3),
                 cqed::CsvWriter::format(config.drive.delta_pa_mhz),
                 cqed::CsvWriter::format(check.mean), cqed::CsvWriter::format(check.std_error),
                 std::to_string(config.ensemble.n_samples),
                 std::to_string(config.ensemble.master_seed)});

  std::cout << "fitted temperature = " << fitted * 1e3 << " mK\n";
  json args;
  args["target"] = target;
  json summary = base_summary("fit-temp", config, args);
  summary["outputs"]["fitted_temperature_mk"] = fitted * 1e3;
  summary["outputs"]["t_rel_at_fit"] = check.mean;
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "fit_temp", "_summary.json"), summary);
  return 0;
}

int run_sweep(const CommonOptions& common, bool forth_back) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  cqed::TransmissionTable table(model.drive, model.derived.kappa, model.atom.gamma,
                                model.ensemble.g_bin, model.ensemble.delta_bin);
  const std::vector<cqed::SweepPoint> forth = cqed::sweep_transmission(
      model.sweep, model.ensemble, model.geometry, model.atom, model.drive, table, model.workers);

  const fs::path csv_path = output_path(common, "sweep", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"t_ms", "y_um", "T_rel"});
  for (const auto& p : forth) csv.row({p.t * 1e3, p.y * 1e6, p.t_rel});
  double minimum = 1.0;
  for (const auto& p : forth) minimum = std::min(minimum, p.t_rel);

  if (forth_back) {
    // reverse transport after the dwell; the model is time-reversal symmetric
    const double t0 = model.sweep.duration + model.sweep.dwell;
    for (auto it = forth.rbegin(); it != forth.rend(); ++it) {
      csv.row({(t0 + (model.sweep.duration - it->t)) * 1e3, it->y * 1e6, it->t_rel});
    }
  }

  std::cout << "sweep minimum T_rel = " << minimum << "\n";
  json args;
  args["forth_back"] = forth_back;
  json summary = base_summary("sweep", config, args);
  summary["outputs"]["min_t_rel"] = minimum;
  summary["outputs"]["n_points"] = forth.size();
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "sweep", "_summary.json"), summary);
  return 0;
}

int run_pump_map(const CommonOptions& common) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  std::vector<double> positions;
  for (int i = 0; i < config.pump.n_points; ++i) {
    const double frac = config.pump.n_points == 1
                            ? 0.0
                            : static_cast<double>(i) / (config.pump.n_points - 1);
    positions.push_back((config.pump.y_min_um + (config.pump.y_max_um - config.pump.y_min_um) * frac) * 1e-6);
  }
  const cqed::TransferCurve curve = cqed::transfer_map(
      positions, model.pump, model.ensemble, model.geometry, model.atom, model.derived.kappa,
      model.workers);

  const fs::path csv_path = output_path(common, "pump_map", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"y_um", "transfer", "stderr"});
  double peak = 0.0;
  for (std::size_t i = 0; i < curve.positions.size(); ++i) {
    peak = std::max(peak, curve.transfer_probability[i]);
    csv.row({curve.positions[i] * 1e6, curve.transfer_probability[i], curve.std_error[i]});
  }

  std::cout << "peak transfer = " << peak << "\n";
  json summary = base_summary("pump-map", config, json::object());
  summary["outputs"]["peak_transfer"] = peak;
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "pump_map", "_summary.json"), summary);
  return 0;
}

int run_fit_photon(const CommonOptions& common, const std::string& input_csv) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  std::ifstream in(input_csv);
  if (!in) throw cqed::ValidationError("cannot open measured curve '" + input_csv + "'");
  cqed::TransferCurve measured;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string y, transfer, stderr_col;
    std::getline(ss, y, ',');
    std::getline(ss, transfer, ',');
    std::getline(ss, stderr_col, ',');
    measured.positions.push_back(std::stod(y) * 1e-6);
    measured.transfer_probability.push_back(std::stod(transfer));
    measured.std_error.push_back(stderr_col.empty() ? 0.0 : std::stod(stderr_col));
  }

  const double fitted = cqed::fit_photon_number(measured, model.pump, model.ensemble,
                                                model.geometry, model.atom, model.derived.kappa,
                                                0.001, 0.2, model.workers);
  std::cout << "fitted photon number = " << fitted << "\n";
  json args;
  args["input"] = input_csv;
  json summary = base_summary("fit-photon", config, args);
  summary["outputs"]["fitted_n_empty"] = fitted;
  write_summary(output_path(common, "fit_photon", "_summary.json"), summary);
  return 0;
}

int run_trace(const CommonOptions& common, const std::string& events_json) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  double probe_on = config.detection.probe_on_ms * 1e-3;
  double duration = config.detection.trace_duration_ms * 1e-3;
  std::vector<cqed::TraceEvent> events;
  if (events_json.empty()) {
    // built-in scenario: probe on, atom inserted at the strongest node,
    // thermal hopping until removal
    events.push_back({config.detection.insertion_ms * 1e-3, cqed::TraceEvent::Kind::Insertion, 0});
    if (config.detection.hop_rate_hz > 0.0) {
      const double span = (config.detection.removal_ms - config.detection.insertion_ms) * 1e-3;
      for (auto hop : cqed::hopping_process(config.detection.hop_rate_hz, model.geometry, span,
                                            cqed::derive_stream(config.ensemble.master_seed, {0x40Fu}))) {
        hop.time += config.detection.insertion_ms * 1e-3;
        events.push_back(hop);
      }
    }
    events.push_back({config.detection.removal_ms * 1e-3, cqed::TraceEvent::Kind::Removal, 0});
  } else {
    std::ifstream in(events_json);
    if (!in) throw cqed::ValidationError("cannot open events file '" + events_json + "'");
    json spec = json::parse(in);
    probe_on = spec.value("probe_on_s", probe_on);
    duration = spec.value("duration_s", duration);
    for (const auto& ev : spec.at("events")) {
      cqed::TraceEvent event;
      event.time = ev.at("t_s").get<double>();
      const std::string kind = ev.at("kind").get<std::string>();
      if (kind == "insertion") {
        event.kind = cqed::TraceEvent::Kind::Insertion;
      } else if (kind == "removal") {
        event.kind = cqed::TraceEvent::Kind::Removal;
      } else if (kind == "hop") {
        event.kind = cqed::TraceEvent::Kind::Hop;
      } else {
        throw cqed::ValidationError("unknown trace event kind '" + kind + "'");
      }
      event.node_index = ev.value("node", 0);
      events.push_back(event);
    }
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.time < b.time; });
  }

  // thermally averaged transmission per occupied node, memoized
  cqed::TransmissionTable table(model.drive, model.derived.kappa, model.atom.gamma,
                                model.ensemble.g_bin, model.ensemble.delta_bin);
  std::map<long, double> node_cache;
  const auto node_transmission = [&](long node) {
    const auto it = node_cache.find(node);
    if (it != node_cache.end()) return it->second;
    cqed::EnsembleSpec spec = model.ensemble;
    spec.node_offset = static_cast<double>(node) * model.geometry.lock_spacing;
    const double value = cqed::averaged_transmission(spec, model.geometry, model.atom, model.drive,
                                                     table, 0.0, 1.0, model.workers)
                             .mean;
    node_cache[node] = value;
    return value;
  };

  const std::vector<cqed::TraceBin> trace = cqed::synth_trace(
      events, config.detection.bin_ms * 1e-3, model.detection, model.derived.kappa,
      model.drive.n_empty, probe_on, duration, node_transmission,
      cqed::derive_stream(config.ensemble.master_seed, {0x7ACEu}));

  const fs::path csv_path = output_path(common, "trace", ".csv");
  cqed::CsvWriter csv(csv_path.string(), {"t_s", "counts", "true_rate", "node_index"});
  for (const auto& bin : trace) {
    csv.row({bin.t, static_cast<double>(bin.counts), bin.true_rate,
             static_cast<double>(bin.node_index)});
  }

  json args;
  args["events"] = events_json;
  json summary = base_summary("trace", config, args);
  summary["outputs"]["n_bins"] = trace.size();
  summary["outputs"]["n_events"] = events.size();
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "trace", "_summary.json"), summary);
  std::cout << "wrote " << csv_path.string() << "\n";
  return 0;
}

int run_grid_dump(const CommonOptions& common, const std::string& xs, const std::string& ys,
                  const std::string& zs) {
  const cqed::RunConfig config = resolve_config(common);
  const cqed::ModelBundle model = cqed::build(config);

  const std::vector<double> x_um = xs.empty() ? parse_value_list("-50:50:101") : parse_value_list(xs);
  const std::vector<double> y_um = ys.empty() ? std::vector<double>{0.0} : parse_value_list(ys);
  const std::vector<double> z_um = zs.empty() ? std::vector<double>{0.0} : parse_value_list(zs);

  const fs::path csv_path = output_path(common, "grid_dump", ".csv");
  cqed::CsvWriter csv(csv_path.string(),
                      {"x", "y", "z", "g_over_2pi_MHz", "U_dipole_mK", "U_lock_mK", "stark_MHz"});
  for (double x : x_um) {
    for (double y : y_um) {
      for (double z : z_um) {
        const cqed::Position pos{x * 1e-6, y * 1e-6, z * 1e-6};
        csv.row({x, y, z,
                 cqed::angular_to_mhz(cqed::coupling_at(model.geometry, model.atom, pos, 0)),
                 cqed::joule_to_mk(cqed::dipole_potential(model.geometry, pos)),
                 cqed::joule_to_mk(cqed::lock_potential(model.geometry, pos)),
                 cqed::stark_shift(model.geometry, pos) * 1e-6});
      }
    }
  }

  json args;
  args["x_um"] = xs;
  args["y_um"] = ys;
  args["z_um"] = zs;
  json summary = base_summary("grid-dump", config, args);
  summary["outputs"]["n_points"] = x_um.size() * y_um.size() * z_um.size();
  summary["files"] = {csv_path.string()};
  write_summary(output_path(common, "grid_dump", "_summary.json"), summary);
  std::cout << "wrote " << csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled atom-cavity steady-state and state-detection simulator"};
  app.set_version_flag("--version", []() {
    return std::string("cavitysim ") + cqed::kToolVersion + " (defaults-hash " + defaults_hash_hex() + ")";
  }());

  app.fallthrough();

  CommonOptions common;
  app.add_option("--config", common.config_path,
                 "config file (default: $CAVITYSIM_CONFIG when set)");
  app.add_option("--preset", common.preset, "figure preset: fig3, fig5, fig6 or fig7");
  app.add_option("--set", common.overrides, "override, e.g. --set drive.delta_pa_mhz=44");
  app.add_option("--output-dir", common.output_dir, "directory for CSV and summary files");
  app.add_option("--name", common.name, "basename for output files");
  app.require_subcommand(1);

  auto* derive = app.add_subcommand("derive", "derived cavity, atom and trap constants");

  auto* transmission = app.add_subcommand("transmission", "steady-state transmission vs (g, delta)");
  std::string g_list, delta_list;
  transmission->add_option("--g-mhz", g_list, "couplings/2pi in MHz: list or lo:hi:count");
  transmission->add_option("--delta-mhz", delta_list, "detunings/2pi in MHz: list or lo:hi:count");

  auto* average = app.add_subcommand("average", "thermal and mF ensemble-averaged transmission");

  auto* fit_temp = app.add_subcommand("fit-temp", "fit the ensemble temperature to a target T_rel");
  double target = 0.05;
  fit_temp->add_option("--target", target, "target averaged transmission")->required();

  auto* sweep = app.add_subcommand("sweep", "slow transport of one or two atoms across the mode");
  bool forth_back = false;
  sweep->add_flag("--forth-back", forth_back, "append the reverse transport after the dwell");
  sweep->add_option("--atoms",
                    [&common](const std::vector<std::string>& v) {
                      common.overrides.push_back("sweep.n_atoms=" + v.back());
                      return true;
                    },
                    "number of co-located atoms (1 or 2)");

  auto* pump_map = app.add_subcommand("pump-map", "hyperfine population-transfer map");

  auto* fit_photon = app.add_subcommand("fit-photon", "fit n_empty to a measured transfer curve");
  std::string input_csv;
  fit_photon->add_option("--input", input_csv, "measured curve CSV (y_um,transfer[,stderr])")->required();

  auto* trace = app.add_subcommand("trace", "synthetic photon-count trace");
  std::string events_json;
  trace->add_option("--events", events_json, "JSON event list (default: built-in scenario)");

  auto* grid_dump = app.add_subcommand("grid-dump", "coupling, potentials and shift on a grid");
  std::string xs, ys, zs;
  grid_dump->add_option("--x-um", xs, "x grid in um: list or lo:hi:count");
  grid_dump->add_option("--y-um", ys, "y grid in um: list or lo:hi:count");
  grid_dump->add_option("--z-um", zs, "z grid in um: list or lo:hi:count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (derive->parsed()) return run_derive(common);
    if (transmission->parsed()) return run_transmission(common, g_list, delta_list);
    if (average->parsed()) return run_average(common);
    if (fit_temp->parsed()) return run_fit_temp(common, target);
    if (sweep->parsed()) return run_sweep(common, forth_back);
    if (pump_map->parsed()) return run_pump_map(common);
    if (fit_photon->parsed()) return run_fit_photon(common, input_csv);
    if (trace->parsed()) return run_trace(common, events_json);
    if (grid_dump->parsed()) return run_grid_dump(common, xs, ys, zs);
  } catch (const cqed::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const cqed::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
