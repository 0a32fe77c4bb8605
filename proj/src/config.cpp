#include "cqed/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("key '" + key + "': cannot parse number from '" + value + "'");
}

long parse_long(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (std::abs(v - std::round(v)) > 1e-9) {
    throw ValidationError("key '" + key + "': expected an integer, got '" + value + "'");
  }
  return std::lround(v);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(value, &used);
    if (trim(value.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("key '" + key + "': cannot parse seed from '" + value + "'");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("key '" + key + "': expected a boolean, got '" + value + "'");
}

// binds "section.key" names to config fields for both parsing and dumping
struct KeyBinding {
  std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const RunConfig&)> get;
};

// shortest decimal form that parses back to the same double
std::string format_double(double v) {
  for (int precision = 6; precision <= 17; ++precision) {
    std::ostringstream out;
    out.precision(precision);
    out << v;
    if (std::stod(out.str()) == v) return out.str();
  }
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

using KeyMap = std::map<std::string, KeyBinding>;

const KeyMap& key_map() {
  static const KeyMap map = [] {
    KeyMap m;
    const auto dbl = [&m](const std::string& name, std::function<double&(RunConfig&)> ref) {
      m[name] = KeyBinding{
          [ref](RunConfig& c, const std::string& key, const std::string& value) {
            ref(c) = parse_double(key, value);
          },
          [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); }};
    };
    const auto integer = [&m](const std::string& name, std::function<int&(RunConfig&)> ref) {
      m[name] = KeyBinding{
          [ref](RunConfig& c, const std::string& key, const std::string& value) {
            ref(c) = static_cast<int>(parse_long(key, value));
          },
          [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); }};
    };

    dbl("cavity.mirror_transmission_ppm", [](RunConfig& c) -> double& { return c.cavity.mirror_transmission_ppm; });
    dbl("cavity.mirror_loss_ppm", [](RunConfig& c) -> double& { return c.cavity.mirror_loss_ppm; });
    dbl("cavity.length_um", [](RunConfig& c) -> double& { return c.cavity.length_um; });
    dbl("cavity.radius_of_curvature_mm", [](RunConfig& c) -> double& { return c.cavity.radius_of_curvature_mm; });
    dbl("cavity.probe_wavelength_nm", [](RunConfig& c) -> double& { return c.cavity.probe_wavelength_nm; });
    dbl("cavity.lock_wavelength_nm", [](RunConfig& c) -> double& { return c.cavity.lock_wavelength_nm; });

    dbl("atom.gamma_mhz", [](RunConfig& c) -> double& { return c.atom.gamma_mhz; });
    dbl("atom.g_max_mhz", [](RunConfig& c) -> double& { return c.atom.g_max_mhz; });
    dbl("atom.mass_kg", [](RunConfig& c) -> double& { return c.atom.mass_kg; });
    dbl("atom.offset_f3_mhz", [](RunConfig& c) -> double& { return c.atom.offset_f3_mhz; });
    dbl("atom.offset_f4_mhz", [](RunConfig& c) -> double& { return c.atom.offset_f4_mhz; });
    dbl("atom.f5_splitting_mhz", [](RunConfig& c) -> double& { return c.atom.f5_splitting_mhz; });

    dbl("trap.dipole_wavelength_nm", [](RunConfig& c) -> double& { return c.trap.dipole_wavelength_nm; });
    dbl("trap.dipole_waist_um", [](RunConfig& c) -> double& { return c.trap.dipole_waist_um; });
    dbl("trap.dipole_depth_mk", [](RunConfig& c) -> double& { return c.trap.dipole_depth_mk; });
    dbl("trap.lock_height_mk", [](RunConfig& c) -> double& { return c.trap.lock_height_mk; });

    dbl("geometry.stark_coeff_dipole", [](RunConfig& c) -> double& { return c.geometry.stark_coeff_dipole; });
    dbl("geometry.stark_coeff_lock", [](RunConfig& c) -> double& { return c.geometry.stark_coeff_lock; });
    dbl("geometry.node_origin_um", [](RunConfig& c) -> double& { return c.geometry.node_origin_um; });

    dbl("drive.delta_pa_mhz", [](RunConfig& c) -> double& { return c.drive.delta_pa_mhz; });
    dbl("drive.delta_pc_mhz", [](RunConfig& c) -> double& { return c.drive.delta_pc_mhz; });
    dbl("drive.n_empty", [](RunConfig& c) -> double& { return c.drive.n_empty; });
    integer("drive.n_max", [](RunConfig& c) -> int& { return c.drive.n_max; });

    dbl("ensemble.temperature_mk", [](RunConfig& c) -> double& { return c.ensemble.temperature_mk; });
    integer("ensemble.n_samples", [](RunConfig& c) -> int& { return c.ensemble.n_samples; });
    m["ensemble.master_seed"] = KeyBinding{
        [](RunConfig& c, const std::string& key, const std::string& value) {
          c.ensemble.master_seed = parse_u64(key, value);
        },
        [](const RunConfig& c) { return std::to_string(c.ensemble.master_seed); }};
    dbl("ensemble.node_offset_um", [](RunConfig& c) -> double& { return c.ensemble.node_offset_um; });
    m["ensemble.sampling"] = KeyBinding{
        [](RunConfig& c, const std::string& key, const std::string& value) {
          if (value != "harmonic" && value != "boltzmann") {
            throw ValidationError("key '" + key + "': sampling must be 'harmonic' or 'boltzmann'");
          }
          c.ensemble.sampling = value;
        },
        [](const RunConfig& c) { return c.ensemble.sampling; }};
    m["ensemble.mf_weights"] = KeyBinding{
        [](RunConfig& c, const std::string& key, const std::string& value) {
          if (value == "uniform") {
            c.ensemble.mf_weights.fill(1.0);
            return;
          }
          std::stringstream ss(value);
          std::string item;
          std::size_t i = 0;
          while (std::getline(ss, item, ',')) {
            if (i >= 9) throw ValidationError("key '" + key + "': expected 9 weights");
            c.ensemble.mf_weights[i++] = parse_double(key, trim(item));
          }
          if (i != 9) throw ValidationError("key '" + key + "': expected 9 weights");
        },
        [](const RunConfig& c) {
          std::string out;
          for (std::size_t i = 0; i < 9; ++i) {
            out += format_double(c.ensemble.mf_weights[i]);
            if (i + 1 < 9) out += ",";
          }
          return out;
        }};
    dbl("ensemble.g_bin_mhz", [](RunConfig& c) -> double& { return c.ensemble.g_bin_mhz; });
    dbl("ensemble.delta_bin_mhz", [](RunConfig& c) -> double& { return c.ensemble.delta_bin_mhz; });

    dbl("sweep.start_y_um", [](RunConfig& c) -> double& { return c.sweep.start_y_um; });
    dbl("sweep.end_y_um", [](RunConfig& c) -> double& { return c.sweep.end_y_um; });
    dbl("sweep.duration_ms", [](RunConfig& c) -> double& { return c.sweep.duration_ms; });
    integer("sweep.n_atoms", [](RunConfig& c) -> int& { return c.sweep.n_atoms; });
    dbl("sweep.dwell_ms", [](RunConfig& c) -> double& { return c.sweep.dwell_ms; });
    dbl("sweep.time_step_ms", [](RunConfig& c) -> double& { return c.sweep.time_step_ms; });
    m["sweep.node_average"] = KeyBinding{
        [](RunConfig& c, const std::string& key, const std::string& value) {
          c.sweep.node_average = parse_bool(key, value);
        },
        [](const RunConfig& c) { return c.sweep.node_average ? std::string("true") : std::string("false"); }};
    integer("sweep.node_average_count", [](RunConfig& c) -> int& { return c.sweep.node_average_count; });

    dbl("pump.hold_time_ms", [](RunConfig& c) -> double& { return c.pump.hold_time_ms; });
    dbl("pump.step_us", [](RunConfig& c) -> double& { return c.pump.step_us; });
    dbl("pump.n_empty", [](RunConfig& c) -> double& { return c.pump.n_empty; });
    dbl("pump.detuning_f3_mhz", [](RunConfig& c) -> double& { return c.pump.detuning_f3_mhz; });
    dbl("pump.detuning_f4_mhz", [](RunConfig& c) -> double& { return c.pump.detuning_f4_mhz; });
    dbl("pump.detuning_f5_mhz", [](RunConfig& c) -> double& { return c.pump.detuning_f5_mhz; });
    dbl("pump.survival", [](RunConfig& c) -> double& { return c.pump.survival; });
    integer("pump.n_trajectories", [](RunConfig& c) -> int& { return c.pump.n_trajectories; });
    m["pump.use_master_equation"] = KeyBinding{
        [](RunConfig& c, const std::string& key, const std::string& value) {
          c.pump.use_master_equation = parse_bool(key, value);
        },
        [](const RunConfig& c) {
          return c.pump.use_master_equation ? std::string("true") : std::string("false");
        }};
    dbl("pump.y_min_um", [](RunConfig& c) -> double& { return c.pump.y_min_um; });
    dbl("pump.y_max_um", [](RunConfig& c) -> double& { return c.pump.y_max_um; });
    integer("pump.n_points", [](RunConfig& c) -> int& { return c.pump.n_points; });

    dbl("detection.path_efficiency", [](RunConfig& c) -> double& { return c.detection.path_efficiency; });
    dbl("detection.background_rate", [](RunConfig& c) -> double& { return c.detection.background_rate; });
    dbl("detection.calibration", [](RunConfig& c) -> double& { return c.detection.calibration; });
    dbl("detection.hop_rate_hz", [](RunConfig& c) -> double& { return c.detection.hop_rate_hz; });
    dbl("detection.bin_ms", [](RunConfig& c) -> double& { return c.detection.bin_ms; });
    dbl("detection.trace_duration_ms", [](RunConfig& c) -> double& { return c.detection.trace_duration_ms; });
    dbl("detection.probe_on_ms", [](RunConfig& c) -> double& { return c.detection.probe_on_ms; });
    dbl("detection.insertion_ms", [](RunConfig& c) -> double& { return c.detection.insertion_ms; });
    dbl("detection.removal_ms", [](RunConfig& c) -> double& { return c.detection.removal_ms; });

    integer("run.workers", [](RunConfig& c) -> int& { return c.run.workers; });
    return m;
  }();
  return map;
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

void apply_preset(RunConfig& config, const std::string& name) {
  if (name.empty()) return;
  if (name == "fig3") {
    // single atom held at the strongest-coupling node
    config.drive.delta_pa_mhz = 24.0;
    config.drive.n_empty = 0.1;
    config.ensemble.temperature_mk = 0.17;
    config.ensemble.node_offset_um = 0.0;
    config.detection.calibration = 2.4;  // quoted operating point of the count rate
  } else if (name == "fig5") {
    // slow transport across the mode, atoms enter in different nodes
    config.drive.delta_pa_mhz = 44.0;
    config.drive.n_empty = 0.1;
    config.ensemble.temperature_mk = 0.13;
    config.sweep.node_average = true;
    config.sweep.n_atoms = 1;
  } else if (name == "fig6") {
    // one vs two atoms at the strongest-coupling node
    config.drive.delta_pa_mhz = 24.0;
    config.drive.n_empty = 0.1;
    config.ensemble.temperature_mk = 0.17;
    config.sweep.node_average = false;
  } else if (name == "fig7") {
    // state-detection map at the fitted photon number
    config.pump.n_empty = 0.02;
    config.pump.survival = 0.77;
    config.ensemble.temperature_mk = 0.17;
  } else {
    throw ValidationError("unknown preset '" + name + "' (expected fig3, fig5, fig6 or fig7)");
  }
}

RunConfig parse_config(std::istream& in, const RunConfig& base) {
  RunConfig config = base;
  const KeyMap& keys = key_map();
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": key outside any section");
    }
    const std::string qualified = section + "." + key;
    const auto it = keys.find(qualified);
    if (it == keys.end()) {
      throw ValidationError("unknown config key '" + qualified + "'");
    }
    it->second.set(config, qualified, value);
  }
  return config;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  return parse_config(in, base);
}

std::string to_ini(const RunConfig& config) {
  const KeyMap& keys = key_map();
  std::string out, section;
  for (const auto& [name, binding] : keys) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += name.substr(dot + 1) + " = " + binding.get(config) + "\n";
  }
  return out;
}

ModelBundle build(const RunConfig& c) {
  ModelBundle b;
  b.cavity.mirror_transmission = c.cavity.mirror_transmission_ppm * 1e-6;
  b.cavity.mirror_loss = c.cavity.mirror_loss_ppm * 1e-6;
  b.cavity.length = c.cavity.length_um * 1e-6;
  b.cavity.radius_of_curvature = c.cavity.radius_of_curvature_mm * 1e-3;
  b.cavity.probe_wavelength = c.cavity.probe_wavelength_nm * 1e-9;
  b.cavity.lock_wavelength = c.cavity.lock_wavelength_nm * 1e-9;
  b.derived = derive_cavity(b.cavity);

  if (!(c.atom.mass_kg > 0.0)) throw ValidationError("atom mass must be positive");
  if (!(c.atom.gamma_mhz > 0.0) || !(c.atom.g_max_mhz >= 0.0)) {
    throw ValidationError("atomic rates must be positive");
  }
  b.atom = make_caesium_atom(mhz_to_angular(c.atom.gamma_mhz), mhz_to_angular(c.atom.g_max_mhz),
                             mhz_to_angular(c.atom.offset_f3_mhz),
                             mhz_to_angular(c.atom.offset_f4_mhz),
                             mhz_to_angular(c.atom.f5_splitting_mhz));
  b.atom.mass = c.atom.mass_kg;

  b.trap = make_trap(c.trap.dipole_wavelength_nm * 1e-9, c.trap.dipole_waist_um * 1e-6,
                     mk_to_joule(c.trap.dipole_depth_mk), mk_to_joule(c.trap.lock_height_mk),
                     b.atom.mass);

  b.geometry = make_geometry(b.cavity, b.derived, b.trap,
                             c.geometry.stark_coeff_dipole / planck,
                             c.geometry.stark_coeff_lock / planck,
                             c.geometry.node_origin_um * 1e-6);

  b.drive.delta_pa = mhz_to_angular(c.drive.delta_pa_mhz);
  b.drive.delta_pc = mhz_to_angular(c.drive.delta_pc_mhz);
  b.drive.n_empty = c.drive.n_empty;
  b.drive.n_max = c.drive.n_max;
  validate(b.drive);

  b.ensemble.temperature = c.ensemble.temperature_mk * 1e-3;
  b.ensemble.n_samples = c.ensemble.n_samples;
  b.ensemble.master_seed = c.ensemble.master_seed;
  b.ensemble.node_offset = c.ensemble.node_offset_um * 1e-6;
  b.ensemble.sampling =
      c.ensemble.sampling == "harmonic" ? SamplingMode::Harmonic : SamplingMode::Boltzmann;
  double weight_total = 0.0;
  for (double w : c.ensemble.mf_weights) weight_total += w;
  if (!(weight_total > 0.0)) throw ValidationError("mF weights must have positive total");
  for (std::size_t i = 0; i < 9; ++i) b.ensemble.mf_weights[i] = c.ensemble.mf_weights[i] / weight_total;
  b.ensemble.g_bin = mhz_to_angular(c.ensemble.g_bin_mhz);
  b.ensemble.delta_bin = mhz_to_angular(c.ensemble.delta_bin_mhz);
  validate(b.ensemble);

  b.sweep.start_y = c.sweep.start_y_um * 1e-6;
  b.sweep.end_y = c.sweep.end_y_um * 1e-6;
  b.sweep.duration = c.sweep.duration_ms * 1e-3;
  b.sweep.n_atoms = c.sweep.n_atoms;
  b.sweep.dwell = c.sweep.dwell_ms * 1e-3;
  b.sweep.time_step = c.sweep.time_step_ms * 1e-3;
  b.sweep.node_average = c.sweep.node_average;
  b.sweep.node_average_count = c.sweep.node_average_count;
  validate(b.sweep);

  b.pump.hold_time = c.pump.hold_time_ms * 1e-3;
  b.pump.step = c.pump.step_us * 1e-6;
  b.pump.n_empty = c.pump.n_empty;
  b.pump.detuning_f3 = mhz_to_angular(c.pump.detuning_f3_mhz);
  b.pump.detuning_f4 = mhz_to_angular(c.pump.detuning_f4_mhz);
  b.pump.detuning_f5 = mhz_to_angular(c.pump.detuning_f5_mhz);
  b.pump.survival = c.pump.survival;
  b.pump.n_trajectories = c.pump.n_trajectories;
  b.pump.use_master_equation = c.pump.use_master_equation;
  validate(b.pump);
  if (c.pump.n_points < 1) throw ValidationError("pump map needs at least one position");

  b.detection = make_detection_chain(b.cavity, c.detection.path_efficiency,
                                     c.detection.background_rate, c.detection.calibration);
  if (c.detection.hop_rate_hz < 0.0) throw ValidationError("hop rate must be non-negative");
  if (!(c.detection.bin_ms > 0.0)) throw ValidationError("trace bin must be positive");

  b.workers = c.run.workers;
  return b;
}

}  // namespace cqed
