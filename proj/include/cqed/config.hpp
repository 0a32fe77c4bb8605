#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/detection.hpp"
#include "cqed/ensemble.hpp"
#include "cqed/experiments.hpp"
#include "cqed/geometry.hpp"
#include "cqed/physics.hpp"
#include "cqed/steady_state.hpp"

namespace cqed {

// Full run configuration in I/O units (MHz, um, nm, mK, ms). Mirrors the
// sections of the config file one to one; unknown keys are rejected on load
// and every physical invariant is revalidated by build().
struct RunConfig {
  struct Cavity {
    double mirror_transmission_ppm = 1.3;
    double mirror_loss_ppm = 1.8;
    double length_um = 159.0;
    double radius_of_curvature_mm = 50.0;
    double probe_wavelength_nm = 852.0;
    double lock_wavelength_nm = 840.0;
  } cavity;

  struct Atom {
    double gamma_mhz = 2.6;
    double g_max_mhz = 13.0;
    double mass_kg = caesium_mass;
    double offset_f3_mhz = 40.0;
    double offset_f4_mhz = -160.0;
    double f5_splitting_mhz = 251.0;
  } atom;

  struct Trap {
    double dipole_wavelength_nm = 1030.0;
    double dipole_waist_um = 34.0;
    double dipole_depth_mk = 0.58;
    double lock_height_mk = 0.3;
  } trap;

  struct Geometry {
    double stark_coeff_dipole = -1.0;  // units of 1/h per Joule
    double stark_coeff_lock = -1.0;
    double node_origin_um = 0.0;
  } geometry;

  struct Drive {
    double delta_pa_mhz = 24.0;
    double delta_pc_mhz = 0.0;
    double n_empty = 0.1;
    int n_max = 3;
  } drive;

  struct Ensemble {
    double temperature_mk = 0.17;
    int n_samples = 4000;
    std::uint64_t master_seed = 964301;
    double node_offset_um = 0.0;
    std::string sampling = "harmonic";  // harmonic | boltzmann
    std::array<double, 9> mf_weights{};  // raw weights, normalised by build()
    double g_bin_mhz = 0.1;
    double delta_bin_mhz = 0.5;
    Ensemble() { mf_weights.fill(1.0); }
  } ensemble;

  struct Sweep {
    double start_y_um = -50.0;
    double end_y_um = 50.0;
    double duration_ms = 150.0;
    int n_atoms = 1;
    double dwell_ms = 0.0;
    double time_step_ms = 1.5;
    bool node_average = false;
    int node_average_count = 16;
  } sweep;

  struct Pump {
    double hold_time_ms = 1.0;
    double step_us = 10.0;
    double n_empty = 0.04;
    double detuning_f3_mhz = 40.0;
    double detuning_f4_mhz = -160.0;
    double detuning_f5_mhz = -411.0;
    double survival = 0.77;
    int n_trajectories = 400;
    bool use_master_equation = false;
    double y_min_um = -25.0;
    double y_max_um = 25.0;
    int n_points = 21;
  } pump;

  struct Detection {
    double path_efficiency = 0.09;
    double background_rate = 1000.0;
    double calibration = 1.0;
    double hop_rate_hz = 10.0;
    double bin_ms = 1.0;
    double trace_duration_ms = 400.0;
    double probe_on_ms = 14.0;
    double insertion_ms = 70.0;
    double removal_ms = 370.0;
  } detection;

  struct Run {
    int workers = 0;  // 0 = hardware concurrency
  } run;
};

// shipped defaults (the values quoted throughout the experiment)
RunConfig default_config();

// named figure presets layered on top of the defaults
void apply_preset(RunConfig& config, const std::string& name);

// parse section/key = value text; unknown sections or keys are rejected
RunConfig parse_config(std::istream& in, const RunConfig& base);
RunConfig load_config_file(const std::string& path, const RunConfig& base);

// one key = value per line, suitable for reparsing
std::string to_ini(const RunConfig& config);

// physical objects assembled from a config; throws ValidationError on any
// broken invariant
struct ModelBundle {
  CavityParams cavity;
  DerivedCavity derived;
  AtomStructure atom;
  TrapParams trap;
  FieldGeometry geometry;
  DriveParams drive;
  EnsembleSpec ensemble;
  SweepProtocol sweep;
  PumpProtocol pump;
  DetectionChain detection;
  int workers = 0;
};

ModelBundle build(const RunConfig& config);

}  // namespace cqed
