#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cqed/ensemble.hpp"
#include "cqed/geometry.hpp"
#include "cqed/physics.hpp"
#include "cqed/steady_state.hpp"

namespace cqed {

// Slow transport of one or two atoms across the mode along y.
struct SweepProtocol {
  double start_y = -50e-6;   // m
  double end_y = 50e-6;      // m
  double duration = 0.15;    // s
  int n_atoms = 1;
  double dwell = 0.0;        // s, pause at the turning point
  double time_step = 1.5e-3; // s
  bool node_average = false; // average over occupied-node offsets along the beat
  int node_average_count = 16;
};

void validate(const SweepProtocol& protocol);

struct SweepPoint {
  double t = 0.0;      // s
  double y = 0.0;      // m
  double t_rel = 0.0;
};

// Transmission time series for a linear transport y(t); two atoms are
// modelled as one atom at g sqrt(2).
std::vector<SweepPoint> sweep_transmission(const SweepProtocol& protocol, const EnsembleSpec& spec,
                                           const FieldGeometry& geom, const AtomStructure& atom,
                                           const DriveParams& drive, TransmissionTable& table,
                                           int workers = 0);

// collective coupling g sqrt(N) of N co-located atoms at weak excitation
double effective_g(double g, int n_atoms);

// Full width of the region where t_rel < level, linearly interpolated.
// Throws NumericalError when the series never crosses the level.
double dip_width(std::span<const SweepPoint> series, double level = 0.5);

// State-detection drive: far-detuned probe pumping F=4 -> F=3 via the three
// excited levels, read out destructively with the stated survival.
struct PumpProtocol {
  double hold_time = 1e-3;    // s
  double step = 10e-6;        // s
  double n_empty = 0.04;      // photons, empty-cavity on resonance
  double detuning_f3 = 0.0;   // rad/s, probe vs F'=3 (defaults from AtomStructure)
  double detuning_f4 = 0.0;
  double detuning_f5 = 0.0;
  double survival = 0.77;
  int n_trajectories = 400;
  bool use_master_equation = false;  // verification path for the scattering rates
};

void validate(const PumpProtocol& pump);
PumpProtocol make_pump_protocol(const AtomStructure& atom);

// Intra-cavity photon number with a dispersively coupled atom at pos:
// n_empty times the multi-level weak-drive transmission at Delta_pc = 0.
double dispersive_photon_number(const FieldGeometry& geom, const AtomStructure& atom,
                                const Position& pos, int mF, const PumpProtocol& pump,
                                double kappa);

// One stochastic hyperfine history for an atom at fixed position and mF;
// returns the final ground level (3 or 4). step_warning is set when the
// per-step excitation probability exceeds 0.1.
int pump_trajectory(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos,
                    int mF, const PumpProtocol& pump, double kappa, std::uint64_t seed,
                    bool* step_warning = nullptr);

struct TransferCurve {
  std::vector<double> positions;             // m
  std::vector<double> transfer_probability;  // in [0, survival]
  std::vector<double> std_error;
};

// Population-transfer map over atom positions: Monte-Carlo over thermal
// positions, trajectories and mF states, scaled by the survival probability.
TransferCurve transfer_map(std::span<const double> positions, const PumpProtocol& pump,
                           const EnsembleSpec& spec, const FieldGeometry& geom,
                           const AtomStructure& atom, double kappa, int workers = 0);

// Least-squares scalar fit of n_empty in [n_lo, n_hi] to a measured transfer
// curve (golden-section search on the SSE). Throws NonIdentifiableError when
// the objective is flat or the optimum sits at a bound.
double fit_photon_number(const TransferCurve& measured, const PumpProtocol& pump,
                         const EnsembleSpec& spec, const FieldGeometry& geom,
                         const AtomStructure& atom, double kappa, double n_lo = 0.001,
                         double n_hi = 0.2, int workers = 0);

}  // namespace cqed
