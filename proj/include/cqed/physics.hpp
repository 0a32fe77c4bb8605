#pragma once

#include <array>

namespace cqed {

// Mirror and geometry inputs of the resonator. All fields SI.
struct CavityParams {
  double mirror_transmission = 1.3e-6;   // per mirror, dimensionless
  double mirror_loss = 1.8e-6;           // absorption + scattering per mirror
  double length = 159e-6;                // m
  double radius_of_curvature = 5e-2;     // m
  double probe_wavelength = 852e-9;      // m
  double lock_wavelength = 840e-9;       // m
};

// throws ValidationError on broken invariants (positivity, stability, T+A < 1)
void validate(const CavityParams& params);

// Quantities derived from CavityParams. kappa is the field decay rate in
// rad/s; photon number decays at 2*kappa.
struct DerivedCavity {
  double finesse = 0.0;
  double fsr = 0.0;               // Hz
  double kappa = 0.0;             // rad/s
  double waist = 0.0;             // m
  double mode_volume = 0.0;       // m^3
  double beat_half_length = 0.0;  // m, coupling envelope max->min distance
};

DerivedCavity derive_cavity(const CavityParams& params);

// single-atom cooperativity g^2 / (2 kappa gamma)
double cooperativity(double g, double kappa, double gamma);

// pi-transition coupling for |F=4, mF> -> |F'=5, mF>: g_max * sqrt(25 - mF^2)/5
double coupling_for_mF(double g_max, int mF);

enum class ExcitedLevel { F3 = 3, F4 = 4, F5 = 5 };

struct Branching {
  double to_f3 = 0.0;
  double to_f4 = 0.0;
};

// Hyperfine branching of the decay from F' into the two ground levels,
// computed from angular-momentum algebra (not hard-coded). Independent of
// the excited mF by the Clebsch-Gordan sum rule; the average over pi-excited
// populations therefore equals the per-state value.
Branching branching_ratios(ExcitedLevel level);

// pi line strength |<F' m|d_0|4 m>|^2 normalized to the strongest
// transition (F'=5, m=0). Zero where the transition does not exist.
double pi_line_strength(ExcitedLevel level, int mF);

// Caesium D2 level data used by the solvers. Angular rates in rad/s.
struct AtomStructure {
  double gamma = 0.0;  // dipole decay rate, rad/s
  double g_max = 0.0;  // strongest pi coupling, rad/s
  double mass = 0.0;   // kg
  // probe detunings from the three excited levels in the state-detection
  // configuration, rad/s (F'=3, F'=4, F'=5)
  std::array<double, 3> excited_detunings{};
  // per-mF couplings for F=4 -> F'=5, index mF+4
  std::array<double, 9> per_mF_coupling{};
  // branching of each excited level, index F'-3
  std::array<Branching, 3> branching{};

  double coupling(int mF) const;
};

// Defaults from the quoted experiment values: gamma/2pi = 2.6 MHz,
// g_max/2pi = 13 MHz, probe +40 MHz above F'=3, -160 MHz below F'=4 and
// -(160 + splitting) below F'=5 with the 251 MHz F'=4..F'=5 splitting.
AtomStructure make_caesium_atom(double gamma, double g_max, double offset_f3, double offset_f4,
                                double f5_splitting);
AtomStructure make_caesium_atom();

// Dipole-trap and lock-lattice parameters. Depths in Joule, rates rad/s.
struct TrapParams {
  double dipole_wavelength = 1030e-9;     // m
  double dipole_waist = 34e-6;            // m
  double dipole_depth = 0.0;              // J (positive)
  double lock_potential_height = 0.0;     // J (positive)
  double radial_freq = 0.0;               // rad/s
  double axial_freq = 0.0;                // rad/s
};

void validate(const TrapParams& trap);

struct TrapFrequencies {
  double radial = 0.0;  // rad/s
  double axial = 0.0;   // rad/s
};

// Gaussian standing-wave results: axial = k sqrt(2 U0 / m),
// radial = sqrt(4 U0 / (m w0^2)).
TrapFrequencies trap_frequencies(const TrapParams& trap, double mass);

// builds TrapParams with derived oscillation frequencies filled in
TrapParams make_trap(double dipole_wavelength, double dipole_waist, double dipole_depth,
                     double lock_height, double mass);

}  // namespace cqed
