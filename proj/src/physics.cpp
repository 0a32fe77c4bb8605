#include "cqed/physics.hpp"

#include <cmath>
#include <string>

#include "cqed/angular.hpp"
#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr double kNuclearSpin = 3.5;  // caesium-133
constexpr double kGroundJ = 0.5;      // 6S1/2
constexpr double kExcitedJ = 1.5;     // 6P3/2
constexpr int kGroundF = 4;

// relative strength factor (2F'+1)(2J+1) {J J' 1; F' F I}^2 of the
// F <-> F' line within the D2 multiplet
double line_strength_factor(int f_excited, int f_ground) {
  const double w = angular::wigner_6j(kGroundJ, kExcitedJ, 1.0, f_excited, f_ground, kNuclearSpin);
  return (2.0 * f_excited + 1.0) * (2.0 * kGroundJ + 1.0) * w * w;
}

}  // namespace

void validate(const CavityParams& p) {
  if (p.mirror_transmission <= 0.0 || p.mirror_loss <= 0.0 || p.length <= 0.0 ||
      p.radius_of_curvature <= 0.0 || p.probe_wavelength <= 0.0 || p.lock_wavelength <= 0.0) {
    throw ValidationError("cavity parameters must be strictly positive");
  }
  if (p.mirror_transmission + p.mirror_loss >= 1.0) {
    throw ValidationError("mirror transmission + loss must be below unity");
  }
  if (p.length >= 2.0 * p.radius_of_curvature) {
    throw ValidationError("unstable resonator: length " + std::to_string(p.length * 1e6) +
                          " um is not below twice the radius of curvature " +
                          std::to_string(p.radius_of_curvature * 1e3) + " mm");
  }
  if (p.lock_wavelength >= p.probe_wavelength) {
    throw ValidationError("lock wavelength must be blue of the probe wavelength");
  }
}

DerivedCavity derive_cavity(const CavityParams& p) {
  validate(p);
  DerivedCavity d;
  d.finesse = pi / (p.mirror_transmission + p.mirror_loss);
  d.fsr = speed_of_light / (2.0 * p.length);
  d.kappa = two_pi * d.fsr / (2.0 * d.finesse);
  // symmetric resonator TEM00: Rayleigh range z_R = sqrt(L(2R-L))/2
  const double rayleigh = 0.5 * std::sqrt(p.length * (2.0 * p.radius_of_curvature - p.length));
  d.waist = std::sqrt(p.probe_wavelength * rayleigh / pi);
  d.mode_volume = pi * d.waist * d.waist * p.length / 4.0;
  d.beat_half_length =
      p.lock_wavelength * p.probe_wavelength / (4.0 * (p.probe_wavelength - p.lock_wavelength));
  return d;
}

double cooperativity(double g, double kappa, double gamma) {
  if (kappa <= 0.0 || gamma <= 0.0) throw ValidationError("cooperativity requires kappa, gamma > 0");
  return g * g / (2.0 * kappa * gamma);
}

double coupling_for_mF(double g_max, int mF) {
  if (mF < -kGroundF || mF > kGroundF) {
    throw DomainError("mF = " + std::to_string(mF) + " outside the F=4 manifold");
  }
  return g_max * std::sqrt(25.0 - static_cast<double>(mF * mF)) / 5.0;
}

Branching branching_ratios(ExcitedLevel level) {
  const int fe = static_cast<int>(level);
  if (fe < 3 || fe > 5) throw DomainError("excited level must be F'=3, 4 or 5");
  const double s3 = line_strength_factor(fe, 3);
  const double s4 = line_strength_factor(fe, 4);
  const double total = s3 + s4;
  return Branching{s3 / total, s4 / total};
}

double pi_line_strength(ExcitedLevel level, int mF) {
  const int fe = static_cast<int>(level);
  if (fe < 3 || fe > 5) throw DomainError("excited level must be F'=3, 4 or 5");
  if (mF < -kGroundF || mF > kGroundF) {
    throw DomainError("mF = " + std::to_string(mF) + " outside the F=4 manifold");
  }
  if (std::abs(mF) > fe) return 0.0;
  const double cg = angular::clebsch_gordan(kGroundF, mF, 1.0, 0.0, fe, mF);
  const double cg0 = angular::clebsch_gordan(kGroundF, 0.0, 1.0, 0.0, 5.0, 0.0);
  const double num = line_strength_factor(fe, kGroundF) * cg * cg;
  const double den = line_strength_factor(5, kGroundF) * cg0 * cg0;
  return num / den;
}

double AtomStructure::coupling(int mF) const { return coupling_for_mF(g_max, mF); }

AtomStructure make_caesium_atom(double gamma, double g_max, double offset_f3, double offset_f4,
                                double f5_splitting) {
  AtomStructure atom;
  atom.gamma = gamma;
  atom.g_max = g_max;
  atom.mass = caesium_mass;
  atom.excited_detunings = {offset_f3, offset_f4, offset_f4 - f5_splitting};
  for (int m = -4; m <= 4; ++m) atom.per_mF_coupling[static_cast<std::size_t>(m + 4)] = coupling_for_mF(g_max, m);
  for (int fe = 3; fe <= 5; ++fe) {
    atom.branching[static_cast<std::size_t>(fe - 3)] = branching_ratios(static_cast<ExcitedLevel>(fe));
  }
  return atom;
}

AtomStructure make_caesium_atom() {
  return make_caesium_atom(mhz_to_angular(2.6), mhz_to_angular(13.0), mhz_to_angular(40.0),
                           mhz_to_angular(-160.0), mhz_to_angular(251.0));
}

void validate(const TrapParams& t) {
  if (t.dipole_wavelength <= 0.0 || t.dipole_waist <= 0.0) {
    throw ValidationError("trap wavelength and waist must be positive");
  }
  if (t.dipole_depth <= 0.0 || t.lock_potential_height <= 0.0) {
    throw ValidationError("trap depths must be positive");
  }
}

TrapFrequencies trap_frequencies(const TrapParams& t, double mass) {
  validate(t);
  const double k = two_pi / t.dipole_wavelength;
  TrapFrequencies f;
  f.axial = k * std::sqrt(2.0 * t.dipole_depth / mass);
  f.radial = std::sqrt(4.0 * t.dipole_depth / (mass * t.dipole_waist * t.dipole_waist));
  return f;
}

TrapParams make_trap(double dipole_wavelength, double dipole_waist, double dipole_depth,
                     double lock_height, double mass) {
  TrapParams t;
  t.dipole_wavelength = dipole_wavelength;
  t.dipole_waist = dipole_waist;
  t.dipole_depth = dipole_depth;
  t.lock_potential_height = lock_height;
  const TrapFrequencies f = trap_frequencies(t, mass);
  t.radial_freq = f.radial;
  t.axial_freq = f.axial;
  return t;
}

}  // namespace cqed
