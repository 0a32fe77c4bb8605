#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cqed/geometry.hpp"
#include "cqed/physics.hpp"
#include "cqed/steady_state.hpp"

namespace cqed {

// Thermal position statistics. Harmonic draws per-axis Gaussians whose
// widths follow from the trap curvatures (the <E> = 3 kB T virial model and
// the default); Boltzmann samples the full anharmonic well profiles by
// rejection, truncated where the radial well is 99% escaped.
enum class SamplingMode { Harmonic, Boltzmann };

struct EnsembleSpec {
  double temperature = 0.17e-3;  // K
  int n_samples = 4000;
  std::uint64_t master_seed = 0x5EEDCAFE;
  double node_offset = 0.0;      // m along the beat, occupied lock node
  std::array<double, 9> mf_weights{};  // index mF+4, sums to 1
  SamplingMode sampling = SamplingMode::Harmonic;
  double g_bin = 0.0;            // rad/s, transmission-table quantisation
  double delta_bin = 0.0;        // rad/s

  EnsembleSpec();
};

void validate(const EnsembleSpec& spec);

struct MotionalSample {
  Position position;
  double weight = 1.0;
};

// z-curvature oscillation frequency of a lock-lattice well, rad/s
double lock_axial_frequency(const FieldGeometry& geom, double mass);

// One thermal position per sample around the well at (0, y_centre, z_node)
// where z_node is the lattice node nearest node_origin + node_offset.
// Deterministic per (master_seed, sample index); throws UntrappedRegimeError
// when more than half of harmonic-width draws would leave the radial well.
std::vector<MotionalSample> sample_positions(const EnsembleSpec& spec, const FieldGeometry& geom,
                                             double mass, double y_centre = 0.0);

struct AveragedTransmission {
  double mean = 0.0;
  double std_error = 0.0;
};

// Boltzmann- and mF-averaged relative transmission: mean over samples of the
// mF-weighted transmission at coupling g(r, mF) and detuning
// delta_pa + stark(r). Table lookups are bin-quantised; reduction order is
// fixed by sample index, so results are independent of worker count.
AveragedTransmission averaged_transmission(const EnsembleSpec& spec, const FieldGeometry& geom,
                                           const AtomStructure& atom, const DriveParams& drive,
                                           TransmissionTable& table, double y_centre = 0.0,
                                           double g_scale = 1.0, int workers = 0);

// Scalar fit of the ensemble temperature reproducing a target averaged
// transmission; bisection on [t_lo, t_hi] to tol (all Kelvin). Throws
// BracketingError with the attainable range when the target is outside it.
double fit_temperature(double target, const EnsembleSpec& spec, const FieldGeometry& geom,
                       const AtomStructure& atom, const DriveParams& drive,
                       TransmissionTable& table, double t_lo = 1e-6, double t_hi = 1e-3,
                       double tol = 5e-6, int workers = 0);

}  // namespace cqed
