#include "cqed/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/rng.hpp"

namespace cqed {

namespace {

constexpr int kMaxRejectionIters = 200000;

// radial truncation: the well is considered escaped where the potential has
// decayed to 1% of its depth
double radial_cutoff(const FieldGeometry& geom) {
  return geom.trap.dipole_waist * std::sqrt(std::log(100.0) / 2.0);
}

struct AxisSigmas {
  double x, y, z;
};

AxisSigmas harmonic_sigmas(const EnsembleSpec& spec, const FieldGeometry& geom, double mass) {
  const double kt = k_boltzmann * spec.temperature;
  const double omega_r = geom.trap.radial_freq;
  const double omega_y = geom.trap.axial_freq;
  const double omega_z = lock_axial_frequency(geom, mass);
  return {std::sqrt(kt / (mass * omega_r * omega_r)), std::sqrt(kt / (mass * omega_y * omega_y)),
          std::sqrt(kt / (mass * omega_z * omega_z))};
}

double rejection_sample(Rng& rng, double half_width, double beta, const auto& potential) {
  for (int it = 0; it < kMaxRejectionIters; ++it) {
    const double candidate = rng.uniform(-half_width, half_width);
    if (rng.uniform() < std::exp(-beta * potential(candidate))) return candidate;
  }
  throw NumericalError("axis rejection sampling failed to accept within iteration budget");
}

}  // namespace

EnsembleSpec::EnsembleSpec() {
  mf_weights.fill(1.0 / 9.0);
  g_bin = mhz_to_angular(0.1);
  delta_bin = mhz_to_angular(0.5);
}

void validate(const EnsembleSpec& spec) {
  if (!(spec.temperature > 0.0)) throw ValidationError("ensemble temperature must be positive");
  if (spec.n_samples < 1) throw ValidationError("n_samples must be at least 1");
  double total = 0.0;
  for (double w : spec.mf_weights) {
    if (w < 0.0) throw ValidationError("mF weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mF weights must sum to 1");
  if (spec.g_bin <= 0.0 || spec.delta_bin <= 0.0) throw ValidationError("table bins must be positive");
}

double lock_axial_frequency(const FieldGeometry& geom, double mass) {
  return geom.k_lock * std::sqrt(2.0 * geom.trap.lock_potential_height / mass);
}

std::vector<MotionalSample> sample_positions(const EnsembleSpec& spec, const FieldGeometry& geom,
                                             double mass, double y_centre) {
  validate(spec);
  const double x_max = radial_cutoff(geom);
  const AxisSigmas sigma = harmonic_sigmas(spec, geom, mass);

  // untrapped criterion: over half of the radial thermal distribution would
  // sit beyond the truncation radius
  const double outside = std::erfc(x_max / (sigma.x * std::sqrt(2.0)));
  if (outside > 0.5) {
    throw UntrappedRegimeError("temperature " + std::to_string(spec.temperature * 1e3) +
                               " mK leaves the radial well: " + std::to_string(outside * 100.0) +
                               "% of samples reject");
  }

  const double z_node = nearest_node_z(geom, spec.node_offset);
  const double beta = 1.0 / (k_boltzmann * spec.temperature);
  const double u0 = geom.trap.dipole_depth;
  const double ul = geom.trap.lock_potential_height;
  const double w_dt = geom.trap.dipole_waist;

  std::vector<MotionalSample> samples(static_cast<std::size_t>(spec.n_samples));
  for (int i = 0; i < spec.n_samples; ++i) {
    Rng rng = substream(spec.master_seed, {0x5A11u, static_cast<std::uint64_t>(i)});
    double x, dy, dz;
    if (spec.sampling == SamplingMode::Harmonic) {
      x = sigma.x * rng.normal();
      dy = sigma.y * rng.normal();
      dz = sigma.z * rng.normal();
    } else {
      x = rejection_sample(rng, x_max, beta, [&](double v) {
        return u0 * (1.0 - std::exp(-2.0 * v * v / (w_dt * w_dt)));
      });
      dy = rejection_sample(rng, geom.trap.dipole_wavelength / 4.0, beta, [&](double v) {
        const double s = std::sin(geom.k_dipole * v);
        return u0 * s * s;
      });
      dz = rejection_sample(rng, geom.lock_spacing / 2.0, beta, [&](double v) {
        const double s = std::sin(geom.k_lock * v);
        return ul * s * s;
      });
    }
    samples[static_cast<std::size_t>(i)] =
        MotionalSample{Position{x, y_centre + dy, z_node + dz}, 1.0};
  }
  return samples;
}

AveragedTransmission averaged_transmission(const EnsembleSpec& spec, const FieldGeometry& geom,
                                           const AtomStructure& atom, const DriveParams& drive,
                                           TransmissionTable& table, double y_centre,
                                           double g_scale, int workers) {
  const std::vector<MotionalSample> samples = sample_positions(spec, geom, atom.mass, y_centre);

  // per-(sample, mF) solver inputs; stark shifts evaluated in the conveyor
  // frame of the occupied dipole-trap well
  const std::size_t n = samples.size();
  std::vector<std::pair<double, double>> points;
  points.reserve(n * 9);
  std::vector<double> amps(n), shifts(n);
  for (std::size_t s = 0; s < n; ++s) {
    const Position& pos = samples[s].position;
    amps[s] = std::abs(mode_amplitude(geom, pos));
    const double dy = pos.y - y_centre;
    shifts[s] = two_pi * stark_shift_conveyor(geom, pos.x, dy, y_centre, pos.z);
    for (int m = -4; m <= 4; ++m) {
      if (spec.mf_weights[static_cast<std::size_t>(m + 4)] == 0.0) continue;
      const double g = g_scale * atom.coupling(m) * amps[s];
      points.emplace_back(g, drive.delta_pa + shifts[s]);
    }
  }
  table.prefill(points, workers);

  // fixed-order reduction over samples
  double mean = 0.0, m2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double value = 0.0;
    for (int m = -4; m <= 4; ++m) {
      const double w = spec.mf_weights[static_cast<std::size_t>(m + 4)];
      if (w == 0.0) continue;
      const double g = g_scale * atom.coupling(m) * amps[s];
      value += w * table.lookup(g, drive.delta_pa + shifts[s]);
    }
    const double delta = value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (value - mean);
  }
  AveragedTransmission out;
  out.mean = mean;
  out.std_error = n > 1 ? std::sqrt(m2 / (static_cast<double>(n) * static_cast<double>(n - 1))) : 0.0;
  return out;
}

double fit_temperature(double target, const EnsembleSpec& spec, const FieldGeometry& geom,
                       const AtomStructure& atom, const DriveParams& drive,
                       TransmissionTable& table, double t_lo, double t_hi, double tol,
                       int workers) {
  if (!(target > 0.0 && target < 1.0)) throw ValidationError("fit target must be inside (0, 1)");

  EnsembleSpec working = spec;
  const auto evaluate = [&](double temperature) {
    working.temperature = temperature;
    return averaged_transmission(working, geom, atom, drive, table, 0.0, 1.0, workers).mean;
  };

  double f_lo = evaluate(t_lo);
  double f_hi = evaluate(t_hi);
  const double attain_min = std::min(f_lo, f_hi);
  const double attain_max = std::max(f_lo, f_hi);
  if ((f_lo - target) * (f_hi - target) > 0.0) {
    throw BracketingError("target " + std::to_string(target) + " outside attainable range [" +
                          std::to_string(attain_min) + ", " + std::to_string(attain_max) +
                          "] over the temperature bracket");
  }

  double lo = t_lo, hi = t_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = evaluate(mid);
    if ((f_lo - target) * (f_mid - target) <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      f_lo = f_mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace cqed
