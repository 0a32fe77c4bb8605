#include "cqed/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/parallel.hpp"
#include "cqed/rng.hpp"

namespace cqed {

namespace {

// per-level squared couplings, Stark-shifted detunings and the dispersive
// photon number for an atom at pos whose dipole-trap well is at y_centre
struct LevelRates {
  std::array<double, 3> g2{};     // (rad/s)^2
  std::array<double, 3> delta{};  // rad/s
  double n_cav = 0.0;
};

LevelRates level_rates(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos,
                       double y_centre, int mF, const PumpProtocol& pump, double kappa) {
  const double amp = std::abs(mode_amplitude(geom, pos));
  const double dy = pos.y - y_centre;
  const double stark = two_pi * stark_shift_conveyor(geom, pos.x, dy, y_centre, pos.z);
  const std::array<double, 3> base{pump.detuning_f3, pump.detuning_f4, pump.detuning_f5};

  LevelRates lr;
  std::vector<double> gs(3), ds(3);
  for (std::size_t level = 0; level < 3; ++level) {
    const double strength = pi_line_strength(static_cast<ExcitedLevel>(level + 3), mF);
    lr.g2[level] = strength * atom.g_max * atom.g_max * amp * amp;
    lr.delta[level] = base[level] + stark;
    gs[level] = std::sqrt(lr.g2[level]);
    ds[level] = lr.delta[level];
  }
  lr.n_cav = pump.n_empty * weak_drive_transmission_multilevel(gs, ds, 0.0, kappa, atom.gamma);
  return lr;
}

int run_pump_chain(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos,
                   double y_centre, int mF, const PumpProtocol& pump, double kappa,
                   std::uint64_t seed, bool* step_warning) {
  const LevelRates lr = level_rates(geom, atom, pos, y_centre, mF, pump, kappa);

  std::array<double, 3> rate{};
  double rate_total = 0.0;
  for (std::size_t level = 0; level < 3; ++level) {
    if (pump.use_master_equation && lr.g2[level] > 0.0 && lr.n_cav > 0.0) {
      // verification path: excitation from a per-level steady-state solve,
      // rescaled to the local photon number of the multi-level model
      DriveParams drive;
      drive.delta_pa = lr.delta[level];
      drive.delta_pc = 0.0;
      drive.n_empty = pump.n_empty;
      drive.n_max = 3;
      const Matrix rho =
          steady_state(build_liouvillian(std::sqrt(lr.g2[level]), drive, kappa, atom.gamma));
      const double n_actual = photon_number(rho, drive.n_max);
      rate[level] = 2.0 * atom.gamma * atomic_excitation(rho, drive.n_max) *
                    (n_actual > 0.0 ? lr.n_cav / n_actual : 0.0);
    } else {
      rate[level] = scattering_rate(std::sqrt(lr.g2[level]), lr.delta[level], lr.n_cav, atom.gamma);
    }
    rate_total += rate[level];
  }
  const double p_exc = rate_total * pump.step;
  if (step_warning != nullptr && p_exc > 0.1) *step_warning = true;
  if (rate_total <= 0.0) return 4;

  const long n_steps = std::lround(pump.hold_time / pump.step);
  Rng rng(seed);
  for (long s = 0; s < n_steps; ++s) {
    if (rng.uniform() >= p_exc) continue;  // no scattering event this interval
    const double pick = rng.uniform() * rate_total;
    std::size_t level = 0;
    double acc = rate[0];
    while (level + 1 < 3 && pick >= acc) acc += rate[++level];
    if (rng.uniform() < atom.branching[level].to_f3) return 3;  // dark state reached
  }
  return 4;
}

double transfer_mean_at(const FieldGeometry& geom, const AtomStructure& atom,
                        const PumpProtocol& pump, const EnsembleSpec& spec, double kappa,
                        double y_centre, std::size_t position_index, double* std_error,
                        int workers) {
  const int n_traj = pump.n_trajectories;
  std::vector<double> outcome(static_cast<std::size_t>(n_traj) * 9, 0.0);

  parallel_for(static_cast<std::size_t>(n_traj), workers, [&](std::size_t k) {
    for (int m = -4; m <= 4; ++m) {
      // one thermal position per trajectory, substreams keyed by
      // (position, mF, trajectory)
      EnsembleSpec one = spec;
      one.n_samples = 1;
      one.master_seed = derive_stream(
          spec.master_seed, {0xF1A7u, position_index, static_cast<std::uint64_t>(m + 4), k});
      const Position pos = sample_positions(one, geom, atom.mass, y_centre)[0].position;
      const std::uint64_t chain_seed = derive_stream(
          spec.master_seed, {0xC4A1u, position_index, static_cast<std::uint64_t>(m + 4), k});
      const int final_state = run_pump_chain(geom, atom, pos, y_centre, m, pump, kappa, chain_seed, nullptr);
      outcome[k * 9 + static_cast<std::size_t>(m + 4)] = final_state == 3 ? 1.0 : 0.0;
    }
  });

  double mean = 0.0, m2 = 0.0;
  for (int k = 0; k < n_traj; ++k) {
    double value = 0.0;
    for (int m = -4; m <= 4; ++m) {
      value += spec.mf_weights[static_cast<std::size_t>(m + 4)] *
               outcome[static_cast<std::size_t>(k) * 9 + static_cast<std::size_t>(m + 4)];
    }
    const double delta = value - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (value - mean);
  }
  if (std_error != nullptr) {
    *std_error = n_traj > 1 ? pump.survival * std::sqrt(m2 / (static_cast<double>(n_traj) *
                                                              static_cast<double>(n_traj - 1)))
                            : 0.0;
  }
  return pump.survival * mean;
}

}  // namespace

void validate(const SweepProtocol& p) {
  if (!(p.duration > 0.0)) throw ValidationError("sweep duration must be positive");
  if (p.n_atoms != 1 && p.n_atoms != 2) throw ValidationError("sweep supports 1 or 2 atoms");
  if (!(p.time_step > 0.0)) throw ValidationError("sweep time step must be positive");
  if (p.dwell < 0.0) throw ValidationError("dwell must be non-negative");
  if (p.node_average && p.node_average_count < 1) {
    throw ValidationError("node_average_count must be positive");
  }
}

std::vector<SweepPoint> sweep_transmission(const SweepProtocol& protocol, const EnsembleSpec& spec,
                                           const FieldGeometry& geom, const AtomStructure& atom,
                                           const DriveParams& drive, TransmissionTable& table,
                                           int workers) {
  validate(protocol);
  validate(spec);
  const double g_scale = std::sqrt(static_cast<double>(protocol.n_atoms));
  const double span = protocol.end_y - protocol.start_y;

  std::vector<SweepPoint> series;
  for (long i = 0;; ++i) {
    double t = static_cast<double>(i) * protocol.time_step;
    const bool last = t >= protocol.duration;
    if (last) t = protocol.duration;
    SweepPoint point;
    point.t = t;
    point.y = protocol.start_y + span * (t / protocol.duration);
    series.push_back(point);
    if (last) break;
  }

  for (auto& point : series) {
    if (protocol.node_average) {
      // atoms enter the lattice in different nodes: uniform average of the
      // occupied-node offset over one beat period
      double total = 0.0;
      for (int j = 0; j < protocol.node_average_count; ++j) {
        EnsembleSpec shifted = spec;
        shifted.node_offset =
            spec.node_offset +
            2.0 * geom.beat_half_length * (static_cast<double>(j) / protocol.node_average_count);
        shifted.master_seed =
            derive_stream(spec.master_seed, {0xBEA7u, static_cast<std::uint64_t>(j)});
        total +=
            averaged_transmission(shifted, geom, atom, drive, table, point.y, g_scale, workers).mean;
      }
      point.t_rel = total / protocol.node_average_count;
    } else {
      point.t_rel =
          averaged_transmission(spec, geom, atom, drive, table, point.y, g_scale, workers).mean;
    }
  }
  return series;
}

double effective_g(double g, int n_atoms) {
  if (n_atoms < 1) throw ValidationError("atom number must be at least 1");
  return g * std::sqrt(static_cast<double>(n_atoms));
}

double dip_width(std::span<const SweepPoint> series, double level) {
  if (series.size() < 2) throw NumericalError("dip width needs at least two samples");

  // boundaries of the region where t_rel < level
  std::vector<double> edges;
  if (series.front().t_rel < level) edges.push_back(series.front().y);
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const auto& a = series[i];
    const auto& b = series[i + 1];
    if ((a.t_rel < level) != (b.t_rel < level)) {
      const double frac = (level - a.t_rel) / (b.t_rel - a.t_rel);
      edges.push_back(a.y + frac * (b.y - a.y));
    }
  }
  if (series.back().t_rel < level) edges.push_back(series.back().y);
  if (edges.empty()) {
    throw NumericalError("transmission never crosses level " + std::to_string(level));
  }
  const auto [lo, hi] = std::minmax_element(edges.begin(), edges.end());
  return *hi - *lo;
}

void validate(const PumpProtocol& p) {
  if (!(p.hold_time > 0.0) || !(p.step > 0.0)) throw ValidationError("pump times must be positive");
  const double ratio = p.hold_time / p.step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("pump step must divide the hold time");
  }
  if (!(p.survival > 0.0) || p.survival > 1.0) throw ValidationError("survival must be in (0, 1]");
  if (!(p.n_empty >= 0.0)) throw ValidationError("pump photon number must be non-negative");
  if (p.n_trajectories < 1) throw ValidationError("n_trajectories must be positive");
}

PumpProtocol make_pump_protocol(const AtomStructure& atom) {
  PumpProtocol p;
  p.detuning_f3 = atom.excited_detunings[0];
  p.detuning_f4 = atom.excited_detunings[1];
  p.detuning_f5 = atom.excited_detunings[2];
  return p;
}

double dispersive_photon_number(const FieldGeometry& geom, const AtomStructure& atom,
                                const Position& pos, int mF, const PumpProtocol& pump,
                                double kappa) {
  validate(pump);
  if (mF < -4 || mF > 4) throw DomainError("mF outside the F=4 manifold");
  const double amp = std::abs(mode_amplitude(geom, pos));
  std::vector<double> gs(3), ds{pump.detuning_f3, pump.detuning_f4, pump.detuning_f5};
  for (std::size_t level = 0; level < 3; ++level) {
    const double strength = pi_line_strength(static_cast<ExcitedLevel>(level + 3), mF);
    gs[level] = std::sqrt(strength) * atom.g_max * amp;
  }
  return pump.n_empty * weak_drive_transmission_multilevel(gs, ds, 0.0, kappa, atom.gamma);
}

int pump_trajectory(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos,
                    int mF, const PumpProtocol& pump, double kappa, std::uint64_t seed,
                    bool* step_warning) {
  validate(pump);
  if (mF < -4 || mF > 4) throw DomainError("mF outside the F=4 manifold");
  return run_pump_chain(geom, atom, pos, 0.0, mF, pump, kappa, seed, step_warning);
}

TransferCurve transfer_map(std::span<const double> positions, const PumpProtocol& pump,
                           const EnsembleSpec& spec, const FieldGeometry& geom,
                           const AtomStructure& atom, double kappa, int workers) {
  validate(pump);
  validate(spec);
  TransferCurve curve;
  curve.positions.assign(positions.begin(), positions.end());
  curve.transfer_probability.resize(positions.size());
  curve.std_error.resize(positions.size());
  for (std::size_t p = 0; p < positions.size(); ++p) {
    double se = 0.0;
    curve.transfer_probability[p] =
        transfer_mean_at(geom, atom, pump, spec, kappa, positions[p], p, &se, workers);
    curve.std_error[p] = se;
  }
  return curve;
}

double fit_photon_number(const TransferCurve& measured, const PumpProtocol& pump,
                         const EnsembleSpec& spec, const FieldGeometry& geom,
                         const AtomStructure& atom, double kappa, double n_lo, double n_hi,
                         int workers) {
  if (measured.positions.empty()) throw ValidationError("measured transfer curve is empty");
  if (!(n_lo > 0.0 && n_hi > n_lo)) {
    throw ValidationError("photon-number bounds must satisfy 0 < lo < hi");
  }

  const auto sse = [&](double n_empty) {
    PumpProtocol trial = pump;
    trial.n_empty = n_empty;
    const TransferCurve model =
        transfer_map(measured.positions, trial, spec, geom, atom, kappa, workers);
    double total = 0.0;
    for (std::size_t i = 0; i < measured.positions.size(); ++i) {
      const double r = model.transfer_probability[i] - measured.transfer_probability[i];
      total += r * r;
    }
    return total;
  };

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = n_lo, b = n_hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = sse(c), fd = sse(d);
  const double f_lo = sse(a), f_hi = sse(b);
  const double spread = std::max({f_lo, f_hi, fc, fd}) - std::min({f_lo, f_hi, fc, fd});
  if (spread < 1e-12 * std::max(1.0, std::max(f_lo, f_hi))) {
    throw NonIdentifiableError("transfer curve carries no information about the photon number");
  }
  while (b - a > 1e-4 * (n_hi - n_lo)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = sse(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = sse(d);
    }
  }
  const double best = 0.5 * (a + b);
  const double margin = 0.01 * (n_hi - n_lo);
  if (best - n_lo < margin || n_hi - best < margin) {
    throw NonIdentifiableError("fitted photon number sits at a search bound: " +
                               std::to_string(best));
  }
  return best;
}

}  // namespace cqed
