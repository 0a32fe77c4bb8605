#include "cqed/detection.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/rng.hpp"

namespace cqed {

void validate(const DetectionChain& c) {
  if (!(c.mirror_fraction > 0.0) || c.mirror_fraction > 1.0 || !(c.path_efficiency > 0.0) ||
      c.path_efficiency > 1.0) {
    throw ValidationError("detection efficiencies must be in (0, 1]");
  }
  if (c.background_rate < 0.0) throw ValidationError("background rate must be non-negative");
  if (!(c.calibration > 0.0)) throw ValidationError("calibration must be positive");
}

double mirror_outcoupling(const CavityParams& cavity) {
  return cavity.mirror_transmission /
         (2.0 * (cavity.mirror_transmission + cavity.mirror_loss));
}

DetectionChain make_detection_chain(const CavityParams& cavity, double path_efficiency,
                                    double background_rate, double calibration) {
  DetectionChain chain;
  chain.mirror_fraction = mirror_outcoupling(cavity);
  chain.path_efficiency = path_efficiency;
  chain.background_rate = background_rate;
  chain.calibration = calibration;
  validate(chain);
  return chain;
}

double expected_count_rate(double n_photon, const DetectionChain& chain, double kappa) {
  if (n_photon < 0.0) throw ValidationError("photon number must be non-negative");
  return chain.calibration * 2.0 * kappa * n_photon * chain.mirror_fraction *
             chain.path_efficiency +
         chain.background_rate;
}

std::vector<TraceEvent> hopping_process(double rate, const FieldGeometry& geom, double duration,
                                        std::uint64_t seed) {
  if (rate < 0.0) throw ValidationError("hop rate must be non-negative");
  std::vector<TraceEvent> events;
  if (rate == 0.0 || duration <= 0.0) return events;

  // thermal reachability of neighbouring nodes
  const int max_jump = std::max(1, static_cast<int>(std::ceil(3.0 * geom.waist / geom.lock_spacing)));
  std::vector<double> cumulative;
  std::vector<long> jumps;
  double total = 0.0;
  for (int dn = -max_jump; dn <= max_jump; ++dn) {
    if (dn == 0) continue;
    const double dz = dn * geom.lock_spacing;
    total += std::exp(-dz * dz / (geom.waist * geom.waist));
    cumulative.push_back(total);
    jumps.push_back(dn);
  }

  Rng rng(seed);
  long node = 0;
  double t = rng.exponential(rate);
  while (t < duration) {
    const double pick = rng.uniform() * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t idx = std::min(static_cast<std::size_t>(it - cumulative.begin()),
                                     jumps.size() - 1);
    node += jumps[idx];
    events.push_back(TraceEvent{t, TraceEvent::Kind::Hop, node});
    t += rng.exponential(rate);
  }
  return events;
}

std::vector<TraceBin> synth_trace(std::span<const TraceEvent> events, double bin,
                                  const DetectionChain& chain, double kappa, double n_empty,
                                  double probe_on_time, double duration,
                                  const std::function<double(long)>& node_transmission,
                                  std::uint64_t seed) {
  if (!(bin > 0.0)) throw ValidationError("trace bin width must be positive");
  if (!(duration > 0.0)) throw ValidationError("trace duration must be positive");
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) throw ValidationError("trace events must be ordered");
  }

  Rng rng(seed);
  std::vector<TraceBin> trace;
  trace.reserve(static_cast<std::size_t>(duration / bin) + 1);

  bool atom_present = false;
  long node = 0;
  std::size_t next_event = 0;
  const long n_bins = std::lround(std::floor(duration / bin));
  for (long b = 0; b < n_bins; ++b) {
    const double t0 = b * bin;
    // apply events that begin before this bin does
    while (next_event < events.size() && events[next_event].time <= t0) {
      const TraceEvent& ev = events[next_event];
      switch (ev.kind) {
        case TraceEvent::Kind::Insertion:
          atom_present = true;
          node = ev.node_index;
          break;
        case TraceEvent::Kind::Removal:
          atom_present = false;
          break;
        case TraceEvent::Kind::Hop:
          node = ev.node_index;
          break;
      }
      ++next_event;
    }

    TraceBin out;
    out.t = t0;
    out.node_index = atom_present ? node : -1;
    if (t0 < probe_on_time) {
      out.true_rate = chain.background_rate;
    } else {
      const double t_rel = atom_present ? node_transmission(node) : 1.0;
      out.true_rate = expected_count_rate(n_empty * t_rel, chain, kappa);
    }
    out.counts = rng.poisson(out.true_rate * bin);
    trace.push_back(out);
  }
  return trace;
}

}  // namespace cqed
