#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cqed/geometry.hpp"

namespace cqed {

// Photon path from intra-cavity field to detector counts. mirror_fraction
// is T/[2(T+A)]; path_efficiency bundles grating, filter, optics and the
// detector quantum efficiency. calibration rescales the whole chain.
struct DetectionChain {
  double mirror_fraction = 0.0;
  double path_efficiency = 0.09;
  double background_rate = 1000.0;  // counts/s
  double calibration = 1.0;
};

void validate(const DetectionChain& chain);
double mirror_outcoupling(const CavityParams& cavity);
DetectionChain make_detection_chain(const CavityParams& cavity, double path_efficiency,
                                    double background_rate, double calibration);

// counts/s for a given intra-cavity photon number; affine with intercept
// background_rate: calibration * 2 kappa * n * mirror_fraction * path + bg
double expected_count_rate(double n_photon, const DetectionChain& chain, double kappa);

struct TraceEvent {
  enum class Kind { Insertion, Removal, Hop };
  double time = 0.0;  // s
  Kind kind = Kind::Insertion;
  long node_index = 0;  // destination node for hops
};

// Thermally activated node hopping: Poisson event times at the given rate,
// destinations drawn from neighbouring nodes weighted by
// exp(-dz^2 / w_cav^2).
std::vector<TraceEvent> hopping_process(double rate, const FieldGeometry& geom, double duration,
                                        std::uint64_t seed);

struct TraceBin {
  double t = 0.0;        // bin start, s
  long counts = 0;
  double true_rate = 0.0;  // counts/s used for the draw
  long node_index = 0;     // -1 when no atom is present
};

// Synthesises a Poisson count trace from an event list. node_transmission
// maps an occupied node index to the (thermally averaged) relative
// transmission; the empty cavity transmits 1. Probe off => background only.
std::vector<TraceBin> synth_trace(std::span<const TraceEvent> events, double bin,
                                  const DetectionChain& chain, double kappa, double n_empty,
                                  double probe_on_time, double duration,
                                  const std::function<double(long)>& node_transmission,
                                  std::uint64_t seed);

}  // namespace cqed
