#pragma once

#include <cstdint>
#include <initializer_list>

namespace cqed {

// xoshiro256++ generator with splitmix64 seeding. All
// Monte-Carlo code derives one generator per logical unit of work
// (sample, trajectory, node, ...) from the master seed and the unit's
// index path, so results do not depend on worker count or scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // uniform double in [0, 1) with 53 random bits
  double uniform();
  double uniform(double lo, double hi);

  // standard normal via Box-Muller (second value cached)
  double normal();

  double exponential(double rate);

  // Poisson sample; multiplication method in chunks, valid for any mean
  long poisson(double mean);

 private:
  std::uint64_t state_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Mixes an index path into a master seed; equal paths give equal streams,
// sibling paths give statistically independent ones.
std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path);

inline Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  return Rng(derive_stream(master, path));
}

}  // namespace cqed
