#include "cqed/rng.hpp"

#include <cmath>

#include "cqed/constants.hpp"

namespace cqed {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_normal_ = r * std::sin(two_pi * u2);
  has_spare_ = true;
  return r * std::cos(two_pi * u2);
}

double Rng::exponential(double rate) {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  return -std::log(u) / rate;
}

long Rng::poisson(double mean) {
  long count = 0;
  // split large means so exp(-chunk) stays far from underflow
  while (mean > 60.0) {
    double chunk = 60.0;
    const double limit = std::exp(-chunk);
    long k = 0;
    double prod = 1.0;
    do {
      prod *= uniform();
      ++k;
    } while (prod > limit);
    count += k - 1;
    mean -= chunk;
  }
  const double limit = std::exp(-mean);
  long k = 0;
  double prod = 1.0;
  do {
    prod *= uniform();
    ++k;
  } while (prod > limit);
  return count + k - 1;
}

std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = master;
  (void)splitmix64(h);
  std::uint64_t acc = h;
  for (std::uint64_t p : path) {
    std::uint64_t mixed = acc ^ (p + 0x9E3779B97F4A7C15ULL);
    acc = splitmix64(mixed);
  }
  return acc;
}

}  // namespace cqed
