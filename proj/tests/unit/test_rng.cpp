#include <doctest.h>

#include <cmath>
#include <vector>

#include "cqed/rng.hpp"

using namespace cqed;

TEST_SUITE_BEGIN("rng");

TEST_CASE("identical seeds give identical streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
  Rng c = substream(7, {1, 2, 3});
  Rng d = substream(7, {1, 2, 3});
  for (int i = 0; i < 100; ++i) CHECK(c.uniform() == d.uniform());
}

TEST_CASE("sibling substreams differ") {
  CHECK(derive_stream(7, {1, 2, 3}) != derive_stream(7, {1, 2, 4}));
  CHECK(derive_stream(7, {1, 2, 3}) != derive_stream(7, {1, 3, 2}));
  CHECK(derive_stream(7, {0}) != derive_stream(8, {0}));
}

TEST_CASE("uniform stays in [0, 1) with the right mean") {
  Rng rng(123);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(5e-3));
}

TEST_CASE("normal moments") {
  Rng rng(99);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sum2 += x * x;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson moments, small and large mean") {
  Rng rng(7);
  for (double mean : {0.5, 4.0, 26.0, 150.0}) {
    double sum = 0.0, sum2 = 0.0;
    const int n = 40000;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / n;
    const double var = sum2 / n - m * m;
    CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(var / mean == doctest::Approx(1.0).epsilon(0.08));
  }
}

TEST_CASE("exponential mean") {
  Rng rng(21);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.02));
}

TEST_SUITE_END();
