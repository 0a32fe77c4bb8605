#include "cqed/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

namespace cqed::angular {

namespace {

// factorials up to 40! cover every sum term for the j values used here
constexpr int kMaxFact = 41;

const std::array<double, kMaxFact>& factorials() {
  static const std::array<double, kMaxFact> table = [] {
    std::array<double, kMaxFact> t{};
    t[0] = 1.0;
    for (int i = 1; i < kMaxFact; ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  return table;
}

inline double fact(int n) { return n >= 0 && n < kMaxFact ? factorials()[static_cast<std::size_t>(n)] : 0.0; }

// doubled representation keeps half-integer bookkeeping exact
inline int doubled(double j) { return static_cast<int>(std::lround(2.0 * j)); }

inline bool is_integer_sum(int two_a, int two_b, int two_c) { return ((two_a + two_b + two_c) & 1) == 0; }

inline bool triangle_ok(int two_a, int two_b, int two_c) {
  return is_integer_sum(two_a, two_b, two_c) && two_c >= std::abs(two_a - two_b) && two_c <= two_a + two_b;
}

// triangle coefficient Delta(a,b,c); arguments doubled
double triangle_coeff(int two_a, int two_b, int two_c) {
  const int p = (two_a + two_b - two_c) / 2;
  const int q = (two_a - two_b + two_c) / 2;
  const int r = (-two_a + two_b + two_c) / 2;
  const int s = (two_a + two_b + two_c) / 2 + 1;
  return fact(p) * fact(q) * fact(r) / fact(s);
}

}  // namespace

double clebsch_gordan(double j1d, double m1d, double j2d, double m2d, double Jd, double Md) {
  const int j1 = doubled(j1d), m1 = doubled(m1d);
  const int j2 = doubled(j2d), m2 = doubled(m2d);
  const int J = doubled(Jd), M = doubled(Md);

  if (m1 + m2 != M) return 0.0;
  if (!triangle_ok(j1, j2, J)) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(M) > J) return 0.0;
  if (((j1 + m1) & 1) || ((j2 + m2) & 1) || ((J + M) & 1)) return 0.0;

  const double prefactor =
      std::sqrt((J + 1.0) * triangle_coeff(j1, j2, J) * fact((J + M) / 2) * fact((J - M) / 2) *
                fact((j1 - m1) / 2) * fact((j1 + m1) / 2) * fact((j2 - m2) / 2) * fact((j2 + m2) / 2));

  // Racah sum over k; limits follow from the factorial arguments
  const int k_min = std::max({0, (j2 - J - m1) / 2, (j1 - J + m2) / 2});
  const int k_max = std::min({(j1 + j2 - J) / 2, (j1 - m1) / 2, (j2 + m2) / 2});

  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double denom = fact(k) * fact((j1 + j2 - J) / 2 - k) * fact((j1 - m1) / 2 - k) *
                         fact((j2 + m2) / 2 - k) * fact((J - j2 + m1) / 2 + k) * fact((J - j1 - m2) / 2 + k);
    sum += ((k & 1) ? -1.0 : 1.0) / denom;
  }
  return prefactor * sum;
}

double wigner_6j(double j1d, double j2d, double j3d, double j4d, double j5d, double j6d) {
  const int j1 = doubled(j1d), j2 = doubled(j2d), j3 = doubled(j3d);
  const int j4 = doubled(j4d), j5 = doubled(j5d), j6 = doubled(j6d);

  if (!triangle_ok(j1, j2, j3) || !triangle_ok(j1, j5, j6) || !triangle_ok(j4, j2, j6) ||
      !triangle_ok(j4, j5, j3)) {
    return 0.0;
  }

  const double pref = std::sqrt(triangle_coeff(j1, j2, j3) * triangle_coeff(j1, j5, j6) *
                                triangle_coeff(j4, j2, j6) * triangle_coeff(j4, j5, j3));

  const int a1 = (j1 + j2 + j3) / 2;
  const int a2 = (j1 + j5 + j6) / 2;
  const int a3 = (j4 + j2 + j6) / 2;
  const int a4 = (j4 + j5 + j3) / 2;
  const int b1 = (j1 + j2 + j4 + j5) / 2;
  const int b2 = (j2 + j3 + j5 + j6) / 2;
  const int b3 = (j3 + j1 + j6 + j4) / 2;

  const int t_min = std::max({a1, a2, a3, a4});
  const int t_max = std::min({b1, b2, b3});

  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double denom = fact(t - a1) * fact(t - a2) * fact(t - a3) * fact(t - a4) * fact(b1 - t) *
                         fact(b2 - t) * fact(b3 - t);
    sum += ((t & 1) ? -1.0 : 1.0) * fact(t + 1) / denom;
  }
  return pref * sum;
}

}  // namespace cqed::angular
