#pragma once

namespace cqed::angular {

// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M>. Arguments may be
// half-integral; returns 0 when the couplings are forbidden.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}; 0 when a triad is forbidden.
double wigner_6j(double j1, double j2, double j3, double j4, double j5, double j6);

}  // namespace cqed::angular
