#pragma once

#include <vector>

#include "cqed/physics.hpp"

namespace cqed {

// Coordinates: y is the dipole-trap/transport axis, z the cavity axis,
// x the mutual transverse axis. Origin at the mode centre.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Spatial model: TEM00 probe mode, dipole-trap standing wave along y,
// repulsive lock lattice along z, and the transition-shift map they create.
struct FieldGeometry {
  double waist = 0.0;            // cavity mode waist w_cav, m
  double k_probe = 0.0;          // 2 pi / lambda_p
  double k_lock = 0.0;           // 2 pi / lambda_l
  double lock_spacing = 0.0;     // lambda_l / 2, node distance
  double beat_half_length = 0.0; // m
  TrapParams trap;
  double k_dipole = 0.0;         // 2 pi / lambda_dipole
  double stark_coeff_dipole = 0.0;  // Hz per Joule of potential difference
  double stark_coeff_lock = 0.0;    // Hz per Joule
  double node_origin = 0.0;      // z of the lock node placed on a probe antinode
};

FieldGeometry make_geometry(const CavityParams& cavity, const DerivedCavity& derived,
                            const TrapParams& trap, double stark_coeff_dipole,
                            double stark_coeff_lock, double node_origin);

// TEM00 amplitude in [-1, 1]: cos(k_p (z - node_origin)) exp(-(x^2+y^2)/w^2)
double mode_amplitude(const FieldGeometry& geom, const Position& pos);

// position- and mF-resolved coupling g(r, mF) = g(mF) |psi(r)|, rad/s
double coupling_at(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos, int mF);

struct LockNode {
  long index = 0;
  double z = 0.0;         // m
  double envelope = 0.0;  // |cos(k_p (z - node_origin))| in [0, 1]
};

// lock-lattice nodes within [z_min, z_max], ordered by z
std::vector<LockNode> lock_node_positions(const FieldGeometry& geom, double z_min, double z_max);

// z of the lattice node nearest node_origin + offset
double nearest_node_z(const FieldGeometry& geom, double offset);

// attractive standing-wave dipole potential, J (negative in the wells)
double dipole_potential(const FieldGeometry& geom, const Position& pos);

// repulsive lock-lattice potential, J (zero at the nodes)
double lock_potential(const FieldGeometry& geom, const Position& pos);

// probe-transition detuning shift relative to an atom at the reference
// point (0, 0, node_origin), Hz
double stark_shift(const FieldGeometry& geom, const Position& pos);

// Stark shift for an atom travelling with the conveyor: the dipole-trap
// standing wave is evaluated in the co-moving well (offset dy from its
// centre) while the cavity-frame fields see the lab position. Equals
// stark_shift for a well centred at y = 0.
double stark_shift_conveyor(const FieldGeometry& geom, double x, double dy, double y_centre, double z);

}  // namespace cqed
