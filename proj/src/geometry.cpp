#include "cqed/geometry.hpp"

#include <cmath>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {

FieldGeometry make_geometry(const CavityParams& cavity, const DerivedCavity& derived,
                            const TrapParams& trap, double stark_coeff_dipole,
                            double stark_coeff_lock, double node_origin) {
  FieldGeometry g;
  g.waist = derived.waist;
  g.k_probe = two_pi / cavity.probe_wavelength;
  g.k_lock = two_pi / cavity.lock_wavelength;
  g.lock_spacing = cavity.lock_wavelength / 2.0;
  g.beat_half_length = derived.beat_half_length;
  g.trap = trap;
  g.k_dipole = two_pi / trap.dipole_wavelength;
  g.stark_coeff_dipole = stark_coeff_dipole;
  g.stark_coeff_lock = stark_coeff_lock;
  g.node_origin = node_origin;
  return g;
}

double mode_amplitude(const FieldGeometry& geom, const Position& pos) {
  const double transverse = std::exp(-(pos.x * pos.x + pos.y * pos.y) / (geom.waist * geom.waist));
  return std::cos(geom.k_probe * (pos.z - geom.node_origin)) * transverse;
}

double coupling_at(const FieldGeometry& geom, const AtomStructure& atom, const Position& pos, int mF) {
  return coupling_for_mF(atom.g_max, mF) * std::abs(mode_amplitude(geom, pos));
}

std::vector<LockNode> lock_node_positions(const FieldGeometry& geom, double z_min, double z_max) {
  std::vector<LockNode> nodes;
  if (!(z_min <= z_max)) return nodes;
  const long first = static_cast<long>(std::ceil((z_min - geom.node_origin) / geom.lock_spacing));
  const long last = static_cast<long>(std::floor((z_max - geom.node_origin) / geom.lock_spacing));
  nodes.reserve(static_cast<std::size_t>(std::max(0L, last - first + 1)));
  for (long n = first; n <= last; ++n) {
    LockNode node;
    node.index = n;
    node.z = geom.node_origin + static_cast<double>(n) * geom.lock_spacing;
    node.envelope = std::abs(std::cos(geom.k_probe * (node.z - geom.node_origin)));
    nodes.push_back(node);
  }
  return nodes;
}

double nearest_node_z(const FieldGeometry& geom, double offset) {
  return geom.node_origin + std::round(offset / geom.lock_spacing) * geom.lock_spacing;
}

double dipole_potential(const FieldGeometry& geom, const Position& pos) {
  const double w = geom.trap.dipole_waist;
  const double axial = std::cos(geom.k_dipole * pos.y);
  return -geom.trap.dipole_depth * std::exp(-2.0 * pos.x * pos.x / (w * w)) * axial * axial;
}

double lock_potential(const FieldGeometry& geom, const Position& pos) {
  const double w = geom.waist;
  const double standing = std::sin(geom.k_lock * (pos.z - geom.node_origin));
  const double envelope = std::exp(-2.0 * (pos.x * pos.x + pos.y * pos.y) / (w * w));
  return geom.trap.lock_potential_height * standing * standing * envelope;
}

double stark_shift(const FieldGeometry& geom, const Position& pos) {
  const Position ref{0.0, 0.0, geom.node_origin};
  const double d_dipole = dipole_potential(geom, pos) - dipole_potential(geom, ref);
  const double d_lock = lock_potential(geom, pos) - lock_potential(geom, ref);
  return geom.stark_coeff_dipole * d_dipole + geom.stark_coeff_lock * d_lock;
}

double stark_shift_conveyor(const FieldGeometry& geom, double x, double dy, double y_centre, double z) {
  const double d_dipole =
      dipole_potential(geom, Position{x, dy, 0.0}) - (-geom.trap.dipole_depth);
  const double d_lock = lock_potential(geom, Position{x, y_centre + dy, z});
  return geom.stark_coeff_dipole * d_dipole + geom.stark_coeff_lock * d_lock;
}

}  // namespace cqed
