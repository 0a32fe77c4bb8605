#include <doctest.h>

#include <cmath>
#include <vector>

#include "cqed/constants.hpp"
#include "cqed/ensemble.hpp"
#include "cqed/errors.hpp"
#include "cqed/experiments.hpp"

using namespace cqed;

TEST_SUITE_BEGIN("experiments");

namespace {

struct World {
  CavityParams cavity;
  DerivedCavity derived;
  AtomStructure atom;
  TrapParams trap;
  FieldGeometry geom;
  DriveParams drive;

  World() {
    derived = derive_cavity(cavity);
    atom = make_caesium_atom();
    trap = make_trap(1030e-9, 34e-6, mk_to_joule(0.58), mk_to_joule(0.3), atom.mass);
    geom = make_geometry(cavity, derived, trap, -1.0 / planck, -1.0 / planck, 0.0);
    drive.delta_pa = mhz_to_angular(24.0);
    drive.delta_pc = 0.0;
    drive.n_empty = 0.1;
    drive.n_max = 3;
  }

  TransmissionTable table() const {
    return TransmissionTable(drive, derived.kappa, atom.gamma, mhz_to_angular(0.1),
                             mhz_to_angular(0.5));
  }

  EnsembleSpec spec(double temperature_mk = 0.17, int n_samples = 800) const {
    EnsembleSpec s;
    s.temperature = temperature_mk * 1e-3;
    s.n_samples = n_samples;
    s.master_seed = 4242;
    return s;
  }

  PumpProtocol pump(double n_empty = 0.02) const {
    PumpProtocol p = make_pump_protocol(atom);
    p.n_empty = n_empty;
    p.n_trajectories = 300;
    return p;
  }
};

SweepProtocol quick_sweep(double from_um, double to_um, int n_atoms, double step_ms = 5.0) {
  SweepProtocol s;
  s.start_y = from_um * 1e-6;
  s.end_y = to_um * 1e-6;
  s.duration = 0.15;
  s.n_atoms = n_atoms;
  s.time_step = step_ms * 1e-3;
  return s;
}

}  // namespace

TEST_CASE("effective collective coupling") {
  CHECK(effective_g(1.0, 1) == doctest::Approx(1.0));
  CHECK(effective_g(2.0, 2) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(effective_g(3.0, 4) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_THROWS_AS(effective_g(1.0, 0), ValidationError);
}

TEST_CASE("sweep: negligible coupling at the edges, drop at the centre") {
  const World w;
  TransmissionTable table = w.table();
  const auto series =
      sweep_transmission(quick_sweep(-50, 50, 1), w.spec(), w.geom, w.atom, w.drive, table);
  REQUIRE(series.size() > 10);
  CHECK(series.front().t_rel > 0.99);
  CHECK(series.back().t_rel > 0.99);
  CHECK(series.front().y == doctest::Approx(-50e-6));
  CHECK(series.back().y == doctest::Approx(50e-6));

  double minimum = 1.0;
  for (const auto& p : series) minimum = std::min(minimum, p.t_rel);
  CHECK(minimum < 0.12);  // strongly coupled at the centre
}

TEST_CASE("forth and back transports are identical in the model") {
  const World w;
  TransmissionTable table = w.table();
  const auto forth =
      sweep_transmission(quick_sweep(-40, 40, 1, 10.0), w.spec(0.17, 400), w.geom, w.atom, w.drive, table);
  const auto back =
      sweep_transmission(quick_sweep(40, -40, 1, 10.0), w.spec(0.17, 400), w.geom, w.atom, w.drive, table);
  REQUIRE(forth.size() == back.size());
  for (std::size_t i = 0; i < forth.size(); ++i) {
    CHECK(forth[i].t_rel == back[back.size() - 1 - i].t_rel);  // same positions, same ensemble
  }
}

TEST_CASE("two atoms block the cavity pointwise at least as strongly and widen the dip") {
  const World w;
  TransmissionTable table = w.table();
  const auto one =
      sweep_transmission(quick_sweep(-50, 50, 1, 2.5), w.spec(0.17, 600), w.geom, w.atom, w.drive, table);
  const auto two =
      sweep_transmission(quick_sweep(-50, 50, 2, 2.5), w.spec(0.17, 600), w.geom, w.atom, w.drive, table);
  REQUIRE(one.size() == two.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    // table quantisation can reorder couplings by one bin where T is flat
    CHECK(two[i].t_rel <= one[i].t_rel + 1e-3);
  }
  CHECK(dip_width(two, 0.5) > dip_width(one, 0.5));
  // near the empty-cavity level the dip spans almost the whole transport
  CHECK(dip_width(one, 0.99) > 70e-6);
}

TEST_CASE("dip width: interpolation and error paths") {
  std::vector<SweepPoint> vee;
  for (int i = 0; i <= 40; ++i) {
    SweepPoint p;
    p.t = i;
    p.y = -20e-6 + i * 1e-6;
    p.t_rel = std::min(1.0, std::abs(p.y) / 15e-6);  // V shape touching 0 at the centre
    vee.push_back(p);
  }
  // crossings of level 0.5 sit at +-7.5 um
  CHECK(dip_width(vee, 0.5) == doctest::Approx(15e-6).epsilon(1e-9));
  CHECK_THROWS_AS(dip_width(vee, -0.1), NumericalError);
  std::vector<SweepPoint> two_points(vee.begin(), vee.begin() + 1);
  CHECK_THROWS_AS(dip_width(two_points, 0.5), NumericalError);
}

TEST_CASE("dispersive photon number: small pull, broadened intensity profile") {
  const World w;
  const PumpProtocol pump = w.pump();
  // far outside the mode the cavity is unaffected
  CHECK(dispersive_photon_number(w.geom, w.atom, {0, 50e-6, 0}, 1, pump, w.derived.kappa) ==
        doctest::Approx(pump.n_empty).epsilon(1e-3));
  // at the centre the atom pulls the photon number down, but keeps more
  // than half of it (dispersive regime)
  const double centre = dispersive_photon_number(w.geom, w.atom, {0, 0, 0}, 1, pump, w.derived.kappa);
  CHECK(centre < pump.n_empty);
  CHECK(centre / pump.n_empty > 0.5);

  // local intensity n(y) |psi(y)|^2 has a larger second moment than |psi|^2
  double m2_intensity = 0.0, norm_intensity = 0.0, m2_mode = 0.0, norm_mode = 0.0;
  for (int i = -60; i <= 60; ++i) {
    const double y = i * 1e-6;
    const double psi2 = std::exp(-2.0 * y * y / (w.derived.waist * w.derived.waist));
    const double n_local =
        dispersive_photon_number(w.geom, w.atom, {0, y, 0}, 1, pump, w.derived.kappa) * psi2;
    m2_intensity += y * y * n_local;
    norm_intensity += n_local;
    m2_mode += y * y * psi2;
    norm_mode += psi2;
  }
  CHECK(m2_intensity / norm_intensity > m2_mode / norm_mode);
}

TEST_CASE("pump trajectory: dark drive keeps F=4, infinite hold pumps to F=3") {
  const World w;
  PumpProtocol pump = w.pump(0.0);
  for (int k = 0; k < 50; ++k) {
    CHECK(pump_trajectory(w.geom, w.atom, {0, 0, 0}, 1, pump, w.derived.kappa, 100 + k) == 4);
  }

  pump = w.pump(0.02);
  pump.hold_time = 50e-3;  // 5000 steps, absorbing state takes over
  int transferred = 0;
  for (int k = 0; k < 200; ++k) {
    if (pump_trajectory(w.geom, w.atom, {0, 0, 0}, 1, pump, w.derived.kappa, 300 + k) == 3) {
      ++transferred;
    }
  }
  CHECK(transferred == 200);
}

TEST_CASE("forced branching (1, 0) transfers on the first scattering event") {
  const World w;
  AtomStructure forced = w.atom;
  for (auto& b : forced.branching) b = Branching{1.0, 0.0};
  PumpProtocol pump = w.pump(0.002);  // weak drive so P(no scattering) is moderate

  // survival of F=4 then equals the no-scattering probability (1 - p)^N
  int stayed = 0;
  const int n_traj = 4000;
  for (int k = 0; k < n_traj; ++k) {
    if (pump_trajectory(w.geom, forced, {0, 0, 0}, 1, pump, w.derived.kappa, 900 + k) == 4) ++stayed;
  }
  // per-step excitation probability at this point, from the closed forms
  std::vector<double> gs(3), ds(3);
  double rate = 0.0;
  for (int level = 0; level < 3; ++level) {
    const double strength = pi_line_strength(static_cast<ExcitedLevel>(level + 3), 1);
    gs[level] = std::sqrt(strength) * forced.g_max;
    ds[level] = forced.excited_detunings[level];
  }
  const double n_cav =
      pump.n_empty * weak_drive_transmission_multilevel(gs, ds, 0.0, w.derived.kappa, forced.gamma);
  for (int level = 0; level < 3; ++level) {
    rate += scattering_rate(gs[level], ds[level], n_cav, forced.gamma);
  }
  const double p_none = std::pow(1.0 - rate * pump.step, pump.hold_time / pump.step);
  CHECK(static_cast<double>(stayed) / n_traj == doctest::Approx(p_none).epsilon(0.15));
}

TEST_CASE("transfer map: peak at the centre, bounded by survival, monotone in drive") {
  const World w;
  const std::vector<double> positions{-50e-6, -10e-6, 0.0, 10e-6, 50e-6};
  PumpProtocol pump = w.pump(0.02);
  const TransferCurve curve =
      transfer_map(positions, pump, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa);

  REQUIRE(curve.positions.size() == positions.size());
  for (double p : curve.transfer_probability) {
    CHECK(p >= 0.0);
    CHECK(p <= pump.survival + 1e-12);
  }
  CHECK(curve.transfer_probability[0] < 0.02);  // 50 um off centre
  CHECK(curve.transfer_probability[4] < 0.02);
  CHECK(curve.transfer_probability[2] >= curve.transfer_probability[1] - 0.01);
  CHECK(curve.transfer_probability[2] > 0.5);

  // three-point ladder in n_empty
  double previous = -1.0;
  for (double n : {0.005, 0.02, 0.08}) {
    PumpProtocol trial = w.pump(n);
    const TransferCurve c =
        transfer_map(std::vector<double>{0.0}, trial, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa);
    CHECK(c.transfer_probability[0] >= previous);
    previous = c.transfer_probability[0];
  }
}

TEST_CASE("transfer map is seeded and worker-count independent") {
  const World w;
  const std::vector<double> positions{-5e-6, 0.0, 5e-6};
  const PumpProtocol pump = w.pump(0.02);
  const TransferCurve a =
      transfer_map(positions, pump, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa, 1);
  const TransferCurve b =
      transfer_map(positions, pump, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa, 4);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    CHECK(a.transfer_probability[i] == b.transfer_probability[i]);
  }
}

TEST_CASE("halving the pump step barely moves the transfer probabilities") {
  const World w;
  PumpProtocol coarse = w.pump(0.02);
  coarse.n_trajectories = 6000;
  PumpProtocol fine = coarse;
  fine.step = 5e-6;
  const std::vector<double> positions{0.0};
  const double a =
      transfer_map(positions, coarse, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa)
          .transfer_probability[0];
  const double b =
      transfer_map(positions, fine, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa)
          .transfer_probability[0];
  CHECK(std::abs(a - b) < 0.011);
}

TEST_CASE("master-equation rate path agrees with the closed form at weak drive") {
  const World w;
  PumpProtocol closed = w.pump(0.02);
  closed.n_trajectories = 400;
  PumpProtocol me = closed;
  me.use_master_equation = true;
  const std::vector<double> positions{0.0};
  const double a = transfer_map(positions, closed, w.spec(0.17, 1), w.geom, w.atom,
                                w.derived.kappa)
                       .transfer_probability[0];
  const double b = transfer_map(positions, me, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa)
                       .transfer_probability[0];
  CHECK(std::abs(a - b) < 0.05);
}

TEST_CASE("photon-number fit: round trip and failure modes") {
  const World w;
  PumpProtocol pump = w.pump(0.02);
  pump.n_trajectories = 250;
  std::vector<double> positions;
  for (int i = -4; i <= 4; ++i) positions.push_back(i * 5e-6);

  const TransferCurve synthetic =
      transfer_map(positions, pump, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa);
  const double fitted = fit_photon_number(synthetic, pump, w.spec(0.17, 1), w.geom, w.atom,
                                          w.derived.kappa, 0.001, 0.2);
  CHECK(std::abs(fitted - 0.02) / 0.02 < 0.15);

  // probabilities pushed beyond the survival cap cannot be matched: the fit
  // runs into the upper bound
  TransferCurve impossible = synthetic;
  for (double& p : impossible.transfer_probability) p *= 2.0;
  CHECK_THROWS_AS(fit_photon_number(impossible, pump, w.spec(0.17, 1), w.geom, w.atom,
                                    w.derived.kappa, 0.001, 0.2),
                  NonIdentifiableError);

  TransferCurve empty;
  CHECK_THROWS_AS(fit_photon_number(empty, pump, w.spec(0.17, 1), w.geom, w.atom, w.derived.kappa),
                  ValidationError);
}

TEST_CASE("protocol validation") {
  SweepProtocol sweep;
  sweep.n_atoms = 3;
  CHECK_THROWS_AS(validate(sweep), ValidationError);
  PumpProtocol pump;
  pump.step = 3e-6;  // 1 ms / 3 us is not an integer
  CHECK_THROWS_AS(validate(pump), ValidationError);
  pump = PumpProtocol{};
  pump.survival = 0.0;
  CHECK_THROWS_AS(validate(pump), ValidationError);
}

TEST_SUITE_END();
