#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <complex>
#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Probe drive in the frame rotating at the probe frequency. n_empty is the
// empty-cavity on-resonance photon number and fixes the drive amplitude
// eta = kappa sqrt(n_empty).
struct DriveParams {
  double delta_pa = 0.0;  // omega_p - omega_a, rad/s
  double delta_pc = 0.0;  // omega_p - omega_c, rad/s
  double n_empty = 0.1;
  int n_max = 3;          // photon-basis truncation
};

void validate(const DriveParams& drive);

struct SteadyStateResult {
  double photon_number = 0.0;      // <a† a>
  double transmission_rel = 0.0;   // photon_number / n_empty
  double atomic_excitation = 0.0;  // <sigma† sigma>
  bool converged = true;           // n_max vs n_max+2 agree to 1e-4 relative
  bool truncation_warning = false; // drive too strong for the basis
};

// Kronecker product of dense complex matrices
Matrix kron(const Matrix& a, const Matrix& b);

// Liouvillian of H/hbar = -dpc a†a - dpa sigma†sigma + g(a†sigma + sigma†a)
// + eta(a + a†) with field dissipator at rate 2*kappa and atomic dissipator
// at 2*gamma, column-stacked over the 2(n_max+1)-dimensional atom (x) field
// space. Matrix dimension is the square of that.
Matrix build_liouvillian(double g, const DriveParams& drive, double kappa, double gamma);

// Unique steady state of the Liouvillian: solves L rho = 0 with the trace
// condition replacing one redundant row. Checks trace, Hermiticity and
// positivity; throws NumericalError when the solve is singular beyond the
// trace degeneracy or the checks fail.
Matrix steady_state(const Matrix& liouvillian);

// expectation helpers on the atom (x) field ordering used above
double photon_number(const Matrix& rho, int n_max);
double atomic_excitation(const Matrix& rho, int n_max);

// Closed-form weak-excitation transmission used as the independent oracle:
// |kappa (gamma - i dpa)|^2 / |(kappa - i dpc)(gamma - i dpa) + g^2|^2
double weak_drive_transmission(double g, double delta_pa, double delta_pc, double kappa, double gamma);

// multi-level generalisation with one coupling per excited level:
// |kappa|^2 / |(kappa - i dpc) + sum_i g_i^2/(gamma - i d_i)|^2
double weak_drive_transmission_multilevel(const std::vector<double>& g_levels,
                                          const std::vector<double>& deltas, double delta_pc,
                                          double kappa, double gamma);

// full master-equation transmission with truncation-convergence check
SteadyStateResult transmission(double g, const DriveParams& drive, double kappa, double gamma);

// photon scattering rate 2 gamma <sigma†sigma>; low-saturation closed form
// 2 gamma g^2 n_local / (delta_pa^2 + gamma^2), in 1/s
double scattering_rate(double g, double delta_pa, double n_local, double gamma);

// same quantity from the master-equation steady state (verification path)
double scattering_rate_me(double g, const DriveParams& drive, double kappa, double gamma);

// Memoized (g, delta_pa) -> T_rel lookup with bin quantisation. Values are
// deterministic functions of the bin, so concurrent fills are idempotent
// and results never depend on scheduling.
class TransmissionTable {
 public:
  TransmissionTable(DriveParams drive, double kappa, double gamma, double g_bin, double delta_bin);

  // quantised lookup; solves the master equation on a miss
  double lookup(double g, double delta_pa);

  // solve all bins for the given (g, delta) pairs up front; deterministic
  // order, parallel over bins
  void prefill(const std::vector<std::pair<double, double>>& points, int workers);

  std::size_t size() const;
  bool all_converged() const { return all_converged_; }

 private:
  using Key = std::pair<std::int64_t, std::int64_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<std::int64_t>()(k.first * 0x9E3779B97F4A7C15LL) ^ std::hash<std::int64_t>()(k.second);
    }
  };

  Key quantise(double g, double delta) const;
  double solve_bin(const Key& key);

  DriveParams drive_;
  double kappa_;
  double gamma_;
  double g_bin_;
  double delta_bin_;
  std::atomic<bool> all_converged_ = true;
  std::unordered_map<Key, double, KeyHash> table_;
  mutable std::mutex mutex_;
};

}  // namespace cqed
