#include "cqed/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/parallel.hpp"

namespace cqed {

namespace {

constexpr Complex kI{0.0, 1.0};

// annihilation operator on the (n_max+1)-dimensional field space
Matrix field_annihilation(int n_max) {
  const int dim = n_max + 1;
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

struct Operators {
  Matrix a;       // atom (x) field annihilation
  Matrix sigma;   // lowering operator
  int dim;
};

Operators make_operators(int n_max) {
  const int nf = n_max + 1;
  const Matrix af = field_annihilation(n_max);
  const Matrix idf = Matrix::Identity(nf, nf);
  Matrix sg = Matrix::Zero(2, 2);
  sg(0, 1) = 1.0;  // |g><e|
  const Matrix ida = Matrix::Identity(2, 2);
  Operators ops;
  ops.a = kron(ida, af);
  ops.sigma = kron(sg, idf);
  ops.dim = 2 * nf;
  return ops;
}

// vectorised dissipator for jump operator c: c (x) c* - (1/2)(I (x) c†c + (c†c)ᵀ (x) I)
Matrix dissipator(const Matrix& c) {
  const long dim = c.rows();
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix cdc = c.adjoint() * c;
  return kron(c.conjugate(), c) - 0.5 * (kron(id, cdc) + kron(cdc.transpose(), id));
}

SteadyStateResult solve_once(double g, const DriveParams& drive, double kappa, double gamma, int n_max) {
  DriveParams d = drive;
  d.n_max = n_max;
  const Matrix rho = steady_state(build_liouvillian(g, d, kappa, gamma));
  SteadyStateResult result;
  result.photon_number = photon_number(rho, n_max);
  result.transmission_rel = result.photon_number / drive.n_empty;
  result.atomic_excitation = atomic_excitation(rho, n_max);
  result.truncation_warning = drive.n_empty > 0.5 * n_max;
  return result;
}

}  // namespace

void validate(const DriveParams& d) {
  if (!(d.n_empty > 0.0)) throw ValidationError("n_empty must be positive");
  if (d.n_max < 1) throw ValidationError("photon-basis truncation n_max must be at least 1");
  if (!std::isfinite(d.delta_pa) || !std::isfinite(d.delta_pc)) {
    throw ValidationError("drive detunings must be finite");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix build_liouvillian(double g, const DriveParams& drive, double kappa, double gamma) {
  validate(drive);
  const Operators ops = make_operators(drive.n_max);
  const double eta = kappa * std::sqrt(drive.n_empty);

  const Matrix n_op = ops.a.adjoint() * ops.a;
  const Matrix sz_exc = ops.sigma.adjoint() * ops.sigma;
  Matrix h = -drive.delta_pc * n_op - drive.delta_pa * sz_exc +
             g * (ops.a.adjoint() * ops.sigma + ops.sigma.adjoint() * ops.a) +
             eta * (ops.a + ops.a.adjoint());

  const Matrix id = Matrix::Identity(ops.dim, ops.dim);
  Matrix liouvillian = -kI * (kron(id, h) - kron(h.transpose(), id));
  liouvillian += dissipator(std::sqrt(2.0 * kappa) * ops.a);
  liouvillian += dissipator(std::sqrt(2.0 * gamma) * ops.sigma);
  return liouvillian;
}

Matrix steady_state(const Matrix& liouvillian) {
  const long dim2 = liouvillian.rows();
  const long dim = static_cast<long>(std::lround(std::sqrt(static_cast<double>(dim2))));
  if (dim * dim != dim2) throw NumericalError("Liouvillian dimension is not a perfect square");

  // normalise rate units away so the trace row below has comparable scale
  const double scale = liouvillian.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw NumericalError("Liouvillian is identically zero");
  Matrix system = liouvillian / scale;

  // replace the rho_00 equation (redundant under trace preservation) with tr(rho) = 1
  Vector rhs = Vector::Zero(dim2);
  system.row(0).setZero();
  for (long i = 0; i < dim; ++i) system(0, i * dim + i) = 1.0;
  rhs(0) = 1.0;

  const Eigen::ColPivHouseholderQR<Matrix> qr(system);
  if (qr.rank() < dim2) {
    throw NumericalError("steady-state system singular beyond the trace degeneracy");
  }
  const Vector v = qr.solve(rhs);

  Matrix rho = Eigen::Map<const Matrix>(v.data(), dim, dim);

  const double trace_err = std::abs(rho.trace() - 1.0);
  if (trace_err > 1e-10) throw NumericalError("steady-state trace deviates by " + std::to_string(trace_err));
  const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > 1e-10) throw NumericalError("steady state not Hermitian within 1e-10");
  const double residual = ((liouvillian / scale) * v).cwiseAbs().maxCoeff();
  if (residual > 1e-8) throw NumericalError("steady-state residual " + std::to_string(residual));

  rho = 0.5 * (rho + rho.adjoint().eval());
  const Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw NumericalError("steady state has negative population beyond tolerance");
  }
  return rho;
}

double photon_number(const Matrix& rho, int n_max) {
  const int nf = n_max + 1;
  double total = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int n = 0; n < nf; ++n) total += n * rho(s * nf + n, s * nf + n).real();
  }
  return total;
}

double atomic_excitation(const Matrix& rho, int n_max) {
  const int nf = n_max + 1;
  double total = 0.0;
  for (int n = 0; n < nf; ++n) total += rho(nf + n, nf + n).real();
  return total;
}

double weak_drive_transmission(double g, double delta_pa, double delta_pc, double kappa, double gamma) {
  if (kappa <= 0.0 || gamma <= 0.0) throw ValidationError("kappa and gamma must be positive");
  const Complex atom{gamma, -delta_pa};
  const Complex cavity{kappa, -delta_pc};
  const double num = std::norm(kappa * atom);
  const double den = std::norm(cavity * atom + g * g);
  return num / den;
}

double weak_drive_transmission_multilevel(const std::vector<double>& g_levels,
                                          const std::vector<double>& deltas, double delta_pc,
                                          double kappa, double gamma) {
  if (g_levels.size() != deltas.size()) throw ValidationError("one coupling per excited level required");
  Complex response{kappa, -delta_pc};
  for (std::size_t i = 0; i < g_levels.size(); ++i) {
    response += g_levels[i] * g_levels[i] / Complex{gamma, -deltas[i]};
  }
  return kappa * kappa / std::norm(response);
}

SteadyStateResult transmission(double g, const DriveParams& drive, double kappa, double gamma) {
  SteadyStateResult result = solve_once(g, drive, kappa, gamma, drive.n_max);
  const SteadyStateResult refined = solve_once(g, drive, kappa, gamma, drive.n_max + 2);
  const double scale = std::max(std::abs(refined.transmission_rel), 1e-300);
  result.converged = std::abs(result.transmission_rel - refined.transmission_rel) / scale < 1e-4;
  return result;
}

double scattering_rate(double g, double delta_pa, double n_local, double gamma) {
  return 2.0 * gamma * g * g * n_local / (delta_pa * delta_pa + gamma * gamma);
}

double scattering_rate_me(double g, const DriveParams& drive, double kappa, double gamma) {
  const Matrix rho = steady_state(build_liouvillian(g, drive, kappa, gamma));
  return 2.0 * gamma * atomic_excitation(rho, drive.n_max);
}

TransmissionTable::TransmissionTable(DriveParams drive, double kappa, double gamma, double g_bin,
                                     double delta_bin)
    : drive_(drive), kappa_(kappa), gamma_(gamma), g_bin_(g_bin), delta_bin_(delta_bin) {
  validate(drive_);
  if (g_bin_ <= 0.0 || delta_bin_ <= 0.0) throw ValidationError("table bin widths must be positive");
}

TransmissionTable::Key TransmissionTable::quantise(double g, double delta) const {
  return {static_cast<std::int64_t>(std::llround(g / g_bin_)),
          static_cast<std::int64_t>(std::llround(delta / delta_bin_))};
}

double TransmissionTable::solve_bin(const Key& key) {
  DriveParams d = drive_;
  d.delta_pa = static_cast<double>(key.second) * delta_bin_;
  const double g = static_cast<double>(key.first) * g_bin_;
  const SteadyStateResult r = transmission(g, d, kappa_, gamma_);
  if (!r.converged) all_converged_ = false;
  return r.transmission_rel;
}

double TransmissionTable::lookup(double g, double delta_pa) {
  const Key key = quantise(g, delta_pa);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  const double value = solve_bin(key);
  std::lock_guard<std::mutex> lock(mutex_);
  return table_.emplace(key, value).first->second;
}

void TransmissionTable::prefill(const std::vector<std::pair<double, double>>& points, int workers) {
  std::vector<Key> missing;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [g, delta] : points) {
      const Key key = quantise(g, delta);
      if (table_.find(key) == table_.end()) missing.push_back(key);
    }
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<double> values(missing.size());
  parallel_for(missing.size(), workers, [&](std::size_t i) { values[i] = solve_bin(missing[i]); });
  std::lock_guard<std::mutex> lock(mutex_);
  for (std::size_t i = 0; i < missing.size(); ++i) table_.emplace(missing[i], values[i]);
}

std::size_t TransmissionTable::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return table_.size();
}

}  // namespace cqed
