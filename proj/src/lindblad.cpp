#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "tripod/dynamics.hpp"
#include "tripod/errors.hpp"

namespace tripod {

namespace {

std::span<cplx> col(DensityMatrix& m, Eigen::Index j) {
  return {m.data() + j * m.rows(), static_cast<std::size_t>(m.rows())};
}

double min_eigenvalue(const DensityMatrix& rho) {
  if (rho.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// Dense right-hand side on a column-major m x m block:
//   M = H_eff rho,  drho = -i M + i M^dag + 2 kappa sum_m a (a rho)^dag
// which equals -i[H, rho] + the cavity dissipators for Hermitian rho.
class LindbladRhs {
 public:
  explicit LindbladRhs(const ReducedSystem& reduced)
      : reduced_(reduced),
        m_(static_cast<Eigen::Index>(reduced.size())),
        product_(m_, m_),
        lowered_(m_, m_),
        lowered_adj_(m_, m_) {}

  void operator()(double t, std::span<const cplx> y, std::span<cplx> dy) {
    const Eigen::Map<const DensityMatrix> rho(y.data(), m_, m_);
    Eigen::Map<DensityMatrix> out(dy.data(), m_, m_);
    const Couplings c = reduced_.couplings(t);

    product_.setZero();
    for (Eigen::Index j = 0; j < m_; ++j) {
      reduced_.apply_hamiltonian(c, cplx{1.0, 0.0}, {y.data() + j * m_, static_cast<std::size_t>(m_)},
                                 col(product_, j), /*with_loss=*/true);
    }
    const cplx minus_i{0.0, -1.0};
    out = minus_i * product_ - minus_i * product_.adjoint();

    const double kappa = reduced_.kappa();
    if (kappa == 0.0) return;
    for (std::size_t mode = 0; mode < kModeCount; ++mode) {
      const SparseOperator& a = reduced_.lowering(mode);
      if (a.nnz() == 0) continue;
      lowered_.setZero();
      for (Eigen::Index j = 0; j < m_; ++j) {
        a.apply_acc(cplx{1.0, 0.0}, {rho.data() + j * m_, static_cast<std::size_t>(m_)}, col(lowered_, j));
      }
      lowered_adj_ = lowered_.adjoint();
      for (Eigen::Index j = 0; j < m_; ++j) {
        a.apply_acc(cplx{2.0 * kappa, 0.0}, col(lowered_adj_, j), {dy.data() + j * m_, static_cast<std::size_t>(m_)});
      }
    }
  }

 private:
  const ReducedSystem& reduced_;
  Eigen::Index m_;
  DensityMatrix product_;
  DensityMatrix lowered_;
  DensityMatrix lowered_adj_;
};

}  // namespace

void validate_density(const DensityMatrix& rho) {
  if (rho.rows() != rho.cols()) throw ValidationError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ValidationError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-10) throw ValidationError("density matrix trace is not 1");
  const std::vector<std::size_t> support = Subspace::support(rho);
  const Subspace sub(static_cast<std::size_t>(rho.rows()), support);
  if (min_eigenvalue(sub.restrict_matrix(rho)) < -1e-8) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
}

LindbladResult evolve_lindblad(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                               const DensityMatrix& initial, const DensityObserver& observer) {
  grid.validate();
  config.validate();
  if (static_cast<std::size_t>(initial.rows()) != system.space().dim()) {
    throw ValidationError("initial density matrix dimension mismatch");
  }
  validate_density(initial);

  const std::vector<std::size_t> seeds = Subspace::support(initial);
  const ReducedSystem reduced(system, seeds, /*include_jumps=*/true);
  const Subspace& sub = reduced.subspace();

  DensityMatrix rho = sub.restrict_matrix(initial);
  std::span<cplx> y(rho.data(), static_cast<std::size_t>(rho.size()));
  LindbladRhs rhs(reduced);
  Propagator prop(
      y.size(), [&rhs](double t, std::span<const cplx> x, std::span<cplx> dx) { rhs(t, x, dx); }, config,
      grid.step());

  LindbladResult result;
  LindbladDiagnostics& diag = result.diagnostics;
  diag.subspace_dim = sub.size();
  diag.min_eigenvalue = min_eigenvalue(rho);

  auto emit = [&](double t) {
    result.times.push_back(t);
    const double lam = min_eigenvalue(rho);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, lam);
    if (lam < -1e-6) {
      std::ostringstream w;
      w << "negative eigenvalue " << lam << " at t=" << t;
      diag.warnings.push_back(w.str());
    }
    if (observer) observer(t, sub.embed_matrix(rho));
  };

  emit(grid.time_at(0));
  for (int k = 0; k < grid.n_steps; ++k) {
    prop.advance(grid.time_at(k), grid.time_at(k + 1), y);
    rho = (0.5 * (rho + rho.adjoint())).eval();
    const double drift = std::abs(rho.trace() - cplx{1.0, 0.0});
    if (!(drift < 1.0) || !std::isfinite(rho.cwiseAbs().maxCoeff())) {
      throw IntegrationError("density matrix diverged; reduce the step size", grid.time_at(k + 1));
    }
    diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
    if (grid.is_output(k + 1)) emit(grid.time_at(k + 1));
  }
  result.final_state = sub.embed_matrix(rho);
  return result;
}

}  // namespace tripod
