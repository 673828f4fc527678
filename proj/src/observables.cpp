#include "tripod/observables.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

void require_dim(Eigen::Index n, std::size_t expected) {
  if (static_cast<std::size_t>(n) != expected) throw ValidationError("state dimension does not match the basis");
}

// Clamp roundoff outside [0, 1].
double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

bool at_cutoff(const BasisConfiguration& c, int n_max) {
  return std::any_of(c.occupation.begin(), c.occupation.end(), [&](int n) { return n == n_max; });
}

int q_value(const BasisConfiguration& c) {
  int q = 0;
  for (int n : c.occupation) q += n;
  if (c.atom == Level::a || c.atom == Level::b) q -= 1;
  return q;
}

template <class Pred>
double diagonal_weight(const DensityMatrix& rho, const HilbertSpace& space, Pred pred) {
  double w = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    if (pred(space.state_of(i))) w += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return w;
}

template <class Pred>
double vector_weight(const StateVector& psi, const HilbertSpace& space, Pred pred) {
  double w = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    if (pred(space.state_of(i))) w += std::norm(psi[static_cast<Eigen::Index>(i)]);
  }
  return w;
}

// <v|rho|v> using only v's support.
double sandwich(const DensityMatrix& rho, const StateVector& v, const std::vector<std::size_t>& support) {
  cplx s{0.0, 0.0};
  for (std::size_t i : support) {
    for (std::size_t j : support) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      s += std::conj(v[ii]) * rho(ii, jj) * v[jj];
    }
  }
  return s.real();
}

}  // namespace

NamedPopulations populations_named(const StateVector& psi, const NamedManifoldBasis& basis) {
  require_dim(psi.size(), basis.dim());
  NamedPopulations out{};
  for (std::size_t k = 0; k < kNamedCount; ++k) {
    cplx amp{0.0, 0.0};
    for (std::size_t i : basis.support(static_cast<Named>(k))) {
      const auto ii = static_cast<Eigen::Index>(i);
      amp += std::conj(basis.at(k)[ii]) * psi[ii];
    }
    out[k] = std::norm(amp);
  }
  return out;
}

NamedPopulations populations_named(const DensityMatrix& rho, const NamedManifoldBasis& basis) {
  require_dim(rho.rows(), basis.dim());
  require_dim(rho.cols(), basis.dim());
  NamedPopulations out{};
  for (std::size_t k = 0; k < kNamedCount; ++k) {
    out[k] = sandwich(rho, basis.at(k), basis.support(static_cast<Named>(k)));
  }
  return out;
}

double success_probability(const DensityMatrix& rho, const NamedManifoldBasis& basis) {
  return populations_named(rho, basis)[static_cast<std::size_t>(Named::E)];
}

std::string_view to_string(FidelityMode mode) {
  return mode == FidelityMode::conditional ? "conditional" : "unconditional";
}

bool in_success_sector(const BasisConfiguration& c) {
  return c.atom == Level::g && c.occupation[0] + c.occupation[1] == 1 && c.occupation[2] + c.occupation[3] == 1;
}

FidelityResult fidelity_epr(const DensityMatrix& rho, const HilbertSpace& space, const NamedManifoldBasis& basis,
                            FidelityMode mode) {
  require_dim(rho.rows(), space.dim());
  const double p_e = std::max(success_probability(rho, basis), 0.0);
  if (mode == FidelityMode::unconditional) return {clamp01(std::sqrt(p_e)), 1.0};
  const double weight = diagonal_weight(rho, space, in_success_sector);
  if (!(weight >= 1e-12)) {
    throw UndefinedFidelityError("conditional fidelity undefined: success-sector weight " + std::to_string(weight) +
                                 " < 1e-12");
  }
  return {clamp01(std::sqrt(p_e / weight)), weight};
}

double truncation_leakage(const StateVector& psi, const HilbertSpace& space) {
  require_dim(psi.size(), space.dim());
  return vector_weight(psi, space, [&](const BasisConfiguration& c) { return at_cutoff(c, space.n_max()); });
}

double truncation_leakage(const DensityMatrix& rho, const HilbertSpace& space) {
  require_dim(rho.rows(), space.dim());
  return diagonal_weight(rho, space, [&](const BasisConfiguration& c) { return at_cutoff(c, space.n_max()); });
}

double dark_state_overlap(const StateVector& psi, const StateVector& dark) {
  if (psi.size() != dark.size()) throw ValidationError("dimension mismatch in dark-state overlap");
  return std::norm(dark.dot(psi));
}

double dark_state_overlap(const DensityMatrix& rho, const StateVector& dark) {
  if (rho.rows() != dark.size()) throw ValidationError("dimension mismatch in dark-state overlap");
  std::vector<std::size_t> support;
  for (Eigen::Index i = 0; i < dark.size(); ++i) {
    if (dark[i] != cplx{0.0, 0.0}) support.push_back(static_cast<std::size_t>(i));
  }
  return sandwich(rho, dark, support);
}

double expectation_q(const StateVector& psi, const HilbertSpace& space) {
  require_dim(psi.size(), space.dim());
  double q = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    q += q_value(space.state_of(i)) * std::norm(psi[static_cast<Eigen::Index>(i)]);
  }
  return q;
}

double expectation_q(const DensityMatrix& rho, const HilbertSpace& space) {
  require_dim(rho.rows(), space.dim());
  double q = 0.0;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    q += q_value(space.state_of(i)) * rho(ii, ii).real();
  }
  return q;
}

Metrics compute_metrics(const DensityMatrix& rho, const HilbertSpace& space, const NamedManifoldBasis& basis) {
  Metrics m;
  m.success_probability = clamp01(success_probability(rho, basis));
  m.fidelity_unconditional = fidelity_epr(rho, space, basis, FidelityMode::unconditional).fidelity;
  m.sector_weight = diagonal_weight(rho, space, in_success_sector);
  try {
    m.fidelity_conditional = fidelity_epr(rho, space, basis, FidelityMode::conditional).fidelity;
  } catch (const UndefinedFidelityError&) {
    m.fidelity_conditional.reset();
  }
  m.leakage = truncation_leakage(rho, space);
  m.q_expectation = expectation_q(rho, space);
  return m;
}

Metrics compute_metrics(const StateVector& psi, const HilbertSpace& space, const NamedManifoldBasis& basis) {
  return compute_metrics(DensityMatrix(psi * psi.adjoint()), space, basis);
}

}  // namespace tripod
