#include "tripod/sparse_operator.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

SparseOperator::Storage pruned(SparseOperator::Storage m) {
  m.prune(cplx{0.0, 0.0}, 0.0);
  m.makeCompressed();
  return m;
}

void require_same_dim(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim()) throw ValidationError("operator dimension mismatch");
}

}  // namespace

SparseOperator::SparseOperator(std::size_t dim)
    : m_(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) {
  m_.makeCompressed();
}

SparseOperator::SparseOperator(Storage m) : m_(pruned(std::move(m))) {}

SparseOperator SparseOperator::from_triplets(std::size_t dim, std::span<const Triplet> entries) {
  std::vector<Eigen::Triplet<cplx, int>> eig;
  eig.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (t.row >= dim || t.col >= dim) throw ValidationError("triplet index outside operator dimension");
    eig.emplace_back(static_cast<int>(t.row), static_cast<int>(t.col), t.value);
  }
  Storage m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(eig.begin(), eig.end());
  return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  Storage m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setIdentity();
  return SparseOperator(std::move(m));
}

cplx SparseOperator::coeff(std::size_t row, std::size_t col) const {
  return m_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

std::vector<Triplet> SparseOperator::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
    for (Storage::InnerIterator it(m_, r); it; ++it) {
      out.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), it.value()});
    }
  }
  return out;
}

SparseOperator SparseOperator::adjoint() const { return SparseOperator(Storage(m_.adjoint())); }

Eigen::MatrixXcd SparseOperator::to_dense() const { return Eigen::MatrixXcd(m_); }

double SparseOperator::max_abs_diff(const SparseOperator& other) const {
  require_same_dim(*this, other);
  return (*this - other).max_abs();
}

double SparseOperator::max_abs() const {
  double best = 0.0;
  for (Eigen::Index k = 0; k < m_.nonZeros(); ++k) best = std::max(best, std::abs(m_.valuePtr()[k]));
  return best;
}

bool SparseOperator::is_hermitian(double tol) const { return max_abs_diff(adjoint()) <= tol; }

StateVector SparseOperator::apply(const StateVector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim()) throw ValidationError("state dimension mismatch");
  StateVector y = StateVector::Zero(x.size());
  apply_acc(cplx{1.0, 0.0}, std::span<const cplx>(x.data(), x.size()), std::span<cplx>(y.data(), y.size()));
  return y;
}

void SparseOperator::apply_acc(cplx alpha, std::span<const cplx> x, std::span<cplx> y) const {
  kernels::active().csr_matvec_acc(csr(), alpha, x.data(), y.data());
}

kernels::CsrView SparseOperator::csr() const {
  return {static_cast<std::size_t>(m_.rows()), m_.outerIndexPtr(), m_.innerIndexPtr(), m_.valuePtr()};
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
  require_same_dim(*this, rhs);
  return SparseOperator(Storage(m_ + rhs.m_));
}

SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
  require_same_dim(*this, rhs);
  return SparseOperator(Storage(m_ - rhs.m_));
}

SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
  require_same_dim(*this, rhs);
  return SparseOperator(Storage(m_ * rhs.m_));
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& rhs) {
  *this = *this + rhs;
  return *this;
}

SparseOperator operator*(cplx s, const SparseOperator& op) {
  return SparseOperator(SparseOperator::Storage(s * op.m_));
}

double inf_norm(const SparseOperator& op) {
  const auto& m = op.storage();
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    double row = 0.0;
    for (SparseOperator::Storage::InnerIterator it(m, r); it; ++it) row += std::abs(it.value());
    best = std::max(best, row);
  }
  return best;
}

}  // namespace tripod
