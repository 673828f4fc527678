#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "tripod/kernels.hpp"

namespace tripod {

using cplx = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

struct Triplet {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Square complex sparse matrix in compressed-row form. Duplicate (row, col)
/// entries are summed at assembly and explicit zeros are pruned.
class SparseOperator {
 public:
  using Storage = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim);
  explicit SparseOperator(Storage m);

  static SparseOperator from_triplets(std::size_t dim, std::span<const Triplet> entries);
  static SparseOperator identity(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t nnz() const { return static_cast<std::size_t>(m_.nonZeros()); }

  cplx coeff(std::size_t row, std::size_t col) const;
  std::vector<Triplet> triplets() const;

  SparseOperator adjoint() const;
  Eigen::MatrixXcd to_dense() const;

  /// Max |entry| of (*this - other); both must have the same dimension.
  double max_abs_diff(const SparseOperator& other) const;
  double max_abs() const;
  bool is_hermitian(double tol) const;

  StateVector apply(const StateVector& x) const;
  /// y += alpha * (*this) x on raw buffers of length dim().
  void apply_acc(cplx alpha, std::span<const cplx> x, std::span<cplx> y) const;

  kernels::CsrView csr() const;
  const Storage& storage() const { return m_; }

  SparseOperator operator+(const SparseOperator& rhs) const;
  SparseOperator operator-(const SparseOperator& rhs) const;
  SparseOperator operator*(const SparseOperator& rhs) const;
  SparseOperator& operator+=(const SparseOperator& rhs);
  friend SparseOperator operator*(cplx s, const SparseOperator& op);

 private:
  Storage m_;
};

/// Induced infinity norm (largest absolute row sum).
double inf_norm(const SparseOperator& op);

}  // namespace tripod
