#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tripod/sparse_operator.hpp"

namespace tripod {

/// An ordered subset of basis indices of a larger space. Used to run the
/// propagators on the block that is actually reachable from the initial
/// state: amplitudes outside an operator-invariant subspace stay exactly zero,
/// so restricting to it changes nothing but the cost.
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t full_dim, std::vector<std::size_t> indices);

  static Subspace full(std::size_t dim);

  /// Smallest set containing `seeds` that is closed under the sparsity
  /// pattern of every operator in `generators` (row reachable from column).
  static Subspace closure(std::size_t full_dim, std::span<const std::size_t> seeds,
                          std::span<const SparseOperator* const> generators);

  std::size_t full_dim() const { return full_dim_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<std::size_t>& indices() const { return indices_; }
  /// Local position of a full index, or -1.
  long local_of(std::size_t full_index) const { return local_[full_index]; }

  SparseOperator restrict_operator(const SparseOperator& op) const;
  StateVector restrict_vector(const StateVector& full) const;
  StateVector embed_vector(std::span<const cplx> local) const;
  DensityMatrix restrict_matrix(const DensityMatrix& full) const;
  DensityMatrix embed_matrix(const DensityMatrix& local) const;

  /// Support of `v` (indices with nonzero amplitude).
  static std::vector<std::size_t> support(const StateVector& v);
  static std::vector<std::size_t> support(const DensityMatrix& rho);

 private:
  std::size_t full_dim_ = 0;
  std::vector<std::size_t> indices_;
  std::vector<long> local_;
};

}  // namespace tripod
