#include "tripod/subspace.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "tripod/errors.hpp"

namespace tripod {

Subspace::Subspace(std::size_t full_dim, std::vector<std::size_t> indices)
    : full_dim_(full_dim), indices_(std::move(indices)), local_(full_dim, -1) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] >= full_dim) throw ValidationError("subspace index outside space");
    local_[indices_[k]] = static_cast<long>(k);
  }
}

Subspace Subspace::full(std::size_t dim) {
  std::vector<std::size_t> all(dim);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return Subspace(dim, std::move(all));
}

Subspace Subspace::closure(std::size_t full_dim, std::span<const std::size_t> seeds,
                           std::span<const SparseOperator* const> generators) {
  // Column-oriented adjacency: col -> rows it feeds.
  std::vector<std::vector<std::size_t>> feeds(full_dim);
  for (const SparseOperator* op : generators) {
    if (op->dim() != full_dim) throw ValidationError("generator dimension mismatch");
    for (const Triplet& t : op->triplets()) feeds[t.col].push_back(t.row);
  }
  std::vector<char> seen(full_dim, 0);
  std::deque<std::size_t> queue;
  for (std::size_t s : seeds) {
    if (s >= full_dim) throw ValidationError("seed index outside space");
    if (!seen[s]) {
      seen[s] = 1;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::size_t c = queue.front();
    queue.pop_front();
    for (std::size_t r : feeds[c]) {
      if (!seen[r]) {
        seen[r] = 1;
        queue.push_back(r);
      }
    }
  }
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < full_dim; ++i) {
    if (seen[i]) members.push_back(i);
  }
  return Subspace(full_dim, std::move(members));
}

SparseOperator Subspace::restrict_operator(const SparseOperator& op) const {
  if (op.dim() != full_dim_) throw ValidationError("operator dimension mismatch");
  std::vector<Triplet> entries;
  for (const Triplet& t : op.triplets()) {
    const long r = local_[t.row];
    const long c = local_[t.col];
    if (r >= 0 && c >= 0) {
      entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), t.value});
    }
  }
  return SparseOperator::from_triplets(size(), entries);
}

StateVector Subspace::restrict_vector(const StateVector& full) const {
  StateVector out(static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) out[static_cast<Eigen::Index>(k)] = full[static_cast<Eigen::Index>(indices_[k])];
  return out;
}

StateVector Subspace::embed_vector(std::span<const cplx> local) const {
  StateVector out = StateVector::Zero(static_cast<Eigen::Index>(full_dim_));
  for (std::size_t k = 0; k < size(); ++k) out[static_cast<Eigen::Index>(indices_[k])] = local[k];
  return out;
}

DensityMatrix Subspace::restrict_matrix(const DensityMatrix& full) const {
  const auto m = static_cast<Eigen::Index>(size());
  DensityMatrix out(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      out(i, j) = full(static_cast<Eigen::Index>(indices_[i]), static_cast<Eigen::Index>(indices_[j]));
    }
  }
  return out;
}

DensityMatrix Subspace::embed_matrix(const DensityMatrix& local) const {
  const auto m = static_cast<Eigen::Index>(size());
  const auto n = static_cast<Eigen::Index>(full_dim_);
  DensityMatrix out = DensityMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      out(static_cast<Eigen::Index>(indices_[i]), static_cast<Eigen::Index>(indices_[j])) = local(i, j);
    }
  }
  return out;
}

std::vector<std::size_t> Subspace::support(const StateVector& v) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != cplx{0.0, 0.0}) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

std::vector<std::size_t> Subspace::support(const DensityMatrix& rho) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    bool nonzero = false;
    for (Eigen::Index j = 0; j < rho.cols() && !nonzero; ++j) nonzero = rho(i, j) != cplx{0.0, 0.0};
    if (nonzero) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace tripod
