#include "tripod/hilbert.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tripod/errors.hpp"

namespace tripod {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::g: return "g";
    case Level::a: return "a";
    case Level::b: return "b";
    case Level::e: return "e";
  }
  return "?";
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::cav1_plus: return "1+";
    case Mode::cav1_minus: return "1-";
    case Mode::cav2_plus: return "2+";
    case Mode::cav2_minus: return "2-";
  }
  return "?";
}

Level parse_level(std::string_view label) {
  for (Level l : kLevels) {
    if (to_string(l) == label) return l;
  }
  throw ValidationError("unknown atomic level '" + std::string(label) + "'");
}

Mode parse_mode(std::string_view label) {
  for (Mode m : kModes) {
    if (to_string(m) == label) return m;
  }
  throw ValidationError("unknown mode label '" + std::string(label) + "'");
}

HilbertSpace::HilbertSpace(int n_max) : n_max_(n_max), photon_dim_(0) {
  if (n_max < 1) {
    throw ValidationError("invalid cutoff n_max=" + std::to_string(n_max) +
                          ": at least one photon per mode is required");
  }
  const std::size_t d = levels_per_mode();
  photon_dim_ = d * d * d * d;
}

std::size_t HilbertSpace::index_of(const BasisConfiguration& config) const {
  const std::size_t d = levels_per_mode();
  std::size_t index = static_cast<std::size_t>(config.atom);
  for (int n : config.occupation) {
    if (n < 0 || n > n_max_) {
      throw ValidationError("occupation " + std::to_string(n) + " outside [0, " + std::to_string(n_max_) + "]");
    }
    index = index * d + static_cast<std::size_t>(n);
  }
  return index;
}

BasisConfiguration HilbertSpace::state_of(std::size_t index) const {
  if (index >= dim()) throw ValidationError("basis index " + std::to_string(index) + " outside space");
  const std::size_t d = levels_per_mode();
  BasisConfiguration config;
  for (std::size_t m = kModeCount; m-- > 0;) {
    config.occupation[m] = static_cast<int>(index % d);
    index /= d;
  }
  config.atom = static_cast<Level>(index);
  return config;
}

StateVector HilbertSpace::basis_state(const BasisConfiguration& config) const {
  StateVector v = zero_state();
  v[static_cast<Eigen::Index>(index_of(config))] = 1.0;
  return v;
}

HilbertSpace build_space(int n_max) { return HilbertSpace(n_max); }

SparseOperator annihilation(const HilbertSpace& space, Mode mode) {
  const auto m = static_cast<std::size_t>(mode);
  std::vector<Triplet> entries;
  for (std::size_t col = 0; col < space.dim(); ++col) {
    BasisConfiguration c = space.state_of(col);
    const int n = c.occupation[m];
    if (n == 0) continue;
    c.occupation[m] = n - 1;
    entries.push_back({space.index_of(c), col, cplx{std::sqrt(static_cast<double>(n)), 0.0}});
  }
  return SparseOperator::from_triplets(space.dim(), entries);
}

SparseOperator creation(const HilbertSpace& space, Mode mode) { return annihilation(space, mode).adjoint(); }

SparseOperator number_operator(const HilbertSpace& space, Mode mode) {
  const auto m = static_cast<std::size_t>(mode);
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const int n = space.state_of(i).occupation[m];
    if (n > 0) entries.push_back({i, i, cplx{static_cast<double>(n), 0.0}});
  }
  return SparseOperator::from_triplets(space.dim(), entries);
}

SparseOperator total_photon_number(const HilbertSpace& space) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    int n = 0;
    for (int k : space.state_of(i).occupation) n += k;
    if (n > 0) entries.push_back({i, i, cplx{static_cast<double>(n), 0.0}});
  }
  return SparseOperator::from_triplets(space.dim(), entries);
}

SparseOperator atomic_transition(const HilbertSpace& space, Level upper, Level lower) {
  std::vector<Triplet> entries;
  entries.reserve(space.photon_dim());
  const std::size_t row0 = static_cast<std::size_t>(upper) * space.photon_dim();
  const std::size_t col0 = static_cast<std::size_t>(lower) * space.photon_dim();
  for (std::size_t p = 0; p < space.photon_dim(); ++p) entries.push_back({row0 + p, col0 + p, cplx{1.0, 0.0}});
  return SparseOperator::from_triplets(space.dim(), entries);
}

}  // namespace tripod
