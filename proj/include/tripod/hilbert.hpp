#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "tripod/sparse_operator.hpp"

namespace tripod {

/// Tripod atom levels: ground, two metastable, excited.
enum class Level : std::uint8_t { g = 0, a = 1, b = 2, e = 3 };

/// Cavity modes in index order: cavity 1 sigma+/sigma-, cavity 2 sigma+/sigma-.
enum class Mode : std::uint8_t { cav1_plus = 0, cav1_minus = 1, cav2_plus = 2, cav2_minus = 3 };

inline constexpr std::size_t kAtomLevels = 4;
inline constexpr std::size_t kModeCount = 4;
inline constexpr std::array<Level, kAtomLevels> kLevels{Level::g, Level::a, Level::b, Level::e};
inline constexpr std::array<Mode, kModeCount> kModes{Mode::cav1_plus, Mode::cav1_minus, Mode::cav2_plus,
                                                     Mode::cav2_minus};

std::string_view to_string(Level level);
std::string_view to_string(Mode mode);
/// Accepts "g", "a", "b", "e". Throws ValidationError otherwise.
Level parse_level(std::string_view label);
/// Accepts "1+", "1-", "2+", "2-". Throws ValidationError otherwise.
Mode parse_mode(std::string_view label);

using Occupation = std::array<int, kModeCount>;

struct BasisConfiguration {
  Level atom = Level::g;
  Occupation occupation{};

  friend bool operator==(const BasisConfiguration&, const BasisConfiguration&) = default;
};

/// Truncated product space {g,a,b,e} x Fock(n_max)^4.
///
/// Index layout is atom-major, then the four occupations lexicographically in
/// kModes order:
///   index = atom*(n+1)^4 + n1p*(n+1)^3 + n1m*(n+1)^2 + n2p*(n+1) + n2m
class HilbertSpace {
 public:
  /// Throws ValidationError for n_max < 1.
  explicit HilbertSpace(int n_max);

  int n_max() const { return n_max_; }
  std::size_t levels_per_mode() const { return static_cast<std::size_t>(n_max_) + 1; }
  std::size_t photon_dim() const { return photon_dim_; }
  std::size_t dim() const { return kAtomLevels * photon_dim_; }

  std::size_t index_of(const BasisConfiguration& config) const;
  BasisConfiguration state_of(std::size_t index) const;

  StateVector basis_state(const BasisConfiguration& config) const;
  StateVector zero_state() const { return StateVector::Zero(static_cast<Eigen::Index>(dim())); }

  friend bool operator==(const HilbertSpace& a, const HilbertSpace& b) { return a.n_max_ == b.n_max_; }

 private:
  int n_max_;
  std::size_t photon_dim_;
};

HilbertSpace build_space(int n_max);

/// Bosonic lowering operator on `mode`, identity on the atom and other modes.
SparseOperator annihilation(const HilbertSpace& space, Mode mode);
/// Hard-truncated raising operator; maps occupation n_max to zero.
SparseOperator creation(const HilbertSpace& space, Mode mode);
/// a^dagger a on one mode.
SparseOperator number_operator(const HilbertSpace& space, Mode mode);
/// Sum of the four mode number operators.
SparseOperator total_photon_number(const HilbertSpace& space);
/// |upper><lower| on the atom, identity on all modes.
SparseOperator atomic_transition(const HilbertSpace& space, Level upper, Level lower);

}  // namespace tripod
