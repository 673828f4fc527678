#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tripod/model.hpp"

namespace tripod {

using NamedPopulations = std::array<double, kNamedCount>;

/// |<X|psi>|^2 for each named state.
NamedPopulations populations_named(const StateVector& psi, const NamedManifoldBasis& basis);
/// <X|rho|X> for each named state.
NamedPopulations populations_named(const DensityMatrix& rho, const NamedManifoldBasis& basis);

/// <E|rho|E>.
double success_probability(const DensityMatrix& rho, const NamedManifoldBasis& basis);

enum class FidelityMode { unconditional, conditional };
std::string_view to_string(FidelityMode mode);

struct FidelityResult {
  double fidelity = 0.0;
  /// Trace of rho projected on the success sector (1 for unconditional).
  double sector_weight = 1.0;
};

/// Success sector: atom in g, exactly one photon in cavity 1 and one in cavity 2.
bool in_success_sector(const BasisConfiguration& c);

/// Amplitude fidelity against |E>. Unconditional: sqrt(<E|rho|E>).
/// Conditional: sqrt(<E|rho|E> / tr(P rho)) with P the success-sector
/// projector; throws UndefinedFidelityError when tr(P rho) < 1e-12.
FidelityResult fidelity_epr(const DensityMatrix& rho, const HilbertSpace& space, const NamedManifoldBasis& basis,
                            FidelityMode mode);

/// Population of configurations with any mode occupation equal to n_max.
double truncation_leakage(const StateVector& psi, const HilbertSpace& space);
double truncation_leakage(const DensityMatrix& rho, const HilbertSpace& space);

/// |<D|psi>|^2.
double dark_state_overlap(const StateVector& psi, const StateVector& dark);
/// <D|rho|D>.
double dark_state_overlap(const DensityMatrix& rho, const StateVector& dark);

/// <Q> with Q = total photons - [atom in a or b].
double expectation_q(const StateVector& psi, const HilbertSpace& space);
double expectation_q(const DensityMatrix& rho, const HilbertSpace& space);

struct Metrics {
  double success_probability = 0.0;
  double fidelity_unconditional = 0.0;
  /// Empty when the success sector carries no weight.
  std::optional<double> fidelity_conditional;
  double sector_weight = 0.0;
  double leakage = 0.0;
  double q_expectation = 0.0;
};

Metrics compute_metrics(const DensityMatrix& rho, const HilbertSpace& space, const NamedManifoldBasis& basis);
Metrics compute_metrics(const StateVector& psi, const HilbertSpace& space, const NamedManifoldBasis& basis);

}  // namespace tripod
