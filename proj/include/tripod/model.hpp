#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string_view>

#include "tripod/hilbert.hpp"

namespace tripod {

/// Rates in units of Gamma, times in units of 1/Gamma.
struct PhysicalParams {
  double omega0 = 50.0;   // pump peak Rabi frequency
  double g10 = 10.0;      // cavity 1 peak coupling
  double g20 = 10.0;      // cavity 2 peak coupling
  double tau_p = 2.5;     // pump Gaussian width
  double tau_c = 2.5;     // cavity Gaussian width
  double delta_t = 4.5;   // pump center; cavity 2 sits at 2*delta_t
  double detuning = 0.0;  // common detuning (two-photon resonance built in)
  double kappa = 0.0;     // cavity field decay; photon number decays at 2*kappa

  /// Throws ValidationError on non-positive widths, negative couplings or
  /// non-finite values.
  void validate() const;
};

/// One coupling envelope: a Gaussian peak*exp(-((t-center)/width)^2) or a
/// constant (test override).
struct Envelope {
  enum class Shape { gaussian, constant };
  Shape shape = Shape::gaussian;
  double peak = 0.0;
  double center = 0.0;
  double width = 1.0;

  static Envelope gaussian(double peak, double center, double width) { return {Shape::gaussian, peak, center, width}; }
  static Envelope constant(double value) { return {Shape::constant, value, 0.0, 1.0}; }

  double operator()(double t) const;
};

enum class Pulse { pump, g1, g2 };
std::string_view to_string(Pulse which);

struct PulseSchedule {
  Envelope pump;
  Envelope g1;
  Envelope g2;

  /// Counterintuitive sequence: g1 centered at 0, pump at delta_t, g2 at 2*delta_t.
  static PulseSchedule from_params(const PhysicalParams& params);
  static PulseSchedule constant(double omega, double g1, double g2);

  const Envelope& envelope(Pulse which) const;
};

double pulse_value(const PulseSchedule& schedule, Pulse which, double t);

struct Couplings {
  double omega = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
};

Couplings couplings_at(const PulseSchedule& schedule, double t);

/// Time-independent pieces of the interaction Hamiltonian,
///   H(t) = detuning*sigma_ee + Omega(t)*X_pump + g1(t)*X_cav1 + g2(t)*X_cav2,
/// plus the photon-number operator that carries the cavity loss.
struct HamiltonianTerms {
  SparseOperator sigma_ee;
  SparseOperator pump;      // sigma_eg + h.c.
  SparseOperator cavity1;   // a1+^dag sigma_ae + a1-^dag sigma_be + h.c.
  SparseOperator cavity2;   // same with cavity-2 modes
  SparseOperator photon_number;
  std::array<SparseOperator, kModeCount> lowering;

  static HamiltonianTerms build(const HilbertSpace& space);
};

/// Space, parameters, pulse schedule and prebuilt operator terms. Immutable
/// after construction; safe to share between threads.
class TripodSystem {
 public:
  TripodSystem(const HilbertSpace& space, const PhysicalParams& params, const PulseSchedule& schedule);
  TripodSystem(const HilbertSpace& space, const PhysicalParams& params);

  const HilbertSpace& space() const { return space_; }
  const PhysicalParams& params() const { return params_; }
  const PulseSchedule& schedule() const { return schedule_; }
  const HamiltonianTerms& terms() const { return terms_; }

  Couplings couplings(double t) const { return couplings_at(schedule_, t); }

  SparseOperator hamiltonian(double t) const;
  /// H(t) - i*kappa*N.
  SparseOperator effective_hamiltonian(double t) const;
  /// sqrt(2 kappa) a_m for the four modes.
  std::array<SparseOperator, kModeCount> jump_operators() const;

 private:
  HilbertSpace space_;
  PhysicalParams params_;
  PulseSchedule schedule_;
  HamiltonianTerms terms_;
};

SparseOperator hamiltonian(const HilbertSpace& space, const PhysicalParams& params, const PulseSchedule& schedule,
                           double t);
SparseOperator effective_hamiltonian(const HilbertSpace& space, const PhysicalParams& params,
                                     const PulseSchedule& schedule, double t);

/// Excitation charge Q = total photon number - [atom in a or b]. Diagonal.
SparseOperator excitation_charge(const HilbertSpace& space);

// ---------------------------------------------------------------------------
// Named single-manifold basis |A>..|H>.

enum class Named : std::uint8_t { A = 0, B, C, D, E, F, G, H };
inline constexpr std::size_t kNamedCount = 8;
std::string_view to_string(Named n);

class NamedManifoldBasis {
 public:
  explicit NamedManifoldBasis(const HilbertSpace& space);

  const StateVector& operator[](Named n) const { return states_[static_cast<std::size_t>(n)]; }
  const StateVector& at(std::size_t k) const { return states_.at(k); }
  std::size_t dim() const { return dim_; }

  /// Full-space indices carrying each named state's amplitudes.
  const std::vector<std::size_t>& support(Named n) const { return support_[static_cast<std::size_t>(n)]; }

 private:
  std::size_t dim_;
  std::array<StateVector, kNamedCount> states_;
  std::array<std::vector<std::size_t>, kNamedCount> support_;
};

NamedManifoldBasis named_basis(const HilbertSpace& space);

using ManifoldMatrix = Eigen::Matrix<cplx, 8, 8>;

/// <X|H(t)|Y> over the named basis.
ManifoldMatrix manifold_matrix_elements(const TripodSystem& system, double t);
ManifoldMatrix manifold_matrix_elements(const HilbertSpace& space, const PhysicalParams& params,
                                        const PulseSchedule& schedule, double t);

// ---------------------------------------------------------------------------
// Dark states.

/// Two-argument arctangent restricted to non-negative inputs: returns pi/2
/// when x == 0 < y and throws UndefinedAngleError when both are zero.
double mixing_angle(double y, double x);

struct DarkStateAngles {
  double theta = 0.0;     // tan = Omega / (sqrt2 g1)
  double beta = 0.0;      // tan = Omega / g2
  double gamma = 0.0;     // tan = g2 / Omega
  double vartheta = 0.0;  // tan = sqrt2 g1 / sqrt(Omega^2 + g2^2)
};

/// All four angles; throws UndefinedAngleError if any pair is degenerate.
DarkStateAngles mixing_angles(const Couplings& c);

/// Coordinates over (|A>, |C>, |E>) of each dark state, phase-fixed so the
/// first nonvanishing of the A, C coefficients is non-negative.
struct DarkCoordinates {
  double a = 0.0;
  double c = 0.0;
  double e = 0.0;
};

DarkCoordinates dark_coordinates_stage1(const Couplings& c);
DarkCoordinates dark_coordinates_stage2(const Couplings& c);
DarkCoordinates dark_coordinates_global(const Couplings& c);

StateVector dark_state_stage1(const TripodSystem& system, const NamedManifoldBasis& basis, double t);
StateVector dark_state_stage2(const TripodSystem& system, const NamedManifoldBasis& basis, double t);
StateVector dark_state_global(const TripodSystem& system, const NamedManifoldBasis& basis, double t);

StateVector dark_state_from(const DarkCoordinates& coords, const NamedManifoldBasis& basis);

}  // namespace tripod
