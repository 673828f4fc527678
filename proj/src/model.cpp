#include "tripod/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

BasisConfiguration cfg(Level atom, int n1p, int n1m, int n2p, int n2m) { return {atom, {n1p, n1m, n2p, n2m}}; }

}  // namespace

void PhysicalParams::validate() const {
  for (double v : {omega0, g10, g20, tau_p, tau_c, delta_t, detuning, kappa}) {
    require(std::isfinite(v), "physical parameters must be finite");
  }
  require(tau_p > 0.0, "tau_p must be > 0");
  require(tau_c > 0.0, "tau_c must be > 0");
  require(omega0 >= 0.0, "omega0 must be >= 0");
  require(g10 >= 0.0, "g10 must be >= 0");
  require(g20 >= 0.0, "g20 must be >= 0");
  require(kappa >= 0.0, "kappa must be >= 0");
}

double Envelope::operator()(double t) const {
  if (shape == Shape::constant) return peak;
  const double x = (t - center) / width;
  return peak * std::exp(-x * x);
}

std::string_view to_string(Pulse which) {
  switch (which) {
    case Pulse::pump: return "pump";
    case Pulse::g1: return "g1";
    case Pulse::g2: return "g2";
  }
  return "?";
}

PulseSchedule PulseSchedule::from_params(const PhysicalParams& p) {
  return {Envelope::gaussian(p.omega0, p.delta_t, p.tau_p), Envelope::gaussian(p.g10, 0.0, p.tau_c),
          Envelope::gaussian(p.g20, 2.0 * p.delta_t, p.tau_c)};
}

PulseSchedule PulseSchedule::constant(double omega, double g1, double g2) {
  return {Envelope::constant(omega), Envelope::constant(g1), Envelope::constant(g2)};
}

const Envelope& PulseSchedule::envelope(Pulse which) const {
  switch (which) {
    case Pulse::pump: return pump;
    case Pulse::g1: return g1;
    case Pulse::g2: return g2;
  }
  return pump;
}

double pulse_value(const PulseSchedule& schedule, Pulse which, double t) { return schedule.envelope(which)(t); }

Couplings couplings_at(const PulseSchedule& s, double t) { return {s.pump(t), s.g1(t), s.g2(t)}; }

HamiltonianTerms HamiltonianTerms::build(const HilbertSpace& space) {
  HamiltonianTerms t;
  t.sigma_ee = atomic_transition(space, Level::e, Level::e);
  const SparseOperator sigma_eg = atomic_transition(space, Level::e, Level::g);
  t.pump = sigma_eg + sigma_eg.adjoint();

  const SparseOperator sigma_ae = atomic_transition(space, Level::a, Level::e);
  const SparseOperator sigma_be = atomic_transition(space, Level::b, Level::e);
  auto cavity = [&](Mode plus, Mode minus) {
    const SparseOperator emit = creation(space, plus) * sigma_ae + creation(space, minus) * sigma_be;
    return emit + emit.adjoint();
  };
  t.cavity1 = cavity(Mode::cav1_plus, Mode::cav1_minus);
  t.cavity2 = cavity(Mode::cav2_plus, Mode::cav2_minus);
  t.photon_number = total_photon_number(space);
  for (Mode m : kModes) t.lowering[static_cast<std::size_t>(m)] = annihilation(space, m);
  return t;
}

TripodSystem::TripodSystem(const HilbertSpace& space, const PhysicalParams& params, const PulseSchedule& schedule)
    : space_(space), params_(params), schedule_(schedule), terms_(HamiltonianTerms::build(space)) {
  params_.validate();
}

TripodSystem::TripodSystem(const HilbertSpace& space, const PhysicalParams& params)
    : TripodSystem(space, params, PulseSchedule::from_params(params)) {}

SparseOperator TripodSystem::hamiltonian(double t) const {
  const Couplings c = couplings(t);
  return cplx{params_.detuning, 0.0} * terms_.sigma_ee + cplx{c.omega, 0.0} * terms_.pump +
         cplx{c.g1, 0.0} * terms_.cavity1 + cplx{c.g2, 0.0} * terms_.cavity2;
}

SparseOperator TripodSystem::effective_hamiltonian(double t) const {
  return hamiltonian(t) + cplx{0.0, -params_.kappa} * terms_.photon_number;
}

std::array<SparseOperator, kModeCount> TripodSystem::jump_operators() const {
  std::array<SparseOperator, kModeCount> out;
  const cplx amp{std::sqrt(2.0 * params_.kappa), 0.0};
  for (std::size_t m = 0; m < kModeCount; ++m) out[m] = amp * terms_.lowering[m];
  return out;
}

SparseOperator hamiltonian(const HilbertSpace& space, const PhysicalParams& params, const PulseSchedule& schedule,
                           double t) {
  return TripodSystem(space, params, schedule).hamiltonian(t);
}

SparseOperator effective_hamiltonian(const HilbertSpace& space, const PhysicalParams& params,
                                     const PulseSchedule& schedule, double t) {
  return TripodSystem(space, params, schedule).effective_hamiltonian(t);
}

SparseOperator excitation_charge(const HilbertSpace& space) {
  std::vector<Triplet> entries;
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const BasisConfiguration c = space.state_of(i);
    int q = 0;
    for (int n : c.occupation) q += n;
    if (c.atom == Level::a || c.atom == Level::b) q -= 1;
    if (q != 0) entries.push_back({i, i, cplx{static_cast<double>(q), 0.0}});
  }
  return SparseOperator::from_triplets(space.dim(), entries);
}

// ---------------------------------------------------------------------------

std::string_view to_string(Named n) {
  static constexpr std::array<std::string_view, kNamedCount> names{"A", "B", "C", "D", "E", "F", "G", "H"};
  return names[static_cast<std::size_t>(n)];
}

NamedManifoldBasis::NamedManifoldBasis(const HilbertSpace& space) : dim_(space.dim()) {
  const double r = 1.0 / std::numbers::sqrt2;
  auto single = [&](BasisConfiguration x) {
    return std::pair{space.basis_state(x), std::vector<std::size_t>{space.index_of(x)}};
  };
  auto pair = [&](BasisConfiguration x, BasisConfiguration y, double sign) {
    StateVector v = r * space.basis_state(x) + (sign * r) * space.basis_state(y);
    return std::pair{v, std::vector<std::size_t>{space.index_of(x), space.index_of(y)}};
  };
  const auto c_plus = cfg(Level::a, 1, 0, 1, 1);
  const auto c_minus = cfg(Level::b, 0, 1, 1, 1);
  const auto de_plus = cfg(Level::e, 1, 0, 0, 1);
  const auto de_minus = cfg(Level::e, 0, 1, 1, 0);
  const auto eh_plus = cfg(Level::g, 1, 0, 0, 1);
  const auto eh_minus = cfg(Level::g, 0, 1, 1, 0);

  const std::array<std::pair<StateVector, std::vector<std::size_t>>, kNamedCount> built{
      single(cfg(Level::g, 0, 0, 1, 1)),  // A
      single(cfg(Level::e, 0, 0, 1, 1)),  // B
      pair(c_plus, c_minus, +1.0),        // C
      pair(de_plus, de_minus, +1.0),      // D
      pair(eh_plus, eh_minus, +1.0),      // E
      pair(c_plus, c_minus, -1.0),        // F
      pair(de_plus, de_minus, -1.0),      // G
      pair(eh_plus, eh_minus, -1.0),      // H
  };
  for (std::size_t k = 0; k < kNamedCount; ++k) {
    states_[k] = built[k].first;
    support_[k] = built[k].second;
  }
}

NamedManifoldBasis named_basis(const HilbertSpace& space) { return NamedManifoldBasis(space); }

ManifoldMatrix manifold_matrix_elements(const TripodSystem& system, double t) {
  const NamedManifoldBasis basis(system.space());
  const SparseOperator h = system.hamiltonian(t);
  ManifoldMatrix out;
  for (std::size_t j = 0; j < kNamedCount; ++j) {
    const StateVector hy = h.apply(basis.at(j));
    for (std::size_t i = 0; i < kNamedCount; ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = basis.at(i).dot(hy);
    }
  }
  return out;
}

ManifoldMatrix manifold_matrix_elements(const HilbertSpace& space, const PhysicalParams& params,
                                        const PulseSchedule& schedule, double t) {
  return manifold_matrix_elements(TripodSystem(space, params, schedule), t);
}

// ---------------------------------------------------------------------------

double mixing_angle(double y, double x) {
  if (y < 0.0 || x < 0.0) throw ValidationError("mixing angles require non-negative couplings");
  if (y == 0.0 && x == 0.0) throw UndefinedAngleError("mixing angle undefined: both couplings are zero");
  if (x == 0.0) return std::numbers::pi / 2.0;
  return std::atan2(y, x);
}

DarkStateAngles mixing_angles(const Couplings& c) {
  const double g1t = std::numbers::sqrt2 * c.g1;
  return {mixing_angle(c.omega, g1t), mixing_angle(c.omega, c.g2), mixing_angle(c.g2, c.omega),
          mixing_angle(g1t, std::hypot(c.omega, c.g2))};
}

namespace {

// First nonvanishing of (a, c) made non-negative.
DarkCoordinates fix_phase(DarkCoordinates d) {
  const double lead = d.a != 0.0 ? d.a : d.c;
  if (lead < 0.0) {
    d.a = -d.a;
    d.c = -d.c;
    d.e = -d.e;
  }
  return d;
}

}  // namespace

DarkCoordinates dark_coordinates_stage1(const Couplings& c) {
  const double g1t = std::numbers::sqrt2 * c.g1;
  mixing_angle(c.omega, g1t);  // validates
  const double r = std::hypot(c.omega, g1t);
  // sin(theta) |C> - cos(theta) |A>
  return fix_phase({-g1t / r, c.omega / r, 0.0});
}

DarkCoordinates dark_coordinates_stage2(const Couplings& c) {
  mixing_angle(c.omega, c.g2);
  const double r = std::hypot(c.omega, c.g2);
  // sin(beta) |C> - cos(beta) |E>
  return fix_phase({0.0, c.omega / r, -c.g2 / r});
}

DarkCoordinates dark_coordinates_global(const Couplings& c) {
  const double g1t = std::numbers::sqrt2 * c.g1;
  if (c.omega < 0.0 || c.g1 < 0.0 || c.g2 < 0.0) throw ValidationError("dark state requires non-negative couplings");
  if (c.omega == 0.0 && c.g1 == 0.0 && c.g2 == 0.0) {
    throw UndefinedAngleError("global dark state undefined: all couplings are zero");
  }
  // sin(vt)|A> - cos(g)cos(vt)|C> + sin(g)cos(vt)|E>  ==  (sqrt2 g1, -Omega, g2) / norm
  const double r = std::sqrt(g1t * g1t + c.omega * c.omega + c.g2 * c.g2);
  return fix_phase({g1t / r, -c.omega / r, c.g2 / r});
}

StateVector dark_state_from(const DarkCoordinates& d, const NamedManifoldBasis& basis) {
  return d.a * basis[Named::A] + d.c * basis[Named::C] + d.e * basis[Named::E];
}

StateVector dark_state_stage1(const TripodSystem& system, const NamedManifoldBasis& basis, double t) {
  return dark_state_from(dark_coordinates_stage1(system.couplings(t)), basis);
}

StateVector dark_state_stage2(const TripodSystem& system, const NamedManifoldBasis& basis, double t) {
  return dark_state_from(dark_coordinates_stage2(system.couplings(t)), basis);
}

StateVector dark_state_global(const TripodSystem& system, const NamedManifoldBasis& basis, double t) {
  return dark_state_from(dark_coordinates_global(system.couplings(t)), basis);
}

}  // namespace tripod
