#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tripod/integrator.hpp"
#include "tripod/model.hpp"
#include "tripod/observables.hpp"
#include "tripod/subspace.hpp"

namespace tripod {

/// The model's operator terms restricted to an invariant subspace, with the
/// hot-path products written against the kernel table.
class ReducedSystem {
 public:
  /// Closure of `seeds` under every Hamiltonian term and, when
  /// `include_jumps`, the lowering operators.
  ReducedSystem(const TripodSystem& system, std::span<const std::size_t> seeds, bool include_jumps);
  ReducedSystem(const TripodSystem& system, Subspace subspace);

  const Subspace& subspace() const { return subspace_; }
  std::size_t size() const { return subspace_.size(); }
  double kappa() const { return params_.kappa; }
  const SparseOperator& lowering(std::size_t mode) const { return lowering_[mode]; }

  /// y += alpha * H(t) x, plus alpha * (-i kappa N) x when `with_loss`.
  void apply_hamiltonian(double t, cplx alpha, std::span<const cplx> x, std::span<cplx> y, bool with_loss) const;
  void apply_hamiltonian(const Couplings& c, cplx alpha, std::span<const cplx> x, std::span<cplx> y,
                         bool with_loss) const;
  Couplings couplings(double t) const { return couplings_at(schedule_, t); }

 private:
  PhysicalParams params_;
  PulseSchedule schedule_;
  Subspace subspace_;
  SparseOperator sigma_ee_, pump_, cavity1_, cavity2_, photon_number_;
  std::array<SparseOperator, kModeCount> lowering_;
};

// ---------------------------------------------------------------------------
// Closed system.

struct SchrodingerResult {
  std::vector<double> times;
  std::vector<StateVector> states;
  /// max |<psi|psi> - 1| seen after any step (before renormalization).
  double max_norm_drift = 0.0;
  std::size_t subspace_dim = 0;
};

/// i d/dt psi = H(t) psi. Cavity loss is ignored.
SchrodingerResult evolve_schrodinger(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                     const StateVector& initial);

// ---------------------------------------------------------------------------
// Master equation.

struct LindbladDiagnostics {
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t subspace_dim = 0;
  std::vector<std::string> warnings;
};

using DensityObserver = std::function<void(double t, const DensityMatrix& rho)>;

struct LindbladResult {
  std::vector<double> times;
  DensityMatrix final_state;
  LindbladDiagnostics diagnostics;
};

/// d rho/dt = -i[H, rho] + kappa sum_m (2 a rho a^dag - a^dag a rho - rho a^dag a),
/// integrated on the invariant block of the initial support; rho is
/// re-symmetrized after every step. `observer` sees every output time.
LindbladResult evolve_lindblad(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                               const DensityMatrix& initial, const DensityObserver& observer = {});

/// Throws ValidationError unless rho is Hermitian (1e-10), unit trace
/// (1e-10) and has no eigenvalue below -1e-8.
void validate_density(const DensityMatrix& rho);

// ---------------------------------------------------------------------------
// Quantum trajectories.

struct JumpEvent {
  double time = 0.0;
  Mode mode = Mode::cav1_plus;
  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<JumpEvent> jumps;
  std::vector<double> times;
  /// Normalized full-space states at output times (empty unless requested).
  std::vector<StateVector> states;
  StateVector final_state;
};

using TrajectoryObserver = std::function<void(std::size_t output_index, double t, const StateVector& psi)>;

struct TrajectoryOptions {
  bool record_states = true;
  /// Called with the normalized full-space state at every output time.
  TrajectoryObserver observer;
  /// Bisection tolerance on jump times.
  double jump_time_tol = 1e-10;
};

/// Reusable trajectory generator for one (system, initial state) pair. The
/// engine is immutable; run() may be called concurrently.
class McwfEngine {
 public:
  McwfEngine(const TripodSystem& system, const StateVector& initial);

  const ReducedSystem& reduced() const { return reduced_; }
  TrajectoryRecord run(const TimeGrid& grid, const IntegratorConfig& config, std::uint64_t seed,
                       const TrajectoryOptions& options = {}) const;

 private:
  ReducedSystem reduced_;
  StateVector initial_local_;
};

/// Evolves under H - i kappa N, jumping when |psi|^2 falls below a uniform
/// threshold; jump channel drawn with weight |C_m psi|^2, C_m = sqrt(2 kappa) a_m.
TrajectoryRecord run_mcwf_trajectory(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                     const StateVector& initial, std::uint64_t seed,
                                     const TrajectoryOptions& options = {});

/// Per-trajectory seed; a pure function of (master, index).
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::size_t index);

/// Fills `out` with one sample per channel for a normalized state.
using ChannelSampler = std::function<void(double t, const StateVector& psi, std::span<double> out)>;

struct EnsembleOptions {
  std::size_t n_trajectories = 2000;
  std::uint64_t master_seed = 1;
  /// 0 = hardware concurrency.
  unsigned workers = 0;
  bool accumulate_density = true;
};

struct EnsembleResult {
  std::size_t n_trajectories = 0;
  std::vector<double> times;
  /// [time][channel]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stderr_;
  /// Mean of |psi><psi| at the final time (empty if not accumulated).
  DensityMatrix final_density;
  std::vector<std::size_t> jump_counts;
  /// Per-trajectory channel values at the final time, [trajectory][channel].
  std::vector<std::vector<double>> final_samples;
};

/// Default channels: the eight named-basis populations.
EnsembleResult run_mcwf_ensemble(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                 const StateVector& initial, const EnsembleOptions& options);

/// Custom channels. Results do not depend on the worker count: seeds come
/// from the trajectory index and reductions run in index order.
EnsembleResult run_mcwf_ensemble(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                 const StateVector& initial, const EnsembleOptions& options, std::size_t n_channels,
                                 const ChannelSampler& sampler);

}  // namespace tripod
