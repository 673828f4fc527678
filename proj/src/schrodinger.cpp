#include <cmath>

#include "tripod/dynamics.hpp"
#include "tripod/errors.hpp"
#include "tripod/kernels.hpp"

namespace tripod {

SchrodingerResult evolve_schrodinger(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                     const StateVector& initial) {
  grid.validate();
  config.validate();
  if (static_cast<std::size_t>(initial.size()) != system.space().dim()) {
    throw ValidationError("initial state dimension mismatch");
  }
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-12) throw ValidationError("initial state must be normalized");

  const std::vector<std::size_t> seeds = Subspace::support(initial);
  const ReducedSystem reduced(system, seeds, /*include_jumps=*/false);
  const Subspace& sub = reduced.subspace();

  StateVector local = sub.restrict_vector(initial);
  std::span<cplx> y(local.data(), static_cast<std::size_t>(local.size()));

  Propagator prop(
      y.size(),
      [&reduced](double t, std::span<const cplx> x, std::span<cplx> dx) {
        std::fill(dx.begin(), dx.end(), cplx{0.0, 0.0});
        reduced.apply_hamiltonian(t, cplx{0.0, -1.0}, x, dx, /*with_loss=*/false);
      },
      config, grid.step());

  SchrodingerResult result;
  result.subspace_dim = sub.size();
  result.times.push_back(grid.time_at(0));
  result.states.push_back(sub.embed_vector(y));
  for (int k = 0; k < grid.n_steps; ++k) {
    prop.advance(grid.time_at(k), grid.time_at(k + 1), y);
    const double n2 = kernels::norm_sq(y);
    if (!(n2 < 2.0)) throw IntegrationError("state norm diverged; reduce the step size", grid.time_at(k + 1));
    result.max_norm_drift = std::max(result.max_norm_drift, std::abs(n2 - 1.0));
    if (config.renormalize_each_step) kernels::scale(cplx{1.0 / std::sqrt(n2), 0.0}, y);
    if (grid.is_output(k + 1)) {
      result.times.push_back(grid.time_at(k + 1));
      result.states.push_back(sub.embed_vector(y));
    }
  }
  return result;
}

}  // namespace tripod
