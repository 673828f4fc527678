#include <vector>

#include "tripod/dynamics.hpp"

namespace tripod {

namespace {

Subspace closure_for(const TripodSystem& system, std::span<const std::size_t> seeds, bool include_jumps) {
  const HamiltonianTerms& t = system.terms();
  std::vector<const SparseOperator*> gens{&t.pump, &t.cavity1, &t.cavity2};
  if (include_jumps) {
    for (const SparseOperator& a : t.lowering) gens.push_back(&a);
  }
  return Subspace::closure(system.space().dim(), seeds, gens);
}

}  // namespace

ReducedSystem::ReducedSystem(const TripodSystem& system, std::span<const std::size_t> seeds, bool include_jumps)
    : ReducedSystem(system, closure_for(system, seeds, include_jumps)) {}

ReducedSystem::ReducedSystem(const TripodSystem& system, Subspace subspace)
    : params_(system.params()), schedule_(system.schedule()), subspace_(std::move(subspace)) {
  const HamiltonianTerms& t = system.terms();
  sigma_ee_ = subspace_.restrict_operator(t.sigma_ee);
  pump_ = subspace_.restrict_operator(t.pump);
  cavity1_ = subspace_.restrict_operator(t.cavity1);
  cavity2_ = subspace_.restrict_operator(t.cavity2);
  photon_number_ = subspace_.restrict_operator(t.photon_number);
  for (std::size_t m = 0; m < kModeCount; ++m) lowering_[m] = subspace_.restrict_operator(t.lowering[m]);
}

void ReducedSystem::apply_hamiltonian(double t, cplx alpha, std::span<const cplx> x, std::span<cplx> y,
                                      bool with_loss) const {
  apply_hamiltonian(couplings_at(schedule_, t), alpha, x, y, with_loss);
}

void ReducedSystem::apply_hamiltonian(const Couplings& c, cplx alpha, std::span<const cplx> x, std::span<cplx> y,
                                      bool with_loss) const {
  if (params_.detuning != 0.0) sigma_ee_.apply_acc(alpha * params_.detuning, x, y);
  if (c.omega != 0.0) pump_.apply_acc(alpha * c.omega, x, y);
  if (c.g1 != 0.0) cavity1_.apply_acc(alpha * c.g1, x, y);
  if (c.g2 != 0.0) cavity2_.apply_acc(alpha * c.g2, x, y);
  if (with_loss && params_.kappa != 0.0) photon_number_.apply_acc(alpha * cplx{0.0, -params_.kappa}, x, y);
}

}  // namespace tripod
