#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "tripod/dynamics.hpp"
#include "tripod/errors.hpp"
#include "tripod/kernels.hpp"

namespace tripod {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_unit(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::size_t index) {
  return splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

McwfEngine::McwfEngine(const TripodSystem& system, const StateVector& initial)
    : reduced_(system, Subspace::support(initial), /*include_jumps=*/true) {
  if (static_cast<std::size_t>(initial.size()) != system.space().dim()) {
    throw ValidationError("initial state dimension mismatch");
  }
  if (std::abs(initial.squaredNorm() - 1.0) > 1e-12) throw ValidationError("initial state must be normalized");
  initial_local_ = reduced_.subspace().restrict_vector(initial);
}

TrajectoryRecord McwfEngine::run(const TimeGrid& grid, const IntegratorConfig& config, std::uint64_t seed,
                                 const TrajectoryOptions& options) const {
  grid.validate();
  config.validate();
  const auto& kt = kernels::active();
  const Subspace& sub = reduced_.subspace();
  const std::size_t n = sub.size();
  const double kappa = reduced_.kappa();
  const bool lossy = kappa > 0.0;

  std::mt19937_64 rng(seed);
  std::vector<cplx> y(initial_local_.data(), initial_local_.data() + n);
  std::vector<cplx> start(n), probe(n), scratch(n);

  Propagator prop(
      n,
      [this](double t, std::span<const cplx> x, std::span<cplx> dx) {
        std::fill(dx.begin(), dx.end(), cplx{0.0, 0.0});
        reduced_.apply_hamiltonian(t, cplx{0.0, -1.0}, x, dx, /*with_loss=*/true);
      },
      config, grid.step());

  TrajectoryRecord rec;
  rec.seed = seed;
  std::size_t output_index = 0;
  auto emit = [&](double t) {
    StateVector psi = sub.embed_vector(y);
    psi /= psi.norm();
    rec.times.push_back(t);
    if (options.observer) options.observer(output_index, t, psi);
    if (options.record_states) rec.states.push_back(psi);
    ++output_index;
  };

  auto jump = [&](double t) {
    std::array<double, kModeCount> weights{};
    double total = 0.0;
    for (std::size_t m = 0; m < kModeCount; ++m) {
      std::fill(scratch.begin(), scratch.end(), cplx{0.0, 0.0});
      reduced_.lowering(m).apply_acc(cplx{1.0, 0.0}, y, scratch);
      weights[m] = 2.0 * kappa * kt.norm_sq(n, scratch.data());
      total += weights[m];
    }
    if (!(total > 0.0)) {
      throw InternalConsistencyError("quantum jump requested on a state with no photons");
    }
    const double pick = open_unit(rng) * total;
    std::size_t chosen = kModeCount - 1;
    double acc = 0.0;
    for (std::size_t m = 0; m < kModeCount; ++m) {
      acc += weights[m];
      if (pick < acc && weights[m] > 0.0) {
        chosen = m;
        break;
      }
    }
    std::fill(scratch.begin(), scratch.end(), cplx{0.0, 0.0});
    reduced_.lowering(chosen).apply_acc(cplx{1.0, 0.0}, y, scratch);
    const double norm = std::sqrt(kt.norm_sq(n, scratch.data()));
    for (std::size_t i = 0; i < n; ++i) y[i] = scratch[i] / norm;
    rec.jumps.push_back({t, static_cast<Mode>(chosen)});
  };

  double threshold = lossy ? open_unit(rng) : 0.0;
  emit(grid.time_at(0));
  for (int k = 0; k < grid.n_steps; ++k) {
    const double t1 = grid.time_at(k + 1);
    if (!lossy) {
      prop.advance(grid.time_at(k), t1, y);
      if (config.renormalize_each_step) kt.scale(n, cplx{1.0 / std::sqrt(kt.norm_sq(n, y.data())), 0.0}, y.data());
    } else {
      double t = grid.time_at(k);
      while (t < t1) {
        std::copy(y.begin(), y.end(), start.begin());
        prop.advance(t, t1, y);
        if (kt.norm_sq(n, y.data()) > threshold) break;
        // Locate the threshold crossing inside (t, t1].
        double lo = t;
        double hi = t1;
        while (hi - lo > options.jump_time_tol) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          std::copy(start.begin(), start.end(), probe.begin());
          prop.advance(t, mid, probe);
          if (kt.norm_sq(n, probe.data()) > threshold) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        std::copy(start.begin(), start.end(), y.begin());
        prop.advance(t, hi, y);
        jump(hi);
        threshold = open_unit(rng);
        t = hi;
      }
    }
    const double n2 = kt.norm_sq(n, y.data());
    if (!(n2 < 2.0)) throw IntegrationError("trajectory norm diverged; reduce the step size", t1);
    if (grid.is_output(k + 1)) emit(t1);
  }
  rec.final_state = sub.embed_vector(y);
  rec.final_state /= rec.final_state.norm();
  return rec;
}

TrajectoryRecord run_mcwf_trajectory(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                     const StateVector& initial, std::uint64_t seed,
                                     const TrajectoryOptions& options) {
  return McwfEngine(system, initial).run(grid, config, seed, options);
}

EnsembleResult run_mcwf_ensemble(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                 const StateVector& initial, const EnsembleOptions& options) {
  const NamedManifoldBasis basis(system.space());
  return run_mcwf_ensemble(system, grid, config, initial, options, kNamedCount,
                           [&basis](double, const StateVector& psi, std::span<double> out) {
                             const NamedPopulations p = populations_named(psi, basis);
                             std::copy(p.begin(), p.end(), out.begin());
                           });
}

EnsembleResult run_mcwf_ensemble(const TripodSystem& system, const TimeGrid& grid, const IntegratorConfig& config,
                                 const StateVector& initial, const EnsembleOptions& options, std::size_t n_channels,
                                 const ChannelSampler& sampler) {
  if (options.n_trajectories < 1) throw ValidationError("n_trajectories must be >= 1");
  grid.validate();
  config.validate();
  const McwfEngine engine(system, initial);
  const std::vector<double> times = grid.output_times();
  const std::size_t n_out = times.size();
  const std::size_t n_traj = options.n_trajectories;
  const Subspace& sub = engine.reduced().subspace();

  // Slot i belongs to trajectory i, whatever thread computes it.
  std::vector<std::vector<double>> samples(n_traj);
  std::vector<StateVector> finals(n_traj);
  std::vector<std::size_t> jumps(n_traj, 0);

  auto work = [&](std::size_t i) {
    std::vector<double>& slot = samples[i];
    slot.assign(n_out * n_channels, 0.0);
    TrajectoryOptions topt;
    topt.record_states = false;
    topt.observer = [&](std::size_t idx, double t, const StateVector& psi) {
      sampler(t, psi, std::span<double>(slot.data() + idx * n_channels, n_channels));
    };
    TrajectoryRecord rec = engine.run(grid, config, trajectory_seed(options.master_seed, i), topt);
    jumps[i] = rec.jumps.size();
    if (options.accumulate_density) finals[i] = sub.restrict_vector(rec.final_state);
  };

  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_traj));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_traj; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= n_traj) return;
          try {
            work(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(n_traj);
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  EnsembleResult result;
  result.n_trajectories = n_traj;
  result.times = times;
  result.jump_counts = std::move(jumps);
  result.mean.assign(n_out, std::vector<double>(n_channels, 0.0));
  result.stderr_.assign(n_out, std::vector<double>(n_channels, 0.0));
  for (std::size_t o = 0; o < n_out; ++o) {
    for (std::size_t c = 0; c < n_channels; ++c) {
      CompensatedSum sum;
      for (std::size_t i = 0; i < n_traj; ++i) sum.add(samples[i][o * n_channels + c]);
      const double mean = sum.value() / static_cast<double>(n_traj);
      CompensatedSum sq;
      for (std::size_t i = 0; i < n_traj; ++i) {
        const double d = samples[i][o * n_channels + c] - mean;
        sq.add(d * d);
      }
      result.mean[o][c] = mean;
      result.stderr_[o][c] =
          n_traj > 1 ? std::sqrt(sq.value() / static_cast<double>(n_traj - 1) / static_cast<double>(n_traj)) : 0.0;
    }
  }
  result.final_samples.resize(n_traj);
  for (std::size_t i = 0; i < n_traj; ++i) {
    result.final_samples[i].assign(samples[i].end() - static_cast<std::ptrdiff_t>(n_channels), samples[i].end());
  }
  if (options.accumulate_density) {
    const auto m = static_cast<Eigen::Index>(sub.size());
    DensityMatrix local = DensityMatrix::Zero(m, m);
    for (std::size_t i = 0; i < n_traj; ++i) local.noalias() += finals[i] * finals[i].adjoint();
    local /= static_cast<double>(n_traj);
    result.final_density = sub.embed_matrix(local);
  }
  return result;
}

}  // namespace tripod
