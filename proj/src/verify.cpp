#include "tripod/verify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <random>

#include "tripod/dynamics.hpp"
#include "tripod/errors.hpp"

namespace tripod {

namespace {

CheckResult below(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value < threshold ? CheckStatus::pass : CheckStatus::fail, value, threshold,
          std::move(detail)};
}

std::vector<double> random_times(const TimeGrid& grid, std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(grid.t_start, grid.t_end);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& t : out) t = u(rng);
  return out;
}

ManifoldMatrix expected_table(const Couplings& c, double detuning) {
  ManifoldMatrix m = ManifoldMatrix::Zero();
  auto link = [&](Named x, Named y, double v) {
    m(static_cast<int>(x), static_cast<int>(y)) = v;
    m(static_cast<int>(y), static_cast<int>(x)) = v;
  };
  link(Named::A, Named::B, c.omega);
  link(Named::B, Named::C, std::numbers::sqrt2 * c.g1);
  link(Named::C, Named::D, c.g2);
  link(Named::D, Named::E, c.omega);
  link(Named::F, Named::G, c.g2);
  link(Named::G, Named::H, c.omega);
  for (Named e : {Named::B, Named::D, Named::G}) m(static_cast<int>(e), static_cast<int>(e)) = detuning;
  return m;
}

NamedPopulations final_populations(const ScenarioConfig& cfg, int n_max, const TimeGrid& grid) {
  const HilbertSpace space(n_max);
  const TripodSystem system(space, cfg.effective_params());
  const NamedManifoldBasis basis(space);
  const SchrodingerResult r = evolve_schrodinger(system, grid, cfg.integrator, basis[Named::A]);
  return populations_named(r.states.back(), basis);
}

double max_diff(const NamedPopulations& a, const NamedPopulations& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skip: return "skip";
    case CheckStatus::info: return "info";
  }
  return "?";
}

bool VerifyReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult& VerifyReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw ValidationError("no check named '" + std::string(name) + "'");
}

VerifyReport run_verify(const ScenarioConfig& config) {
  config.validate();
  VerifyReport report;
  auto& out = report.checks;
  const PhysicalParams params = config.effective_params();
  const HilbertSpace space(config.n_max);
  const TripodSystem system(space, params);
  const NamedManifoldBasis basis(space);
  const std::vector<double> times = random_times(config.grid, config.master_seed, 100);

  {
    double worst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
      const SparseOperator h = system.hamiltonian(times[i]);
      worst = std::max(worst, h.max_abs_diff(h.adjoint()));
    }
    out.push_back(below("hamiltonian_hermitian", worst, 1e-12));
  }

  if (params.detuning != 0.0) {
    out.push_back({"dark_state_nullity", CheckStatus::skip, 0.0, 1e-10, "nullity only holds at zero detuning"});
  } else {
    double worst = 0.0;
    for (double t : times) {
      const SparseOperator h = system.hamiltonian(t);
      const double scale = inf_norm(h);
      if (scale == 0.0) continue;
      const StateVector d = dark_state_global(system, basis, t);
      worst = std::max(worst, h.apply(d).norm() / scale);
    }
    out.push_back(below("dark_state_nullity", worst, 1e-10, "max |H D| / |H| over 100 random times"));
  }

  {
    double worst = 0.0;
    for (std::size_t i = 0; i < 20; ++i) {
      const ManifoldMatrix got = manifold_matrix_elements(system, times[i]);
      const ManifoldMatrix want = expected_table(system.couplings(times[i]), params.detuning);
      worst = std::max(worst, (got - want).cwiseAbs().maxCoeff());
    }
    out.push_back(below("matrix_element_table", worst, 1e-12));
  }

  {
    const SparseOperator q = excitation_charge(space);
    double worst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
      const SparseOperator h = system.hamiltonian(times[i]);
      worst = std::max(worst, (h * q - q * h).max_abs());
    }
    out.push_back(below("charge_commutes_with_h", worst, 1e-12));
  }

  const SchrodingerResult closed = evolve_schrodinger(system, config.grid, config.integrator, basis[Named::A]);
  out.push_back(below("norm_drift", closed.max_norm_drift, 1e-9));

  {
    TimeGrid fine = config.grid;
    fine.n_steps *= 2;
    fine.output_stride *= 2;
    const double d = max_diff(populations_named(closed.states.back(), basis),
                              final_populations(config, config.n_max, fine));
    out.push_back(below("step_halving", d, 1e-6, "max change in final named populations"));
  }

  // Dissipative checks use the configured kappa, or 0.01 g10 when it is zero.
  PhysicalParams lossy = params;
  if (lossy.kappa == 0.0) lossy.kappa = 0.01 * params.g10;
  const TripodSystem open(space, lossy);
  const StateVector a = basis[Named::A];
  std::vector<double> lindblad_p;
  const LindbladResult lind =
      evolve_lindblad(open, config.grid, config.integrator, DensityMatrix(a * a.adjoint()),
                      [&](double, const DensityMatrix& rho) { lindblad_p.push_back(success_probability(rho, basis)); });
  out.push_back(below("trace_drift", lind.diagnostics.max_trace_drift, 1e-7));
  out.push_back({"min_eigenvalue", lind.diagnostics.min_eigenvalue >= -1e-6 ? CheckStatus::pass : CheckStatus::fail,
                 lind.diagnostics.min_eigenvalue, -1e-6, "lowest eigenvalue at any output time"});

  {
    EnsembleOptions opt;
    opt.n_trajectories = config.n_trajectories;
    opt.master_seed = config.master_seed;
    opt.workers = config.workers;
    opt.accumulate_density = false;
    const EnsembleResult ens = run_mcwf_ensemble(open, config.grid, config.integrator, a, opt);
    const std::size_t e = static_cast<std::size_t>(Named::E);
    const std::size_t last = lindblad_p.size() - 1;
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(lindblad_p.begin(), lindblad_p.end()) - lindblad_p.begin());
    const double floor = 1.0 / static_cast<double>(opt.n_trajectories);
    double worst = 0.0;
    for (std::size_t k : {peak, last}) {
      const double se = std::max(ens.stderr_[k][e], floor);
      worst = std::max(worst, std::abs(ens.mean[k][e] - lindblad_p[k]) / se);
    }
    out.push_back(below("mcwf_vs_lindblad", worst, 3.0,
                        "|P_mcwf - P_lindblad| / max(stderr, 1/n) at the Lindblad peak and the final time"));
  }

  {
    const SparseOperator q = excitation_charge(space);
    const double q0 = expectation_q(a, space);
    double worst = 0.0;
    std::size_t jumps = 0;
    const McwfEngine engine(open, a);
    for (std::size_t i = 0; i < 20; ++i) {
      const TrajectoryRecord rec = engine.run(config.grid, config.integrator, trajectory_seed(config.master_seed, i));
      jumps += rec.jumps.size();
      for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const auto before = std::count_if(rec.jumps.begin(), rec.jumps.end(),
                                          [&](const JumpEvent& j) { return j.time <= rec.times[k]; });
        const StateVector& psi = rec.states[k];
        const double mean = expectation_q(psi, space);
        const double second = q.apply(psi).squaredNorm();
        worst = std::max({worst, std::abs(mean - (q0 - static_cast<double>(before))), std::abs(second - mean * mean)});
      }
    }
    out.push_back(below("charge_jump_bookkeeping", worst, 1e-9,
                        "Q is sharp and drops by one per jump; " + std::to_string(jumps) + " jumps in 20 trajectories"));
  }

  {
    const NamedPopulations here = populations_named(closed.states.back(), basis);
    out.push_back({"leakage_nmax_" + std::to_string(config.n_max), CheckStatus::info,
                   truncation_leakage(closed.states.back(), space), 0.0, "final truncation leakage"});
    if (config.n_max > 1) {
      const HilbertSpace lower(config.n_max - 1);
      const TripodSystem sys(lower, params);
      const SchrodingerResult r = evolve_schrodinger(sys, config.grid, config.integrator, NamedManifoldBasis(lower)[Named::A]);
      out.push_back({"leakage_nmax_" + std::to_string(config.n_max - 1), CheckStatus::info,
                     truncation_leakage(r.states.back(), lower), 0.0, "final truncation leakage at the lower cutoff"});
    }
    if (config.n_max < 6) {
      const HilbertSpace upper(config.n_max + 1);
      const TripodSystem sys(upper, params);
      const NamedManifoldBasis ub(upper);
      const SchrodingerResult r = evolve_schrodinger(sys, config.grid, config.integrator, ub[Named::A]);
      out.push_back({"leakage_nmax_" + std::to_string(config.n_max + 1), CheckStatus::info,
                     truncation_leakage(r.states.back(), upper), 0.0, "final truncation leakage at the higher cutoff"});
      out.push_back(below("cutoff_convergence", max_diff(here, populations_named(r.states.back(), ub)), 1e-3,
                          "max change in final named populations from n_max to n_max+1"));
    } else {
      out.push_back({"cutoff_convergence", CheckStatus::skip, 0.0, 1e-3, "n_max is already at the largest cutoff"});
    }
  }
  return report;
}

std::string to_json(const VerifyReport& report, const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  j["passed"] = report.passed();
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"status", std::string(to_string(c.status))},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"detail", c.detail}});
  }
  j["config"] = config.serialize();
  return j.dump(2) + "\n";
}

void write_verify(const VerifyReport& report, const ScenarioConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "verify.json");
  if (!out) throw ValidationError("cannot write " + (dir / "verify.json").string());
  out << to_json(report, config);
}

}  // namespace tripod
