#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "tripod/config.hpp"
#include "tripod/errors.hpp"
#include "tripod/experiments.hpp"
#include "tripod/verify.hpp"

using namespace tripod;

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> solver;
  std::optional<int> nmax;
  std::optional<std::size_t> trajectories;
  std::optional<double> kappa_ratio;
};

ScenarioConfig resolve(const Flags& f) {
  ScenarioConfig c = f.config.empty() ? ScenarioConfig{} : load_config(f.config);
  if (f.out) c.output = *f.out;
  if (f.seed) c.master_seed = *f.seed;
  if (f.solver) c.solver = parse_solver(*f.solver);
  if (f.nmax) c.n_max = *f.nmax;
  if (f.trajectories) c.n_trajectories = *f.trajectories;
  if (f.kappa_ratio) c.kappa_ratio = *f.kappa_ratio;
  c.validate();
  return c;
}

Solver fixed_solver(const Flags& f, Solver implied) {
  if (f.solver && parse_solver(*f.solver) != implied) {
    throw ValidationError("--solver " + *f.solver + " conflicts with this subcommand (" +
                          std::string(to_string(implied)) + ")");
  }
  return implied;
}

void print_metrics(const ScenarioResult& r) {
  const Metrics& m = r.metrics;
  std::printf("solver=%s subspace_dim=%zu wall=%.2fs\n", std::string(to_string(r.solver)).c_str(), r.subspace_dim,
              r.wall_seconds);
  std::printf("P=%.6g stderr_P=%.3g F_uncond=%.6g F_cond=%s leakage=%.3g Q=%.6g\n", m.success_probability,
              r.stderr_p, m.fidelity_unconditional,
              m.fidelity_conditional ? format_cell(*m.fidelity_conditional).c_str() : "undefined", m.leakage,
              m.q_expectation);
  for (const auto& w : r.warnings) std::printf("warning: %s\n", w.c_str());
}

int scenario(const Flags& f, Solver implied) {
  const ScenarioConfig c = resolve(f);
  const ScenarioResult r = run_scenario(c, fixed_solver(f, implied));
  print_metrics(r);
  std::printf("wrote %s\n", c.output.c_str());
  return 0;
}

int sweep(const Flags& f) {
  const ScenarioConfig c = resolve(f);
  const Solver s = c.solver && *c.solver != Solver::schrodinger ? *c.solver : Solver::mcwf;
  if (f.solver && parse_solver(*f.solver) == Solver::schrodinger) {
    throw ValidationError("sweep needs a dissipative solver (lindblad or mcwf)");
  }
  const SweepResult r = run_sweep(c, sweep_spec(c), s);
  std::printf("%-14s %-12s %-10s %-10s %-10s\n", "kappa/g0", "P", "stderr_P", "F_cond", "F_uncond");
  for (const SweepRow& row : r.rows) {
    std::printf("%-14.6g %-12.6g %-10.3g %-10s %-10.6g\n", row.ratio, row.p, row.stderr_p,
                row.f_cond ? format_cell(*row.f_cond).c_str() : "undefined", row.f_uncond);
  }
  std::printf("wrote %s\n", c.output.c_str());
  return 0;
}

int darkstate(const Flags& f) {
  const ScenarioConfig c = resolve(f);
  run_darkstate(c, c.output);
  std::printf("wrote %s/darkstate.csv\n", c.output.c_str());
  return 0;
}

int verify(const Flags& f) {
  const ScenarioConfig c = resolve(f);
  const VerifyReport report = run_verify(c);
  write_verify(report, c, c.output);
  for (const auto& chk : report.checks) {
    std::printf("%-5s %-28s value=%-12.4g threshold=%-10.3g %s\n", std::string(to_string(chk.status)).c_str(),
                chk.name.c_str(), chk.value, chk.threshold, chk.detail.c_str());
  }
  std::printf("%s\n", report.passed() ? "verify: all checks passed" : "verify: FAILED");
  return report.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tripod-atom two-cavity STIRAP simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output directory");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--solver", f.solver, "schrodinger, lindblad or mcwf");
  app.add_option("--nmax", f.nmax, "photon cutoff per mode");
  app.add_option("--trajectories", f.trajectories, "MCWF trajectory count");
  app.add_option("--kappa-ratio", f.kappa_ratio, "cavity decay as a multiple of g10");

  auto* evolve = app.add_subcommand("evolve", "closed-system Schrodinger evolution");
  auto* lindblad = app.add_subcommand("lindblad", "master equation");
  auto* mcwf = app.add_subcommand("mcwf", "quantum-trajectory ensemble");
  auto* sweep_cmd = app.add_subcommand("sweep", "P and F against kappa/g0");
  auto* dark = app.add_subcommand("darkstate", "mixing angles and dark-state coordinates against t");
  auto* verify_cmd = app.add_subcommand("verify", "invariant suite, writes verify.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (evolve->parsed()) return scenario(f, Solver::schrodinger);
    if (lindblad->parsed()) return scenario(f, Solver::lindblad);
    if (mcwf->parsed()) return scenario(f, Solver::mcwf);
    if (sweep_cmd->parsed()) return sweep(f);
    if (dark->parsed()) return darkstate(f);
    if (verify_cmd->parsed()) return verify(f);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IntegrationError& e) {
    std::cerr << "integration failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
