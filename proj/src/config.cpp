#include "tripod/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  require(ec == std::errc{} && ptr == end && std::isfinite(out),
          "config key '" + std::string(key) + "': not a finite number: '" + std::string(v) + "'");
  return out;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  require(ec == std::errc{} && ptr == end,
          "config key '" + std::string(key) + "': not an integer: '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(v) + "'");
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(parse_double(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::schrodinger: return "schrodinger";
    case Solver::lindblad: return "lindblad";
    case Solver::mcwf: return "mcwf";
  }
  return "?";
}

Solver parse_solver(std::string_view s) {
  if (s == "schrodinger") return Solver::schrodinger;
  if (s == "lindblad") return Solver::lindblad;
  if (s == "mcwf") return Solver::mcwf;
  throw ValidationError("unknown solver '" + std::string(s) + "' (schrodinger, lindblad, mcwf)");
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw InternalConsistencyError("number formatting failed");
  return std::string(buf, ptr);
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys{
      "omega0",  "g10",     "g20",        "tau_p",  "tau_c",   "delta_t",     "detuning",
      "kappa",   "kappa_ratio", "n_max",  "t_start", "t_end",  "n_steps",     "output_stride",
      "method",  "abs_tol", "rel_tol",    "renormalize", "solver", "n_trajectories", "master_seed",
      "sweep_ratios", "workers", "output"};
  return keys;
}

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  PhysicalParams& p = c.physics;
  if (key == "omega0") p.omega0 = parse_double(key, value);
  else if (key == "g10") p.g10 = parse_double(key, value);
  else if (key == "g20") p.g20 = parse_double(key, value);
  else if (key == "tau_p") p.tau_p = parse_double(key, value);
  else if (key == "tau_c") p.tau_c = parse_double(key, value);
  else if (key == "delta_t") p.delta_t = parse_double(key, value);
  else if (key == "detuning") p.detuning = parse_double(key, value);
  else if (key == "kappa") p.kappa = parse_double(key, value);
  else if (key == "kappa_ratio") c.kappa_ratio = parse_double(key, value);
  else if (key == "n_max") c.n_max = parse_int<int>(key, value);
  else if (key == "t_start") c.grid.t_start = parse_double(key, value);
  else if (key == "t_end") c.grid.t_end = parse_double(key, value);
  else if (key == "n_steps") c.grid.n_steps = parse_int<int>(key, value);
  else if (key == "output_stride") c.grid.output_stride = parse_int<int>(key, value);
  else if (key == "method") c.integrator.method = parse_method(value);
  else if (key == "abs_tol") c.integrator.abs_tol = parse_double(key, value);
  else if (key == "rel_tol") c.integrator.rel_tol = parse_double(key, value);
  else if (key == "renormalize") c.integrator.renormalize_each_step = parse_bool(key, value);
  else if (key == "solver") c.solver = parse_solver(value);
  else if (key == "n_trajectories") c.n_trajectories = parse_int<std::size_t>(key, value);
  else if (key == "master_seed") c.master_seed = parse_int<std::uint64_t>(key, value);
  else if (key == "sweep_ratios") c.sweep_ratios = parse_list(key, value);
  else if (key == "workers") c.workers = parse_int<unsigned>(key, value);
  else if (key == "output") c.output = std::string(value);
  else throw ValidationError("unknown config key '" + std::string(key) + "'");
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

PhysicalParams ScenarioConfig::effective_params() const {
  PhysicalParams p = physics;
  if (kappa_ratio) p.kappa = *kappa_ratio * p.g10;
  return p;
}

void ScenarioConfig::validate() const {
  if (kappa_ratio) require(std::isfinite(*kappa_ratio) && *kappa_ratio >= 0.0, "kappa_ratio must be >= 0");
  effective_params().validate();
  require(n_max >= 1 && n_max <= 6, "n_max must be in [1, 6]");
  grid.validate();
  integrator.validate();
  require(n_trajectories >= 1, "n_trajectories must be >= 1");
  if (!sweep_ratios.empty()) sweep_spec(*this).validate();
}

std::string ScenarioConfig::serialize() const {
  std::ostringstream o;
  auto num = [&](std::string_view k, double v) { o << k << '=' << format_shortest(v) << '\n'; };
  num("omega0", physics.omega0);
  num("g10", physics.g10);
  num("g20", physics.g20);
  num("tau_p", physics.tau_p);
  num("tau_c", physics.tau_c);
  num("delta_t", physics.delta_t);
  num("detuning", physics.detuning);
  num("kappa", physics.kappa);
  if (kappa_ratio) num("kappa_ratio", *kappa_ratio);
  o << "n_max=" << n_max << '\n';
  num("t_start", grid.t_start);
  num("t_end", grid.t_end);
  o << "n_steps=" << grid.n_steps << '\n';
  o << "output_stride=" << grid.output_stride << '\n';
  o << "method=" << to_string(integrator.method) << '\n';
  num("abs_tol", integrator.abs_tol);
  num("rel_tol", integrator.rel_tol);
  o << "renormalize=" << (integrator.renormalize_each_step ? "true" : "false") << '\n';
  if (solver) o << "solver=" << to_string(*solver) << '\n';
  o << "n_trajectories=" << n_trajectories << '\n';
  o << "master_seed=" << master_seed << '\n';
  if (!sweep_ratios.empty()) {
    o << "sweep_ratios=";
    for (std::size_t i = 0; i < sweep_ratios.size(); ++i) o << (i ? "," : "") << format_shortest(sweep_ratios[i]);
    o << '\n';
  }
  return o.str();
}

std::vector<double> default_sweep_ratios() {
  std::vector<double> out;
  constexpr int n = 15;
  for (int i = 0; i < n; ++i) out.push_back(std::pow(10.0, -2.0 + 2.0 * i / (n - 1)));
  out.front() = 0.01;
  out.back() = 1.0;
  return out;
}

void SweepSpec::validate() const {
  require(!ratios.empty(), "sweep needs at least one ratio");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    require(std::isfinite(ratios[i]) && ratios[i] > 0.0, "sweep ratios must be positive");
    if (i > 0) require(ratios[i] > ratios[i - 1], "sweep ratios must be strictly increasing");
  }
  require(n_trajectories >= 1, "sweep needs at least one trajectory per point");
}

SweepSpec sweep_spec(const ScenarioConfig& config) {
  SweepSpec s;
  s.ratios = config.sweep_ratios.empty() ? default_sweep_ratios() : config.sweep_ratios;
  s.n_trajectories = config.n_trajectories;
  return s;
}

}  // namespace tripod
