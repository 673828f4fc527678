#include "tripod/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tripod/errors.hpp"
#include "tripod/kernels.hpp"

namespace tripod {

void TimeGrid::validate() const {
  if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw ValidationError("time window must be finite");
  if (!(t_start < t_end)) throw ValidationError("t_start must be < t_end");
  if (n_steps < 2) throw ValidationError("n_steps must be >= 2");
  if (output_stride < 1) throw ValidationError("output_stride must be >= 1");
}

double TimeGrid::time_at(int k) const {
  if (k == n_steps) return t_end;
  return t_start + (t_end - t_start) * static_cast<double>(k) / n_steps;
}

std::vector<double> TimeGrid::output_times() const {
  std::vector<double> out;
  for (int k = 0; k <= n_steps; ++k) {
    if (is_output(k)) out.push_back(time_at(k));
  }
  return out;
}

std::string_view to_string(Method m) { return m == Method::rk4 ? "rk4" : "rk45"; }

Method parse_method(std::string_view s) {
  if (s == "rk4") return Method::rk4;
  if (s == "rk45") return Method::rk45;
  throw ValidationError("unknown integration method '" + std::string(s) + "' (expected rk4 or rk45)");
}

void IntegratorConfig::validate() const {
  for (double tol : {abs_tol, rel_tol}) {
    if (!(tol > 0.0 && tol <= 1e-2)) throw ValidationError("tolerances must lie in (0, 1e-2]");
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (embedded 4th order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

Propagator::Propagator(std::size_t n, Rhs rhs, const IntegratorConfig& config, double nominal_step)
    : n_(n), rhs_(std::move(rhs)), config_(config), h_guess_(nominal_step), tmp_(n), out_(n) {
  config_.validate();
  k_.assign(config_.method == Method::rk4 ? 4 : 7, std::vector<cplx>(n));
}

void Propagator::eval(double t, std::span<const cplx> y, std::span<cplx> dy) {
  ++evaluations_;
  rhs_(t, y, dy);
}

void Propagator::advance(double t0, double t1, std::span<cplx> y) {
  if (t1 == t0) return;
  if (config_.method == Method::rk4) {
    rk4_step(t0, t1 - t0, y);
    return;
  }
  double t = t0;
  const double span_len = t1 - t0;
  const double h_min = 1e-14 * std::max({1.0, std::abs(t0), std::abs(t1), std::abs(span_len)});
  while (t < t1) {
    const double remaining = t1 - t;
    double h = std::min(h_guess_, remaining);
    for (;;) {
      if (h < h_min) throw IntegrationError("adaptive step underflow", t);
      const double err = dopri_attempt(t, h, y, out_);
      if (std::isfinite(err) && err <= 1.0) {
        std::copy(out_.begin(), out_.end(), y.begin());
        const bool last = h == remaining || t1 - (t + h) < h_min;
        t = last ? t1 : t + h;
        const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // Do not let a step clipped to an output time shrink the next guess.
        if (!(last && h < h_guess_)) h_guess_ = h * factor;
        break;
      }
      ++rejected_;
      h *= std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
    }
  }
}

void Propagator::rk4_step(double t, double h, std::span<cplx> y) {
  const auto& kt = kernels::active();
  auto& k1 = k_[0];
  auto& k2 = k_[1];
  auto& k3 = k_[2];
  auto& k4 = k_[3];
  eval(t, y, k1);
  std::copy(y.begin(), y.end(), tmp_.begin());
  kt.axpy(n_, h / 2, k1.data(), tmp_.data());
  eval(t + h / 2, tmp_, k2);
  std::copy(y.begin(), y.end(), tmp_.begin());
  kt.axpy(n_, h / 2, k2.data(), tmp_.data());
  eval(t + h / 2, tmp_, k3);
  std::copy(y.begin(), y.end(), tmp_.begin());
  kt.axpy(n_, h, k3.data(), tmp_.data());
  eval(t + h, tmp_, k4);
  kt.axpy(n_, h / 6, k1.data(), y.data());
  kt.axpy(n_, h / 3, k2.data(), y.data());
  kt.axpy(n_, h / 3, k3.data(), y.data());
  kt.axpy(n_, h / 6, k4.data(), y.data());
}

double Propagator::dopri_attempt(double t, double h, std::span<const cplx> y, std::span<cplx> out) {
  const auto& kt = kernels::active();
  auto stage = [&](std::initializer_list<std::pair<double, int>> coeffs) {
    std::copy(y.begin(), y.end(), tmp_.begin());
    for (const auto& [a, idx] : coeffs) kt.axpy(n_, h * a, k_[idx].data(), tmp_.data());
  };
  eval(t, y, k_[0]);
  stage({{a21, 0}});
  eval(t + c2 * h, tmp_, k_[1]);
  stage({{a31, 0}, {a32, 1}});
  eval(t + c3 * h, tmp_, k_[2]);
  stage({{a41, 0}, {a42, 1}, {a43, 2}});
  eval(t + c4 * h, tmp_, k_[3]);
  stage({{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}});
  eval(t + c5 * h, tmp_, k_[4]);
  stage({{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}});
  eval(t + h, tmp_, k_[5]);

  std::copy(y.begin(), y.end(), out.begin());
  kt.axpy(n_, h * b1, k_[0].data(), out.data());
  kt.axpy(n_, h * b3, k_[2].data(), out.data());
  kt.axpy(n_, h * b4, k_[3].data(), out.data());
  kt.axpy(n_, h * b5, k_[4].data(), out.data());
  kt.axpy(n_, h * b6, k_[5].data(), out.data());
  eval(t + h, out, k_[6]);

  // err = h * sum(e_i k_i), scaled per component.
  std::fill(tmp_.begin(), tmp_.end(), cplx{0.0, 0.0});
  kt.axpy(n_, h * e1, k_[0].data(), tmp_.data());
  kt.axpy(n_, h * e3, k_[2].data(), tmp_.data());
  kt.axpy(n_, h * e4, k_[3].data(), tmp_.data());
  kt.axpy(n_, h * e5, k_[4].data(), tmp_.data());
  kt.axpy(n_, h * e6, k_[5].data(), tmp_.data());
  kt.axpy(n_, h * e7, k_[6].data(), tmp_.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double scale = config_.abs_tol + config_.rel_tol * std::max(std::abs(y[i]), std::abs(out[i]));
    const double r = std::abs(tmp_[i]) / scale;
    acc += r * r;
  }
  return n_ == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(n_));
}

}  // namespace tripod
