#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tripod/sparse_operator.hpp"

namespace tripod {

/// Uniform time grid. Outputs are taken every `output_stride` steps, and the
/// final time is always an output.
struct TimeGrid {
  double t_start = -6.0;
  double t_end = 16.0;
  int n_steps = 4000;
  int output_stride = 20;

  void validate() const;
  double step() const { return (t_end - t_start) / n_steps; }
  double time_at(int k) const;
  bool is_output(int k) const { return k % output_stride == 0 || k == n_steps; }
  std::vector<double> output_times() const;
};

enum class Method { rk4, rk45 };
std::string_view to_string(Method m);
Method parse_method(std::string_view s);

struct IntegratorConfig {
  Method method = Method::rk4;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Schrodinger (and kappa = 0 trajectories) only.
  bool renormalize_each_step = false;

  void validate() const;
};

/// dy/dt = f(t, y) on a flat complex buffer.
using Rhs = std::function<void(double t, std::span<const cplx> y, std::span<cplx> dy)>;

/// Fixed-step RK4 or adaptive Dormand-Prince 5(4) over a flat complex state.
/// Owns its stage buffers; one instance per thread.
class Propagator {
 public:
  Propagator(std::size_t n, Rhs rhs, const IntegratorConfig& config, double nominal_step);

  /// Moves y from t0 to t1. RK4 takes exactly one step of size t1 - t0;
  /// RK45 substeps adaptively. Throws IntegrationError on step underflow.
  void advance(double t0, double t1, std::span<cplx> y);

  std::size_t rhs_evaluations() const { return evaluations_; }
  std::size_t rejected_steps() const { return rejected_; }

 private:
  void rk4_step(double t, double h, std::span<cplx> y);
  /// One Dormand-Prince attempt from y into out; returns the scaled error norm.
  double dopri_attempt(double t, double h, std::span<const cplx> y, std::span<cplx> out);
  void eval(double t, std::span<const cplx> y, std::span<cplx> dy);

  std::size_t n_;
  Rhs rhs_;
  IntegratorConfig config_;
  double h_guess_;
  std::vector<std::vector<cplx>> k_;
  std::vector<cplx> tmp_;
  std::vector<cplx> out_;
  std::size_t evaluations_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace tripod
