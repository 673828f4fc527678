#pragma once
// Brute-force dense reference for small cutoffs. Builds the basis with nested
// loops and writes every matrix element from the ladder rules directly, with
// no use of the library's operator construction.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

enum { G = 0, A = 1, B = 2, E = 3 };

struct Config {
  int atom;
  std::array<int, 4> n;  // 1+, 1-, 2+, 2-
};

struct Basis {
  int nmax;
  std::vector<Config> states;

  explicit Basis(int nmax_) : nmax(nmax_) {
    for (int s = 0; s < 4; ++s)
      for (int a = 0; a <= nmax; ++a)
        for (int b = 0; b <= nmax; ++b)
          for (int c = 0; c <= nmax; ++c)
            for (int d = 0; d <= nmax; ++d) states.push_back({s, {a, b, c, d}});
  }

  int index(const Config& x) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].atom == x.atom && states[i].n == x.n) return static_cast<int>(i);
    return -1;
  }
  int dim() const { return static_cast<int>(states.size()); }
};

inline Mat hamiltonian(const Basis& basis, double omega, double g1, double g2, double delta) {
  const int d = basis.dim();
  Mat h = Mat::Zero(d, d);
  auto add = [&](int col, Config to, double amp) {
    const int row = basis.index(to);
    if (row >= 0) h(row, col) += amp;
  };
  const double g[2] = {g1, g2};
  for (int col = 0; col < d; ++col) {
    const Config s = basis.states[col];
    if (s.atom == E) h(col, col) += delta;
    if (s.atom == G) add(col, {E, s.n}, omega);
    if (s.atom == E) add(col, {G, s.n}, omega);
    for (int cav = 0; cav < 2; ++cav) {
      const int plus = 2 * cav, minus = 2 * cav + 1;
      if (s.atom == E) {
        // a_+^dag sigma_ae and a_-^dag sigma_be, hard truncation
        if (s.n[plus] < basis.nmax) {
          Config t{A, s.n};
          t.n[plus] += 1;
          add(col, t, g[cav] * std::sqrt(double(s.n[plus] + 1)));
        }
        if (s.n[minus] < basis.nmax) {
          Config t{B, s.n};
          t.n[minus] += 1;
          add(col, t, g[cav] * std::sqrt(double(s.n[minus] + 1)));
        }
      }
      if (s.atom == A && s.n[plus] > 0) {
        Config t{E, s.n};
        t.n[plus] -= 1;
        add(col, t, g[cav] * std::sqrt(double(s.n[plus])));
      }
      if (s.atom == B && s.n[minus] > 0) {
        Config t{E, s.n};
        t.n[minus] -= 1;
        add(col, t, g[cav] * std::sqrt(double(s.n[minus])));
      }
    }
  }
  return h;
}

inline Mat lowering(const Basis& basis, int mode) {
  const int d = basis.dim();
  Mat a = Mat::Zero(d, d);
  for (int col = 0; col < d; ++col) {
    Config s = basis.states[col];
    if (s.n[mode] == 0) continue;
    const double amp = std::sqrt(double(s.n[mode]));
    s.n[mode] -= 1;
    a(basis.index(s), col) = amp;
  }
  return a;
}

struct Pulses {
  double omega0 = 50, g10 = 10, g20 = 10, tau_p = 2.5, tau_c = 2.5, dt = 4.5;
  double omega(double t) const { return omega0 * std::exp(-std::pow((t - dt) / tau_p, 2)); }
  double g1(double t) const { return g10 * std::exp(-std::pow(t / tau_c, 2)); }
  double g2(double t) const { return g20 * std::exp(-std::pow((t - 2 * dt) / tau_c, 2)); }
};

/// Plain RK4 on i psi' = H psi with dense H(t).
inline Vec schrodinger(const Basis& basis, const Pulses& p, double delta, Vec psi, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  const cplx mi(0, -1);
  auto f = [&](double t, const Vec& y) -> Vec {
    return mi * (hamiltonian(basis, p.omega(t), p.g1(t), p.g2(t), delta) * y);
  };
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + (t1 - t0) * k / steps;
    const Vec k1 = f(t, psi);
    const Vec k2 = f(t + h / 2, psi + h / 2 * k1);
    const Vec k3 = f(t + h / 2, psi + h / 2 * k2);
    const Vec k4 = f(t + h, psi + h * k3);
    psi += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return psi;
}

/// Plain RK4 on the textbook master equation with dense matrices.
inline Mat lindblad(const Basis& basis, const Pulses& p, double delta, double kappa, Mat rho, double t0, double t1,
                    int steps) {
  std::vector<Mat> a;
  for (int m = 0; m < 4; ++m) a.push_back(lowering(basis, m));
  const double h = (t1 - t0) / steps;
  const cplx mi(0, -1);
  auto f = [&](double t, const Mat& r) -> Mat {
    const Mat hm = hamiltonian(basis, p.omega(t), p.g1(t), p.g2(t), delta);
    Mat out = mi * (hm * r - r * hm);
    for (const Mat& am : a) {
      const Mat n = am.adjoint() * am;
      out += kappa * (2.0 * am * r * am.adjoint() - n * r - r * n);
    }
    return out;
  };
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + (t1 - t0) * k / steps;
    const Mat k1 = f(t, rho);
    const Mat k2 = f(t + h / 2, rho + h / 2 * k1);
    const Mat k3 = f(t + h / 2, rho + h / 2 * k2);
    const Mat k4 = f(t + h, rho + h * k3);
    rho += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace oracle
