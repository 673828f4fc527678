#include <doctest.h>

#include <random>
#include <vector>

#include "tripod/kernels.hpp"
#include "tripod/sparse_operator.hpp"

using namespace tripod;
namespace k = tripod::kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Reference matvec straight from triplets.
std::vector<cplx> triplet_matvec(const SparseOperator& op, cplx alpha, const std::vector<cplx>& x,
                                 std::vector<cplx> y) {
  for (const Triplet& t : op.triplets()) y[t.row] += alpha * t.value * x[t.col];
  return y;
}

}  // namespace

TEST_CASE("scalar kernels match hand-computed values") {
  const auto& s = k::scalar_table();
  std::vector<cplx> x{{1, 2}, {3, -1}};
  std::vector<cplx> y{{0, 1}, {1, 0}};
  s.axpy(2, {0, 1}, x.data(), y.data());
  CHECK(y[0] == cplx(-2, 2));
  CHECK(y[1] == cplx(2, 3));
  CHECK(s.norm_sq(2, x.data()) == doctest::Approx(15.0));
  const cplx d = s.dotc(2, x.data(), x.data());
  CHECK(d.real() == doctest::Approx(15.0));
  CHECK(d.imag() == doctest::Approx(0.0));
  s.scale(2, {0, 2}, x.data());
  CHECK(x[0] == cplx(-4, 2));
}

TEST_CASE("csr matvec agrees with triplet reference") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 29);
  std::vector<Triplet> entries;
  std::normal_distribution<double> d;
  for (int i = 0; i < 120; ++i) entries.push_back({std::size_t(pick(rng)), std::size_t(pick(rng)), {d(rng), d(rng)}});
  const SparseOperator op = SparseOperator::from_triplets(30, entries);
  const auto x = random_vec(30, rng);
  const auto y0 = random_vec(30, rng);
  const cplx alpha{0.3, -1.2};
  const auto want = triplet_matvec(op, alpha, x, y0);
  auto got = y0;
  k::scalar_table().csr_matvec_acc(op.csr(), alpha, x.data(), got.data());
  CHECK(max_diff(got, want) < 1e-13);
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  const k::KernelTable* v = k::avx2_table();
  if (v == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine; skipping");
    return;
  }
  const auto& s = k::scalar_table();
  std::mt19937_64 rng(11);
  for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 16, 31, 64, 97}) {
    CAPTURE(n);
    const auto x = random_vec(n, rng);
    const auto y0 = random_vec(n, rng);
    const cplx alpha{-0.7, 0.4};

    auto ys = y0, yv = y0;
    s.axpy(n, alpha, x.data(), ys.data());
    v->axpy(n, alpha, x.data(), yv.data());
    CHECK(max_diff(ys, yv) < 1e-14);

    auto xs = x, xv = x;
    s.scale(n, alpha, xs.data());
    v->scale(n, alpha, xv.data());
    CHECK(max_diff(xs, xv) < 1e-14);

    const double ns = s.norm_sq(n, x.data());
    CHECK(std::abs(ns - v->norm_sq(n, x.data())) <= 1e-13 * std::max(1.0, ns));
    CHECK(std::abs(s.dotc(n, x.data(), y0.data()) - v->dotc(n, x.data(), y0.data())) <= 1e-13 * std::max(1.0, ns));
  }

  // Rows with odd and even nonzero counts, empty rows included.
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> pick(0, 40);
    std::normal_distribution<double> d;
    std::vector<Triplet> entries;
    for (int i = 0; i < 7 * trial + 3; ++i) entries.push_back({std::size_t(pick(rng)), std::size_t(pick(rng)), {d(rng), d(rng)}});
    const SparseOperator op = SparseOperator::from_triplets(41, entries);
    const auto x = random_vec(41, rng);
    const auto y0 = random_vec(41, rng);
    auto ys = y0, yv = y0;
    s.csr_matvec_acc(op.csr(), {1.1, 0.2}, x.data(), ys.data());
    v->csr_matvec_acc(op.csr(), {1.1, 0.2}, x.data(), yv.data());
    CHECK(max_diff(ys, yv) < 1e-13);
  }
}

TEST_CASE("kernel selection by name") {
  const std::string before(k::active().name);
  CHECK(k::select("scalar"));
  CHECK(k::active().name == "scalar");
  CHECK_FALSE(k::select("neon"));
  if (k::avx2_table() != nullptr) {
    CHECK(k::select("avx2"));
    CHECK(k::active().name == "avx2");
  }
  CHECK(k::select(before));
}
