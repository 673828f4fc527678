#include <doctest.h>

#include "dense_oracle.hpp"
#include "tripod/errors.hpp"
#include "tripod/hilbert.hpp"
#include "tripod/model.hpp"

using namespace tripod;

TEST_CASE("space dimension is 4 (n_max+1)^4") {
  CHECK(HilbertSpace(1).dim() == 64);
  CHECK(HilbertSpace(2).dim() == 324);
  CHECK(HilbertSpace(3).dim() == 1024);
  CHECK_THROWS_AS(HilbertSpace(0), ValidationError);
  CHECK_THROWS_AS(HilbertSpace(-2), ValidationError);
}

TEST_CASE("index ordering is atom-major then lexicographic in occupations") {
  const HilbertSpace space(2);
  const oracle::Basis ref(2);
  REQUIRE(ref.dim() == static_cast<int>(space.dim()));
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const BasisConfiguration c = space.state_of(i);
    CHECK(static_cast<int>(c.atom) == ref.states[i].atom);
    CHECK(c.occupation == ref.states[i].n);
    CHECK(space.index_of(c) == i);
  }
  CHECK(space.index_of({Level::g, {0, 0, 0, 0}}) == 0);
  CHECK(space.index_of({Level::g, {0, 0, 1, 1}}) == 4);
}

TEST_CASE("out-of-range configurations are rejected") {
  const HilbertSpace space(1);
  CHECK_THROWS_AS(space.index_of({Level::g, {2, 0, 0, 0}}), ValidationError);
  CHECK_THROWS_AS(space.index_of({Level::e, {0, -1, 0, 0}}), ValidationError);
  CHECK_THROWS_AS(space.state_of(64), ValidationError);
}

TEST_CASE("labels parse and print") {
  for (Mode m : kModes) CHECK(parse_mode(to_string(m)) == m);
  for (Level l : kLevels) CHECK(parse_level(to_string(l)) == l);
  CHECK(to_string(Mode::cav2_minus) == "2-");
  CHECK_THROWS_AS(parse_mode("3+"), ValidationError);
  CHECK_THROWS_AS(parse_level("f"), ValidationError);
}

TEST_CASE("ladder operators") {
  const HilbertSpace space(2);
  for (Mode m : kModes) {
    const SparseOperator a = annihilation(space, m);
    const SparseOperator ad = creation(space, m);
    CHECK(ad.max_abs_diff(a.adjoint()) == 0.0);
    const auto mi = static_cast<std::size_t>(m);
    for (std::size_t i = 0; i < space.dim(); ++i) {
      const BasisConfiguration c = space.state_of(i);
      const StateVector out = a.apply(space.basis_state(c));
      const int n = c.occupation[mi];
      if (n == 0) {
        CHECK(out.norm() == 0.0);
      } else {
        BasisConfiguration lower = c;
        lower.occupation[mi] -= 1;
        CHECK(std::abs(out[static_cast<Eigen::Index>(space.index_of(lower))] - cplx(std::sqrt(double(n)))) < 1e-15);
        CHECK(out.norm() == doctest::Approx(std::sqrt(double(n))));
      }
    }
    // [a, a^dag] = 1 below the cutoff.
    const SparseOperator comm = a * ad - ad * a;
    for (std::size_t i = 0; i < space.dim(); ++i) {
      const BasisConfiguration c = space.state_of(i);
      const double want = c.occupation[mi] < space.n_max() ? 1.0 : -double(space.n_max());
      CHECK(std::abs(comm.coeff(i, i) - want) < 1e-14);
    }
  }
}

TEST_CASE("number operators are diagonal occupations") {
  const HilbertSpace space(2);
  const SparseOperator n_total = total_photon_number(space);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const BasisConfiguration c = space.state_of(i);
    int sum = 0;
    for (Mode m : kModes) {
      CHECK(number_operator(space, m).coeff(i, i) == cplx(c.occupation[static_cast<std::size_t>(m)]));
      sum += c.occupation[static_cast<std::size_t>(m)];
    }
    CHECK(n_total.coeff(i, i) == cplx(sum));
  }
}

TEST_CASE("atomic transition flips only the atom") {
  const HilbertSpace space(1);
  const SparseOperator s = atomic_transition(space, Level::e, Level::g);
  CHECK(s.nnz() == space.photon_dim());
  const std::size_t from = space.index_of({Level::g, {1, 0, 1, 0}});
  const std::size_t to = space.index_of({Level::e, {1, 0, 1, 0}});
  CHECK(s.coeff(to, from) == cplx(1.0));
}

TEST_CASE("hamiltonian matches brute-force construction") {
  for (int nmax : {1, 2}) {
    CAPTURE(nmax);
    const HilbertSpace space(nmax);
    const oracle::Basis ref(nmax);
    PhysicalParams p;
    p.detuning = 0.7;
    const TripodSystem sys(space, p);
    for (double t : {-3.0, 0.0, 2.2, 4.5, 7.9}) {
      const Couplings c = sys.couplings(t);
      const oracle::Mat want = oracle::hamiltonian(ref, c.omega, c.g1, c.g2, p.detuning);
      const Eigen::MatrixXcd got = sys.hamiltonian(t).to_dense();
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
}
