#include "doctest.h"

#include <cmath>

#include "qw1/conic_solver.hpp"

using namespace qw1;

TEST_CASE("one-dimensional LP") {
  // min x s.t. x - s = 3, x, s >= 0
  ConicProblem p;
  p.add_lp(2);
  p.objective.add_lp(0, 1.0);
  LinearFunctional f;
  f.add_lp(0, 1.0);
  f.add_lp(1, -1.0);
  p.add_constraint(f, 3.0);
  const ConicSolution s = solve(p);
  CHECK(s.status == SolverStatus::Optimal);
  CHECK(s.primal_value == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(s.dual_value == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("trace minimization over X >= I") {
  // X = I + Z, Z >= 0: min Tr Z + 2 with Z free PSD -> 2. Written with X - Z = I.
  ConicProblem p;
  const int x = p.add_psd_block(2);
  const int z = p.add_psd_block(2);
  p.objective.add_psd(x, 0, 0, 1.0);
  p.objective.add_psd(x, 1, 1, 1.0);
  for (int r = 0; r < 2; ++r) {
    for (int c = r; c < 2; ++c) {
      LinearFunctional f;
      f.add_psd(x, r, c, 1.0);
      f.add_psd(z, r, c, -1.0);
      p.add_constraint(f, r == c ? 1.0 : 0.0);
    }
  }
  const ConicSolution s = solve(p);
  CHECK(s.status == SolverStatus::Optimal);
  CHECK(s.primal_value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("operator norm of sigma_x through the dual form") {
  // max -t s.t. t I - sx >= 0, t I + sx >= 0. Primal: min <sx, A> - <sx, B>
  // s.t. Tr A + Tr B = 1, A, B >= 0; value -1 = -||sx||.
  ConicProblem p;
  const int a = p.add_psd_block(2);
  const int b = p.add_psd_block(2);
  p.objective.add_psd(a, 0, 1, 1.0);
  p.objective.add_psd(b, 0, 1, -1.0);
  LinearFunctional f;
  for (int k : {a, b}) {
    f.add_psd(k, 0, 0, 1.0);
    f.add_psd(k, 1, 1, 1.0);
  }
  p.add_constraint(f, 1.0);
  const ConicSolution s = solve(p);
  CHECK(s.status == SolverStatus::Optimal);
  CHECK(-s.dual_value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("free variables and dependent rows") {
  // min u + x0 s.t. u - x0 = -1 (twice), x0 >= 0 with u free -> -1 at x0 = 0.
  ConicProblem p;
  p.add_lp(1);
  p.add_free(1);
  p.objective.add_lp(0, 2.0);
  p.objective.add_free(0, 1.0);
  for (int rep = 0; rep < 2; ++rep) {
    LinearFunctional f;
    f.add_free(0, 1.0);
    f.add_lp(0, -1.0);
    p.add_constraint(f, -1.0);
  }
  const ConicSolution s = solve(p);
  CHECK(s.status == SolverStatus::Optimal);
  CHECK(s.removed_constraints == 1);
  CHECK(s.primal_value == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("inconsistent rows are rejected") {
  ConicProblem p;
  p.add_lp(1);
  LinearFunctional f;
  f.add_lp(0, 1.0);
  p.add_constraint(f, 1.0);
  p.add_constraint(f, 2.0);
  CHECK(solve(p).status == SolverStatus::NumericalFailure);
}

TEST_CASE("embedding") {
  CMatrix sy(2, 2);
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  const RMatrix e = embed_hermitian(sy);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(e);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0));
  CHECK((unembed_hermitian(e) - sy).norm() < 1e-15);
  CHECK((embed_hermitian(CMatrix::Identity(2, 2)) - RMatrix::Identity(4, 4)).norm() == 0.0);

  Rng rng(7);
  const QuditLayout l{2, 2};
  for (int t = 0; t < 20; ++t) {
    const CMatrix x = random_hermitian(l, rng).matrix();
    const CMatrix y = random_hermitian(l, rng).matrix();
    const double lhs = (embed_hermitian(x) * embed_hermitian(y)).trace();
    CHECK(lhs == doctest::Approx(2.0 * (x * y).trace().real()).epsilon(1e-12));
    // The functional helper reproduces Re Tr[C X] on the embedded block.
    LinearFunctional f;
    add_hermitian_functional(f, 0, x);
    const RMatrix ey = embed_hermitian(y);
    double v = 0.0;
    for (const auto& s : f.psd) v += (s.row == s.col ? 1.0 : 2.0) * s.value * ey(s.row, s.col);
    CHECK(v == doctest::Approx((x * y).trace().real()).epsilon(1e-12));
  }
}

TEST_CASE("Hermitian bases are orthonormal") {
  for (int dim : {2, 3, 4}) {
    const auto full = hermitian_basis(dim);
    const auto tl = traceless_hermitian_basis(dim);
    CHECK(static_cast<int>(full.size()) == dim * dim);
    CHECK(static_cast<int>(tl.size()) == dim * dim - 1);
    for (const auto* basis : {&full, &tl}) {
      for (size_t i = 0; i < basis->size(); ++i) {
        for (size_t j = 0; j < basis->size(); ++j) {
          const Complex ip = ((*basis)[i] * (*basis)[j]).trace();
          CHECK(std::abs(ip - Complex(i == j ? 1.0 : 0.0, 0.0)) < 1e-12);
        }
      }
    }
    for (const auto& g : tl) CHECK(std::abs(g.trace()) < 1e-12);
  }
}

TEST_CASE("determinism") {
  ConicProblem p;
  const int a = p.add_psd_block(3);
  Rng rng(3);
  const RMatrix h = random_hermitian(QuditLayout{3, 1}, rng).matrix().real();
  for (int r = 0; r < 3; ++r)
    for (int c = r; c < 3; ++c) p.objective.add_psd(a, r, c, h(r, c));
  LinearFunctional f;
  for (int r = 0; r < 3; ++r) f.add_psd(a, r, r, 1.0);
  p.add_constraint(f, 1.0);
  const auto s1 = solve(p);
  const auto s2 = solve(p);
  CHECK(s1.status == SolverStatus::Optimal);
  CHECK(s1.iterations == s2.iterations);
  CHECK(s1.primal_value == s2.primal_value);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(RMatrix(h.selfadjointView<Eigen::Upper>()));
  CHECK(s1.primal_value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-7));
}
