#include <cmath>
#include <vector>

#include "doctest.h"
#include "qw1/w1.hpp"

using namespace qw1;

namespace {

double spread(const HermitianOperator& h) {
  const RVector ev = eigenvalues(h);
  return ev.maxCoeff() - ev.minCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator sigma_z_sum(int n) {
  const QuditLayout l = QuditLayout::make(2, n);
  CMatrix h = CMatrix::Zero(l.dim(), l.dim());
  for (int i = 1; i <= n; ++i) h += embed_local(pauli_z(), std::vector<int>{i}, l);
  return HermitianOperator(l, h);
}

}  // namespace

TEST_CASE("one qudit: W1 norm is half the trace norm") {
  Rng rng(1);
  for (int d : {2, 3}) {
    for (int t = 0; t < 5; ++t) {
      const HermitianOperator x = random_traceless(QuditLayout::make(d, 1), rng);
      const W1Certificate c = w1_norm(x, W1Method::Both);
      CHECK(c.value == doctest::Approx(0.5 * trace_norm(x)).epsilon(1e-7));
    }
  }
}

TEST_CASE("basis projectors are at Hamming distance") {
  const QuditLayout l = QuditLayout::make(2, 3);
  for (int a = 0; a < 8; a += 3) {
    for (int b = 0; b < 8; ++b) {
      const auto da = index_to_digits(a, l), db = index_to_digits(b, l);
      int h = 0;
      for (int k = 0; k < 3; ++k) h += da[k] != db[k];
      const W1Certificate c = w1_distance(basis_projector(l, da), basis_projector(l, db), W1Method::Primal);
      CHECK(std::abs(c.value - h) < 1e-6);
    }
  }
}

TEST_CASE("maximally entangled state against the maximally mixed state") {
  const W1Certificate c =
      w1_distance(maximally_entangled(2), maximally_mixed(QuditLayout::make(2, 2)), W1Method::Both);
  CHECK(std::abs(c.value - 0.75) < 1e-6);
  CHECK(c.gap < 1e-6);
}

TEST_CASE("primal and dual agree; certificates are valid") {
  Rng rng(42);
  for (int n : {2, 3}) {
    const QuditLayout l = QuditLayout::make(2, n);
    for (int t = 0; t < 4; ++t) {
      const HermitianOperator x = random_traceless(l, rng);
      const W1Certificate p = w1_primal(x);
      const W1Certificate d = w1_dual(x);
      CHECK(std::abs(p.value - d.value) <= 1e-6 * std::max(1.0, std::abs(p.value)));

      REQUIRE(static_cast<int>(p.decomposition.size()) == n);
      HermitianOperator sum = HermitianOperator::zero(l);
      double half_trace = 0.0;
      for (int i = 1; i <= n; ++i) {
        const HermitianOperator& xi = p.decomposition[i - 1];
        sum += xi;
        half_trace += 0.5 * trace_norm(xi);
        CHECK(partial_trace(xi, {i}).matrix().cwiseAbs().maxCoeff() < 1e-7);
      }
      CHECK((sum.matrix() - x.matrix()).cwiseAbs().maxCoeff() < 1e-7);
      CHECK(half_trace == doctest::Approx(p.value).epsilon(1e-7));

      REQUIRE(d.witness.has_value());
      const double tr = (d.witness->matrix() * x.matrix()).trace().real();
      CHECK(tr == doctest::Approx(d.value).epsilon(1e-7));
      CHECK(lipschitz_constant(*d.witness).value <= 1.0 + 1e-6);
      CHECK(std::abs(d.witness->trace()) < 1e-7);
    }
  }
}

TEST_CASE("w1_norm validates its input") {
  const QuditLayout l = QuditLayout::make(2, 2);
  CHECK_THROWS_AS(w1_norm(HermitianOperator::identity(l)), Error);
  CHECK(w1_norm(HermitianOperator::zero(l), W1Method::Both).value == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("product states are additive") {
  Rng rng(8);
  const QuditLayout one = QuditLayout::make(2, 1);
  for (int t = 0; t < 3; ++t) {
    const DensityMatrix r1 = random_density(one, 2, rng), s1 = random_density(one, 2, rng);
    const DensityMatrix r2 = random_density(one, 1, rng), s2 = random_density(one, 2, rng);
    const double expected = 0.5 * trace_norm(r1 - s1) + 0.5 * trace_norm(r2 - s2);
    const double got = w1_distance(tensor_product(r1, r2), tensor_product(s1, s2)).value;
    CHECK(std::abs(got - expected) < 1e-6);
  }
}

TEST_CASE("Lipschitz constant") {
  SUBCASE("one qudit equals the spectral spread") {
    Rng rng(2);
    for (int d : {2, 3, 4}) {
      const HermitianOperator h = random_hermitian(QuditLayout::make(d, 1), rng);
      CHECK(lipschitz_constant(h).value == doctest::Approx(spread(h)).epsilon(1e-7));
    }
  }
  SUBCASE("sum of sigma_z is 2 for every n") {
    for (int n : {1, 2, 3}) CHECK(std::abs(lipschitz_constant(sigma_z_sum(n)).value - 2.0) < 1e-6);
  }
  SUBCASE("separable terms give their own spreads") {
    Rng rng(3);
    const HermitianOperator a = random_hermitian(QuditLayout::make(2, 1), rng);
    const HermitianOperator b = random_hermitian(QuditLayout::make(2, 1), rng);
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const HermitianOperator h(QuditLayout::make(2, 2), kron(a.matrix(), i2) + kron(i2, b.matrix()));
    const LipschitzResult r = lipschitz_constant(h);
    REQUIRE(r.per_qudit.size() == 2);
    CHECK(r.per_qudit[0] == doctest::Approx(spread(a)).epsilon(1e-7));
    CHECK(r.per_qudit[1] == doctest::Approx(spread(b)).epsilon(1e-7));
    CHECK(r.value == doctest::Approx(std::max(spread(a), spread(b))).epsilon(1e-7));
  }
  SUBCASE("identity has constant zero") {
    CHECK(lipschitz_constant(HermitianOperator::identity(QuditLayout::make(2, 3))).value < 1e-7);
  }
  SUBCASE("the estimate brackets the exact value") {
    Rng rng(4);
    for (int t = 0; t < 5; ++t) {
      const HermitianOperator h = random_hermitian(QuditLayout::make(2, 2 + t % 2), rng);
      const double exact = lipschitz_constant(h).value;
      const LipschitzEstimate e = lipschitz_estimate(h);
      CHECK(e.lower <= exact + 1e-7);
      CHECK(exact <= e.upper + 1e-7);
    }
  }
}

TEST_CASE("neighboring detection") {
  const QuditLayout one = QuditLayout::make(2, 1);
  const DensityMatrix tau = random_density(one, 2, 6);
  const DensityMatrix k0 = basis_projector(one, std::vector<int>{0});
  const DensityMatrix k1 = basis_projector(one, std::vector<int>{1});
  CHECK(is_neighboring(tau, tau) == std::optional<int>(1));
  CHECK(is_neighboring(tensor_product(k0, tau), tensor_product(k1, tau)) == std::optional<int>(1));
  const QuditLayout two = QuditLayout::make(2, 2);
  CHECK_FALSE(is_neighboring(basis_projector(two, std::vector<int>{0, 0}), basis_projector(two, std::vector<int>{1, 1}))
                  .has_value());
}

TEST_CASE("local Hamiltonian bound dominates the Lipschitz constant") {
  const QuditLayout l = QuditLayout::make(2, 3);
  const CMatrix zz = kron(pauli_z(), pauli_z());
  std::vector<LocalTerm> terms;
  for (int i = 1; i < 3; ++i) {
    const std::vector<int> s = {i, i + 1};
    terms.push_back(LocalTerm{s, HermitianOperator(l, embed_local(zz, s, l))});
  }
  HermitianOperator h = HermitianOperator::zero(l);
  for (const auto& t : terms) h += t.op;
  const double bound = local_hamiltonian_lipschitz_bound(terms);
  CHECK(bound == doctest::Approx(4.0));
  CHECK(lipschitz_constant(h).value <= bound + 1e-7);
}
