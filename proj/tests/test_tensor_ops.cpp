#include <cmath>
#include <vector>

#include "doctest.h"
#include "qw1/tensor_ops.hpp"

using namespace qw1;

namespace {

// Reference Kronecker product by explicit index arithmetic.
CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Reference partial trace over a single qudit q (1-based) by summing matching digits.
CMatrix trace_out(const CMatrix& x, int q, int d, int n) {
  const int dim_out = int_pow(d, n - 1);
  CMatrix out = CMatrix::Zero(dim_out, dim_out);
  const int dim = int_pow(d, n);
  auto digits = [&](int idx) {
    std::vector<int> dg(n);
    for (int k = n - 1; k >= 0; --k) {
      dg[k] = idx % d;
      idx /= d;
    }
    return dg;
  };
  auto reduce = [&](const std::vector<int>& dg) {
    int idx = 0;
    for (int k = 0; k < n; ++k)
      if (k != q - 1) idx = idx * d + dg[k];
    return idx;
  };
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const auto dr = digits(r), dc = digits(c);
      if (dr[q - 1] != dc[q - 1]) continue;
      out(reduce(dr), reduce(dc)) += x(r, c);
    }
  }
  return out;
}

double power_iteration_norm(const CMatrix& x) {
  CVector v = CVector::Ones(x.rows()) + CVector::LinSpaced(x.rows(), 0.1, 0.7);
  double lambda = 0.0;
  for (int it = 0; it < 5000; ++it) {
    CVector w = x * (x * v);
    lambda = std::sqrt(w.norm() / v.norm());
    v = w / w.norm();
  }
  return lambda;
}

}  // namespace

TEST_CASE("layout validation and the dimension cap") {
  CHECK(QuditLayout::make(2, 5).dim() == 32);
  CHECK_THROWS_AS(QuditLayout::make(2, 6), Error);
  CHECK(QuditLayout::make(2, 6, 64).dim() == 64);
  CHECK_THROWS_AS(QuditLayout::make(1, 2), Error);
  CHECK_THROWS_AS(QuditLayout::make(2, 0), Error);
}

TEST_CASE("Hermitian operators reject non-Hermitian input") {
  const QuditLayout one = QuditLayout::make(2, 1);
  CMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  try {
    HermitianOperator bad(one, m);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotHermitian);
  }
  CHECK_THROWS_AS(HermitianOperator(one, CMatrix::Identity(3, 3)), Error);
  CHECK_NOTHROW(HermitianOperator(one, pauli_y()));
}

TEST_CASE("density matrices reject negative or unnormalized operators") {
  const QuditLayout one = QuditLayout::make(2, 1);
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator(one, pauli_z())), Error);
  CHECK_THROWS_AS(DensityMatrix(HermitianOperator::identity(one)), Error);
  CHECK_NOTHROW(DensityMatrix(0.5 * HermitianOperator::identity(one)));
}

TEST_CASE("tensor product matches the index-arithmetic Kronecker product") {
  Rng rng(11);
  const QuditLayout one = QuditLayout::make(3, 1);
  const QuditLayout two = QuditLayout::make(3, 2);
  const HermitianOperator a = random_hermitian(one, rng);
  const HermitianOperator b = random_hermitian(two, rng);
  const HermitianOperator ab = tensor_product(a, b);
  CHECK(ab.layout() == QuditLayout::make(3, 3));
  CHECK((ab.matrix() - kron(a.matrix(), b.matrix())).norm() < 1e-12);
  const HermitianOperator a3 = tensor_power(a, 3);
  CHECK((a3.matrix() - kron(kron(a.matrix(), a.matrix()), a.matrix())).norm() < 1e-12);
}

TEST_CASE("partial trace agrees with the digit-summing oracle") {
  Rng rng(5);
  for (int d : {2, 3}) {
    const QuditLayout l = QuditLayout::make(d, 3);
    const HermitianOperator x = random_hermitian(l, rng);
    for (int q = 1; q <= 3; ++q) {
      const HermitianOperator t = partial_trace(x, {q});
      CHECK((t.matrix() - trace_out(x.matrix(), q, d, 3)).norm() < 1e-12);
    }
    const HermitianOperator t13 = partial_trace(x, {1, 3});
    CHECK((t13.matrix() - trace_out(trace_out(x.matrix(), 3, d, 3), 1, d, 2)).norm() < 1e-12);
    CHECK(std::abs(t13.trace() - x.trace()) < 1e-12);
  }
  const QuditLayout l = QuditLayout::make(2, 2);
  CHECK_THROWS_AS(partial_trace(HermitianOperator::identity(l), {1, 2}), Error);
  CHECK_THROWS_AS(partial_trace(HermitianOperator::identity(l), {3}), Error);
}

TEST_CASE("marginal keeps qudits in increasing order") {
  Rng rng(3);
  const DensityMatrix a = random_density(QuditLayout::make(2, 1), 2, rng);
  const DensityMatrix b = random_density(QuditLayout::make(2, 1), 2, rng);
  const DensityMatrix c = random_density(QuditLayout::make(2, 1), 2, rng);
  const DensityMatrix abc = tensor_product(tensor_product(a, b), c);
  const std::vector<int> keep = {3, 1};
  const HermitianOperator m = marginal(abc.op(), keep);
  CHECK((m.matrix() - kron(a.matrix(), c.matrix())).norm() < 1e-12);
}

TEST_CASE("embed_local, insert_identity and permute_qudits") {
  const QuditLayout l = QuditLayout::make(2, 3);
  const std::vector<int> second = {2};
  const CMatrix e = embed_local(pauli_x(), second, l);
  const CMatrix i2 = CMatrix::Identity(2, 2);
  CHECK((e - kron(kron(i2, pauli_x()), i2)).norm() < 1e-14);

  const std::vector<int> swapped = {3, 1};
  const CMatrix zx = kron(pauli_z(), pauli_x());
  CHECK((embed_local(zx, swapped, l) - kron(kron(pauli_x(), i2), pauli_z())).norm() < 1e-14);

  const HermitianOperator yz(QuditLayout::make(2, 2), kron(pauli_y(), pauli_z()));
  const HermitianOperator ins = insert_identity(yz, 2);
  CHECK((ins.matrix() - kron(kron(pauli_y(), i2), pauli_z())).norm() < 1e-14);

  const HermitianOperator xyz(l, kron(kron(pauli_x(), pauli_y()), pauli_z()));
  const std::vector<int> perm = {3, 1, 2};
  CHECK((permute_qudits(xyz, perm).matrix() - kron(kron(pauli_z(), pauli_x()), pauli_y())).norm() < 1e-14);
}

TEST_CASE("norms") {
  const QuditLayout one = QuditLayout::make(2, 1);
  CHECK(trace_norm(HermitianOperator(one, pauli_x())) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(operator_norm(HermitianOperator(one, pauli_x())) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(operator_norm(3.0 * HermitianOperator::identity(one)) == doctest::Approx(3.0).epsilon(1e-12));

  Rng rng(17);
  for (int t = 0; t < 5; ++t) {
    const HermitianOperator x = random_hermitian(QuditLayout::make(2, 3), rng);
    CHECK(std::abs(operator_norm(x) - power_iteration_norm(x.matrix())) < 1e-9);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(x.matrix());
    CHECK(std::abs(trace_norm(x) - es.eigenvalues().cwiseAbs().sum()) < 1e-10);
  }
}

TEST_CASE("entropies") {
  const QuditLayout one = QuditLayout::make(2, 1);
  const DensityMatrix zero = basis_projector(one, std::vector<int>{0});
  CHECK(von_neumann_entropy(zero) == doctest::Approx(0.0));
  const QuditLayout three = QuditLayout::make(2, 3);
  CHECK(von_neumann_entropy(maximally_mixed(three)) == doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
  RVector w(2);
  w << 0.25, 0.75;
  const DensityMatrix diag(HermitianOperator::diagonal(one, w));
  const double expected = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  CHECK(von_neumann_entropy(diag) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(von_neumann_entropy(diag) == doctest::Approx(0.5623).epsilon(1e-4));

  CHECK(relative_entropy(diag, diag) == doctest::Approx(0.0).scale(1.0));
  CHECK(relative_entropy(zero, maximally_mixed(one)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const DensityMatrix gamma = maximally_entangled(2);
  CHECK(relative_entropy(gamma, maximally_mixed(QuditLayout::make(2, 2))) ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-10));
  CHECK(std::isinf(relative_entropy(maximally_mixed(one), zero)));

  const std::vector<double> p = {0.5, 0.5, 0.0};
  CHECK(shannon_entropy(p) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("dephasing and maximally mixed replacement") {
  const DensityMatrix gamma = maximally_entangled(2);
  RVector diag(4);
  diag << 0.5, 0.0, 0.0, 0.5;
  CHECK((dephase(gamma.op()).matrix() - CMatrix(diag.cast<Complex>().asDiagonal())).norm() < 1e-14);
  const HermitianOperator once = dephase(gamma.op());
  CHECK((dephase(once).matrix() - once.matrix()).norm() == 0.0);

  Rng rng(23);
  const DensityMatrix rho = random_density(QuditLayout::make(3, 1), 3, rng);
  const DensityMatrix sigma = random_density(QuditLayout::make(3, 1), 2, rng);
  const HermitianOperator e1 = replace_with_maximally_mixed(tensor_product(rho, sigma).op(), 1);
  const CMatrix expected = kron(CMatrix::Identity(3, 3) / 3.0, sigma.matrix());
  CHECK((e1.matrix() - expected).norm() < 1e-13);

  // Tr E_i(X) = Tr X and ||X - E_i(X)||_1 <= 2 (d^2 - 1)/d^2 ||X||_1.
  for (int t = 0; t < 100; ++t) {
    const QuditLayout l = QuditLayout::make(t % 2 == 0 ? 2 : 3, 2);
    const HermitianOperator x = random_hermitian(l, rng);
    const int i = 1 + t % 2;
    const HermitianOperator ex = replace_with_maximally_mixed(x, i);
    CHECK(std::abs(ex.trace() - x.trace()) < 1e-12);
    const double d2 = static_cast<double>(l.d * l.d);
    CHECK(trace_norm(x - ex) <= 2.0 * (d2 - 1.0) / d2 * trace_norm(x) + 1e-10);
  }
}

TEST_CASE("maximally entangled state has maximally mixed marginals") {
  for (int d : {2, 3}) {
    const DensityMatrix g = maximally_entangled(d);
    CHECK((partial_trace(g.op(), {1}).matrix() - CMatrix::Identity(d, d) / d).norm() < 1e-14);
    CHECK((partial_trace(g.op(), {2}).matrix() - CMatrix::Identity(d, d) / d).norm() < 1e-14);
    CHECK(von_neumann_entropy(g) == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("clock-and-shift basis is orthogonal and unitary") {
  for (int d : {2, 3, 4}) {
    const UnitaryBasis b = clock_shift_basis(d);
    REQUIRE(static_cast<int>(b.operators.size()) == d * d);
    CHECK((b.operators[0] - CMatrix::Identity(d, d)).norm() < 1e-14);
    for (int i = 0; i < d * d; ++i) {
      CHECK((b.operators[i].adjoint() * b.operators[i] - CMatrix::Identity(d, d)).norm() < 1e-12);
      for (int j = 0; j < d * d; ++j) {
        const Complex ip = (b.operators[i].adjoint() * b.operators[j]).trace();
        CHECK(std::abs(ip - Complex(i == j ? d : 0, 0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("random generation") {
  const QuditLayout l = QuditLayout::make(2, 2);
  const DensityMatrix pure = random_density(l, 1, 7);
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).scale(1.0));
  CHECK((random_density(l, 3, 99).matrix() - random_density(l, 3, 99).matrix()).norm() == 0.0);
  CHECK(std::abs(random_traceless(l, 4).trace()) < 1e-12);

  // Full-rank samples average to the maximally mixed state.
  const QuditLayout one = QuditLayout::make(2, 1);
  Rng rng(2024);
  CMatrix mean = CMatrix::Zero(2, 2);
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) mean += random_density(one, 2, rng).matrix();
  mean /= samples;
  CHECK((mean - CMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() < 5e-2);

  const CMatrix u = haar_unitary(4, 8);
  CHECK((u.adjoint() * u - CMatrix::Identity(4, 4)).norm() < 1e-12);
}

TEST_CASE("basis index helpers") {
  const QuditLayout l = QuditLayout::make(3, 4, 81);
  const std::vector<int> digits = {0, 1, 2, 0};
  const int idx = digits_to_index(digits, l);
  CHECK(idx == 0 * 27 + 1 * 9 + 2 * 3 + 0);
  CHECK(index_to_digits(idx, l) == digits);
  const DensityMatrix p = basis_projector(QuditLayout::make(2, 2), std::vector<int>{1, 0});
  CHECK(std::abs(p.matrix()(2, 2) - Complex(1.0, 0.0)) < 1e-15);
}
