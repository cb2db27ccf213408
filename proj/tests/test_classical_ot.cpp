#include <cmath>
#include <vector>

#include "doctest.h"
#include "qw1/classical_ot.hpp"

using namespace qw1;

namespace {

double total_variation(const RVector& p, const RVector& q) { return 0.5 * (p - q).cwiseAbs().sum(); }

RVector simplex_point(int d, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RVector v(d);
  for (int i = 0; i < d; ++i) v(i) = e(rng);
  return v / v.sum();
}

}  // namespace

TEST_CASE("Hamming distance") {
  const std::vector<int> x = {0, 1, 2, 0}, y = {0, 2, 1, 0};
  CHECK(hamming(x, x) == 0);
  CHECK(hamming(x, y) == 2);
  const QuditLayout l = QuditLayout::make(2, 2);
  CHECK(hamming_index(0, 3, l) == 2);
  CHECK(hamming_index(1, 3, l) == 1);
}

TEST_CASE("distribution validation") {
  const QuditLayout one = QuditLayout::make(2, 1);
  RVector bad(2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(Distribution::make(one, bad), Error);
  bad << 1.2, -0.2;
  CHECK_THROWS_AS(Distribution::make(one, bad), Error);
  CHECK_THROWS_AS(Distribution::make(one, RVector::Constant(3, 1.0 / 3)), Error);
}

TEST_CASE("one position: transport equals total variation") {
  Rng rng(9);
  for (int d : {2, 3, 5}) {
    const QuditLayout l = QuditLayout::make(d, 1);
    const Distribution p = random_distribution(l, rng), q = random_distribution(l, rng);
    const ClassicalW1 w = classical_w1(p, q);
    CHECK(w.value == doctest::Approx(total_variation(p.weights, q.weights)).epsilon(1e-8));
    CHECK((w.coupling.rowwise().sum() - p.weights).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((w.coupling.colwise().sum().transpose() - q.weights).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("product measures: transport is the sum of coordinate distances") {
  Rng rng(10);
  for (int t = 0; t < 5; ++t) {
    const int d = 2 + t % 2;
    std::vector<RVector> pf, qf;
    double expected = 0.0;
    for (int k = 0; k < 3; ++k) {
      pf.push_back(simplex_point(d, rng));
      qf.push_back(simplex_point(d, rng));
      expected += total_variation(pf.back(), qf.back());
    }
    const Distribution p = product_distribution(pf), q = product_distribution(qf);
    CHECK(classical_w1(p, q).value == doctest::Approx(expected).epsilon(1e-7));
    CHECK(classical_w1_dual(p, q).value == doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("point masses at 00 and 11") {
  const QuditLayout l = QuditLayout::make(2, 2);
  const Distribution p = Distribution::make(l, RVector::Unit(4, 0));
  const Distribution q = Distribution::make(l, RVector::Unit(4, 3));
  CHECK(classical_w1(p, q).value == doctest::Approx(2.0).epsilon(1e-8));
  const ClassicalW1Dual dual = classical_w1_dual(p, q);
  CHECK(dual.value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(classical_lipschitz(dual.potential, l) <= 1.0 + 1e-7);
  CHECK(std::abs(dual.potential(0)) == 0.0);
  CHECK(std::abs(dual.potential(0) - dual.potential(3)) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("dual potential is 1-Lipschitz and attains the primal") {
  Rng rng(12);
  for (int t = 0; t < 10; ++t) {
    const QuditLayout l = QuditLayout::make(2 + t % 2, 2);
    const Distribution p = random_distribution(l, rng), q = random_distribution(l, rng);
    const ClassicalW1 w = classical_w1(p, q);
    const ClassicalW1Dual dual = classical_w1_dual(p, q);
    CHECK(std::abs(dual.value - w.value) < 1e-7);
    CHECK(classical_lipschitz(dual.potential, l) <= 1.0 + 1e-7);
    CHECK(dual.potential.dot(p.weights - q.weights) == doctest::Approx(dual.value).epsilon(1e-9));
  }
}

TEST_CASE("classical Lipschitz constant") {
  const QuditLayout l = QuditLayout::make(2, 2);
  RVector weight(4);
  weight << 0, 1, 1, 2;
  CHECK(classical_lipschitz(weight, l) == doctest::Approx(1.0));
  CHECK(classical_lipschitz(3.0 * weight, l) == doctest::Approx(3.0));
  CHECK(classical_lipschitz(RVector::Constant(4, 7.0), l) == 0.0);
}

TEST_CASE("entropy helpers") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(std::log(2.0)));
  const QuditLayout one = QuditLayout::make(2, 1);
  const Distribution p = Distribution::make(one, RVector::Unit(2, 0));
  const Distribution u = Distribution::make(one, RVector::Constant(2, 0.5));
  CHECK(kl_divergence(p, u) == doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(kl_divergence(u, p)));
}

TEST_CASE("Shannon continuity bound") {
  const QuditLayout one = QuditLayout::make(2, 1);
  const Distribution p = Distribution::make(one, RVector::Unit(2, 0));
  const Distribution u = Distribution::make(one, RVector::Constant(2, 0.5));
  const BoundCheck eq = shannon_continuity_bound(p, u);
  CHECK(eq.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(eq.rhs - eq.lhs) < 1e-9);

  const BoundCheck same = shannon_continuity_bound(u, u);
  CHECK(same.lhs == doctest::Approx(0.0).scale(1.0));
  CHECK(same.rhs == doctest::Approx(0.0).scale(1.0));

  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const QuditLayout l = QuditLayout::make(2 + t % 2, 1 + t % 3);
    const Distribution a = random_distribution(l, rng), b = random_distribution(l, rng);
    const BoundCheck c = shannon_continuity_bound(a, b);
    CHECK(c.lhs <= c.rhs + 1e-9);
  }
}

TEST_CASE("Marton bound reduces to Pinsker for one position") {
  Rng rng(14);
  for (int t = 0; t < 10; ++t) {
    const QuditLayout one = QuditLayout::make(3, 1);
    const Distribution p = random_distribution(one, rng);
    const RVector q = simplex_point(3, rng);
    const BoundCheck c = classical_marton_bound(p, {q});
    CHECK(c.lhs == doctest::Approx(total_variation(p.weights, q)).epsilon(1e-7));
    const double kl = kl_divergence(p, Distribution::make(one, q));
    CHECK(c.rhs == doctest::Approx(std::sqrt(0.5 * kl)).epsilon(1e-12));
    CHECK(c.lhs <= c.rhs + 1e-9);
  }
  const QuditLayout one = QuditLayout::make(2, 1);
  CHECK_THROWS_AS(classical_marton_bound(Distribution::make(one, RVector::Constant(2, 0.5)), {RVector::Unit(2, 0)}),
                  Error);
}
