#include <cmath>
#include <vector>

#include "doctest.h"
#include "qw1/channels.hpp"

using namespace qw1;

namespace {

const QuditLayout kQubit = QuditLayout::make(2, 1);

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

NormSearchOptions quick_search() {
  NormSearchOptions o;
  o.starts = 8;
  o.grid_points = 2000;
  return o;
}

}  // namespace

TEST_CASE("Kraus validation") {
  CHECK_THROWS_AS(KrausChannel(kQubit, {}), Error);
  CHECK_THROWS_AS(KrausChannel(kQubit, {CMatrix::Identity(3, 3)}), Error);
  CHECK_THROWS_AS(KrausChannel(kQubit, {0.9 * CMatrix::Identity(2, 2)}), Error);
  CHECK_NOTHROW(KrausChannel(kQubit, {CMatrix::Identity(2, 2)}));
  CHECK_THROWS_AS(amplitude_damping(1.5), Error);
  CHECK_THROWS_AS(depolarizing(-0.1, maximally_mixed(kQubit)), Error);
}

TEST_CASE("amplitude damping acts on Pauli matrices as stated") {
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    const KrausChannel phi = amplitude_damping(p);
    const CMatrix id = CMatrix::Identity(2, 2);
    CHECK(max_abs(apply_matrix(phi, id) - (id + (1.0 - p) * pauli_z())) < 1e-14);
    CHECK(max_abs(apply_matrix(phi, pauli_x()) - std::sqrt(p) * pauli_x()) < 1e-14);
    CHECK(max_abs(apply_matrix(phi, pauli_y()) - std::sqrt(p) * pauli_y()) < 1e-14);
    CHECK(max_abs(apply_matrix(phi, pauli_z()) - p * pauli_z()) < 1e-14);
  }
  // p = 1 is the identity channel.
  Rng rng(3);
  const CMatrix x = random_hermitian(kQubit, rng).matrix();
  CHECK(max_abs(apply_matrix(amplitude_damping(1.0), x) - x) < 1e-14);
}

TEST_CASE("depolarizing channel") {
  Rng rng(4);
  const DensityMatrix omega = random_density(QuditLayout::make(3, 1), 3, rng);
  const HermitianOperator x = random_hermitian(QuditLayout::make(3, 1), rng);
  const double p = 0.35;
  const CMatrix expected = p * x.matrix() + (1.0 - p) * x.trace() * omega.matrix();
  CHECK(max_abs(apply(depolarizing(p, omega), x).matrix() - expected) < 1e-13);
  CHECK(max_abs(apply(depolarizing(0.0, omega), x).matrix() - x.trace() * omega.matrix()) < 1e-13);
  CHECK(depolarizing_parameter(depolarizing(p, omega)).value() == doctest::Approx(p).epsilon(1e-12));
  CHECK_FALSE(depolarizing_parameter(amplitude_damping(0.1)).has_value());
}

TEST_CASE("trace preservation, adjoint and composition on random channels") {
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const QuditLayout l = QuditLayout::make(2 + t % 2, 1);
    const KrausChannel phi = random_channel(l, 1 + t % 4, rng);
    const DensityMatrix rho = random_density(l, 1 + t % l.dim(), rng);
    CHECK(std::abs(apply(phi, rho.op()).trace() - 1.0) < 1e-12);
    if (t % 10 == 0) {
      const HermitianOperator y = random_hermitian(l, rng);
      const Complex lhs = (y.matrix() * apply_matrix(phi, rho.matrix())).trace();
      const Complex rhs = (apply_adjoint(phi, y.matrix()) * rho.matrix()).trace();
      CHECK(std::abs(lhs - rhs) < 1e-12);
      const KrausChannel psi = random_channel(l, 2, rng);
      const CMatrix composed = apply_matrix(compose(psi, phi), rho.matrix());
      CHECK(max_abs(composed - apply_matrix(psi, apply_matrix(phi, rho.matrix()))) < 1e-12);
    }
  }
}

TEST_CASE("local application and tensor powers") {
  Rng rng(6);
  const KrausChannel phi = random_channel(kQubit, 2, rng);
  const QuditLayout two = QuditLayout::make(2, 2);
  const HermitianOperator x = random_hermitian(two, rng);
  const KrausChannel id = identity_channel(kQubit);
  const KrausChannel on_second(two, [&] {
    std::vector<CMatrix> ks;
    for (const CMatrix& k : phi.kraus()) ks.push_back(kron(CMatrix::Identity(2, 2), k));
    return ks;
  }());
  CHECK(max_abs(apply_on_qudit(phi, x, 2).matrix() - apply(on_second, x).matrix()) < 1e-13);
  const KrausChannel phi2 = tensor_power(phi, 2);
  CHECK(max_abs(apply(phi2, x).matrix() - apply_on_qudit(phi, apply_on_qudit(phi, x, 1), 2).matrix()) < 1e-13);
  CHECK(max_abs(apply_on_qudit(id, x, 1).matrix() - x.matrix()) < 1e-14);
}

TEST_CASE("Choi matrix") {
  const HermitianOperator j = choi(identity_channel(kQubit));
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = expected(0, 3) = expected(3, 0) = expected(3, 3) = 1.0;
  CHECK(max_abs(j.matrix() - expected) < 1e-14);
  // Tracing out the output leaves the identity on the reference.
  Rng rng(7);
  const KrausChannel phi = random_channel(QuditLayout::make(3, 1), 3, rng);
  const HermitianOperator jp = choi(phi);
  CHECK(max_abs(partial_trace(jp, {1}).matrix() - CMatrix::Identity(3, 3)) < 1e-12);
  CHECK(eigenvalues(jp).minCoeff() > -1e-12);
}

TEST_CASE("fixed points") {
  const DensityMatrix w = fixed_point(amplitude_damping(0.1));
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK(max_abs(w.matrix() - expected) < 1e-9);

  Rng rng(8);
  const DensityMatrix omega = random_density(QuditLayout::make(3, 1), 3, rng);
  CHECK(max_abs(fixed_point(depolarizing(0.4, omega)).matrix() - omega.matrix()) < 1e-9);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel phi = random_channel(QuditLayout::make(2 + t % 2, 1), 2, rng);
    const DensityMatrix f = fixed_point(phi);
    CHECK(max_abs(apply_matrix(phi, f.matrix()) - f.matrix()) < 1e-8);
  }
}

TEST_CASE("one-to-one norm") {
  SUBCASE("amplitude damping against its replacer") {
    const double p = 0.1;
    const KrausChannel phi = amplitude_damping(p);
    const ChannelDifference f{phi, replacer(fixed_point(phi))};
    const OneToOneNorm r = one_to_one_norm(f);
    CHECK(r.grid_search);
    CHECK(std::abs(r.value - std::sqrt(p / (1.0 - p))) < 1e-6);
    CHECK(std::abs(r.value - 1.0 / 3.0) < 1e-6);
  }
  SUBCASE("depolarizing differences: p max ||rho - omega||_1") {
    // (E_p - E_0)(rho) = p (rho - omega): p for omega = I/2, 2p for pure omega and rho orthogonal to it.
    const DensityMatrix mixed = maximally_mixed(kQubit);
    const DensityMatrix pure = basis_projector(kQubit, std::vector<int>{0});
    for (double p : {0.1, 0.3, 0.8}) {
      CHECK(std::abs(one_to_one_norm({depolarizing(p, mixed), depolarizing(0.0, mixed)}).value - p) < 1e-6);
      CHECK(std::abs(one_to_one_norm({depolarizing(p, pure), depolarizing(0.0, pure)}).value - 2.0 * p) < 1e-6);
    }
  }
  SUBCASE("a difference with itself vanishes") {
    Rng rng(9);
    const KrausChannel phi = random_channel(QuditLayout::make(3, 1), 2, rng);
    CHECK(one_to_one_norm({phi, phi}, quick_search()).value < 1e-9);
  }
}

TEST_CASE("diamond norm") {
  SUBCASE("phase rotations: 2 sin(theta / 2)") {
    for (double theta : {0.3, 1.0, 2.0}) {
      CMatrix u = CMatrix::Identity(2, 2);
      u(1, 1) = std::polar(1.0, theta);
      const ChannelDifference f{unitary_channel(kQubit, u), identity_channel(kQubit)};
      CHECK(std::abs(diamond_norm(f).value - 2.0 * std::sin(theta / 2.0)) < 1e-6);
    }
  }
  SUBCASE("vanishes on a channel minus itself") {
    Rng rng(10);
    const KrausChannel phi = random_channel(kQubit, 2, rng);
    CHECK(std::abs(diamond_norm({phi, phi}).value) < 1e-6);
  }
  SUBCASE("dominates the one-to-one norm") {
    Rng rng(11);
    for (int t = 0; t < 10; ++t) {
      const QuditLayout l = QuditLayout::make(2, 1);
      const ChannelDifference f{random_channel(l, 2, rng), random_channel(l, 1 + t % 3, rng)};
      const double oto = one_to_one_norm(f, quick_search()).value;
      const double dia = diamond_norm(f).value;
      CHECK(dia >= oto - 1e-6);
      CHECK(dia <= 2.0 * oto + 1e-6);
    }
  }
}

TEST_CASE("trace contraction coefficient") {
  // Amplitude damping shrinks the Bloch ball to an ellipsoid with semi-axes sqrt(p), sqrt(p), p.
  for (double p : {0.1, 0.5}) {
    CHECK(std::abs(trace_contraction(amplitude_damping(p)).value - std::sqrt(p)) < 1e-6);
  }
  CHECK(std::abs(trace_contraction(identity_channel(QuditLayout::make(3, 1)), quick_search()).value - 1.0) < 1e-9);
}

TEST_CASE("contraction bounds of tensor powers") {
  SUBCASE("depolarizing channel is exact") {
    const KrausChannel phi = depolarizing(0.3, maximally_mixed(kQubit));
    const ContractionReport r = tensor_power_contraction_bounds(phi, 3, {}, quick_search());
    REQUIRE(r.exact.has_value());
    CHECK(std::abs(*r.exact - 0.3) < 1e-6);
    CHECK(std::abs(r.best_lower - 0.3) < 1e-6);
    CHECK(r.lower <= r.best_lower + 1e-9);
  }
  SUBCASE("amplitude damping sandwich") {
    const ContractionReport r = tensor_power_contraction_bounds(amplitude_damping(0.1), 3, {}, quick_search());
    CHECK(std::abs(r.lower - 1.0 / 6.0) < 1e-6);
    CHECK(std::abs(r.closed_form_upper - 2.0 / 3.0) < 1e-6);
    CHECK(r.lower <= r.best_lower + 1e-9);
    CHECK(r.best_lower <= r.upper + 1e-9);
    CHECK(r.upper <= r.diamond + 1e-12);
    CHECK(r.diamond <= r.closed_form_upper + 1e-6);
    CHECK_FALSE(r.exact.has_value());
    const EmpiricalContraction e = empirical_contraction(tensor_power(amplitude_damping(0.1), 3), 10, 3);
    CHECK(e.samples == 10);
    CHECK(e.value <= r.upper + 1e-6);
  }
}

TEST_CASE("empirical contraction") {
  const KrausChannel id = identity_channel(QuditLayout::make(2, 2));
  CHECK(std::abs(empirical_contraction(id, 5, 1).value - 1.0) < 1e-6);
  const KrausChannel dep = tensor_power(depolarizing(0.4, maximally_mixed(kQubit)), 2);
  const EmpiricalContraction e = empirical_contraction(dep, 20, 2);
  CHECK(e.value <= 0.4 + 1e-6);
  CHECK(e.value == empirical_contraction(dep, 20, 2).value);
}

TEST_CASE("circuits and light cones") {
  const CMatrix cnot = [] {
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
  }();
  const CMatrix h = (CMatrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);

  CHECK_THROWS_AS(Circuit::make(2, 3, {Gate{{1, 1}, cnot}}), Error);
  CHECK_THROWS_AS(Circuit::make(2, 3, {Gate{{1, 4}, cnot}}), Error);
  CHECK_THROWS_AS(Circuit::make(2, 3, {Gate{{1}, 2.0 * h}}), Error);

  const Circuit c = Circuit::make(2, 3, {Gate{{1}, h}, Gate{{1, 2}, cnot}});
  const QuditLayout l = QuditLayout::make(2, 3);
  const std::vector<int> s1 = {1}, s12 = {1, 2};
  const CMatrix expected = embed_local(cnot, s12, l) * embed_local(h, s1, l);
  CHECK(max_abs(circuit_unitary(c) - expected) < 1e-14);

  const LightCones cones = light_cone_bound(c);
  CHECK(cones.cones == std::vector<std::vector<int>>{{1, 2}, {1, 2}, {3}});
  CHECK(cones.bound == doctest::Approx(2.0 * 3.0 / 4.0 * 2.0));

  const Circuit bw = random_brickwork(2, 3, 2, 5);
  const LightCones bc = light_cone_bound(bw);
  CHECK(bc.cones[0] == std::vector<int>{1, 2, 3});
  const EmpiricalContraction e = empirical_contraction(circuit_channel(bw), 10, 6);
  CHECK(e.value <= bc.bound + 1e-6);
}
