#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "qw1/inequality_lab.hpp"

using namespace qw1;

namespace {

HermitianOperator sigma_z_sum(int n) {
  const QuditLayout l = QuditLayout::make(2, n);
  CMatrix h = CMatrix::Zero(l.dim(), l.dim());
  for (int i = 1; i <= n; ++i) h += embed_local(pauli_z(), std::vector<int>{i}, l);
  return HermitianOperator(l, h);
}

bool has_flag(const CheckResult& r, const std::string& f) {
  return std::find(r.flags.begin(), r.flags.end(), f) != r.flags.end();
}

}  // namespace

TEST_CASE("check results") {
  const CheckResult ok = make_check("x", 1.0, 2.0);
  CHECK(ok.margin == 1.0);
  CHECK(ok.pass);
  CHECK(make_check("x", 1.0 + 5e-8, 1.0).pass);
  CHECK_FALSE(make_check("x", 1.0 + 1e-6, 1.0).pass);
  CHECK(make_check("x", 5.0, std::numeric_limits<double>::infinity()).pass);
}

TEST_CASE("entropy continuity: pure versus maximally mixed qubit") {
  const QuditLayout one = QuditLayout::make(2, 1);
  const CheckResult r = check_entropy_continuity(basis_projector(one, std::vector<int>{0}), maximally_mixed(one));
  // W1 = 1/2: rhs = g(1/2) + 1/2 ln 4.
  const double g = 1.5 * std::log(1.5) - 0.5 * std::log(0.5);
  CHECK(entropy_g(0.5) == doctest::Approx(g).epsilon(1e-14));
  CHECK(entropy_g(0.0) == 0.0);
  CHECK(r.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(g + 0.5 * std::log(4.0)).epsilon(1e-7));
  CHECK(std::abs(r.lhs - 0.6931) < 1e-4);
  CHECK(std::abs(r.rhs - 1.648) < 1e-3);
  CHECK(r.pass);
}

TEST_CASE("Pinsker and Marton") {
  const DensityMatrix gamma = maximally_entangled(2);
  const DensityMatrix half = maximally_mixed(QuditLayout::make(2, 1));
  const CheckResult m = check_marton(gamma, {half, half});
  CHECK(std::abs(m.lhs - 0.75) < 1e-4);
  CHECK(m.rhs == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-12));
  CHECK(std::abs(m.rhs - 1.1774) < 1e-4);
  CHECK(m.pass);

  const CheckResult p = check_pinsker(gamma, maximally_mixed(QuditLayout::make(2, 2)));
  CHECK(p.lhs == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(p.rhs == doctest::Approx(std::sqrt(4.0 * std::log(2.0))).epsilon(1e-12));
  CHECK(p.pass);

  const QuditLayout one = QuditLayout::make(2, 1);
  const DensityMatrix zero = basis_projector(one, std::vector<int>{0});
  const CheckResult inf = check_pinsker(half, zero);
  CHECK(std::isinf(inf.rhs));
  CHECK(has_flag(inf, "infinite_relative_entropy"));
  CHECK(inf.pass);
}

TEST_CASE("concentration for the sum of sigma_z") {
  const HermitianOperator h = sigma_z_sum(4);
  for (double t : {0.5, 1.0}) {
    const CheckResult r = concentration_mgf(h, t);
    CHECK(r.lhs == doctest::Approx(std::pow(std::cosh(t), 4)).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(std::exp(4.0 * t * t / 2.0)).epsilon(1e-7));
    CHECK(r.pass);
  }
  const CheckResult tail = spectral_tail(h, 1.0);
  CHECK(tail.lhs == 1.0);
  CHECK(tail.rhs == doctest::Approx(16.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(tail.pass);
}

TEST_CASE("concentration on random observables") {
  Rng rng(77);
  for (int t = 0; t < 10; ++t) {
    const HermitianOperator h = random_hermitian(QuditLayout::make(2, 1 + t % 3), rng);
    const double lip = 2.0 * std::max(1.0, static_cast<double>(t));
    CHECK(concentration_mgf(h, 0.7, lip).lhs > 0.0);
    CHECK(concentration_mgf(h, 0.7).pass);
    CHECK(spectral_tail(h, 0.5).pass);
  }
}

TEST_CASE("battery bookkeeping") {
  SUBCASE("zero trials gives an empty passing report") {
    BatteryOptions opt;
    opt.trials = 0;
    const BatteryReport r = run_battery(opt);
    CHECK(r.results.empty());
    CHECK(r.failures == 0);
  }
  SUBCASE("unknown suites are rejected") {
    BatteryOptions opt;
    opt.suite = "nonsense";
    CHECK_THROWS_AS(run_battery(opt), Error);
  }
  SUBCASE("every suite name is accepted") {
    for (const std::string& s : battery_suites()) {
      BatteryOptions opt;
      opt.suite = s;
      opt.trials = 0;
      CHECK_NOTHROW(run_battery(opt));
    }
  }
}

TEST_CASE("small battery: coverage, order, determinism and reruns") {
  BatteryOptions opt;
  opt.seed = 7;
  opt.trials = 2;
  const BatteryReport a = run_battery(opt);
  const BatteryReport b = run_battery(opt);
  CHECK(a.failures == 0);
  CHECK(a.not_run.empty());
  REQUIRE(a.results.size() == b.results.size());
  for (size_t k = 0; k < a.results.size(); ++k) {
    CHECK(a.results[k].name == b.results[k].name);
    CHECK(a.results[k].lhs == b.results[k].lhs);
    CHECK(a.results[k].rhs == b.results[k].rhs);
  }
  std::set<std::string> produced;
  for (const CheckResult& r : a.results) produced.insert(r.name);
  for (const std::string& name : required_checks()) CHECK_MESSAGE(produced.count(name) == 1, name);
  CHECK(std::is_sorted(a.results.begin(), a.results.end(), [](const CheckResult& x, const CheckResult& y) {
    return x.name != y.name ? x.name < y.name : x.index < y.index;
  }));

  // A single instance can be regenerated from its descriptor.
  const auto it = std::find_if(a.results.begin(), a.results.end(),
                               [](const CheckResult& r) { return r.name == "w1_duality" && r.instance.n == 2; });
  REQUIRE(it != a.results.end());
  const std::vector<CheckResult> again = rerun_check("w1_duality", it->instance);
  const auto same = std::find_if(again.begin(), again.end(), [](const CheckResult& r) { return r.name == "w1_duality"; });
  REQUIRE(same != again.end());
  CHECK(same->lhs == it->lhs);
  CHECK(same->rhs == it->rhs);
}

TEST_CASE("suite restricted to one module") {
  BatteryOptions opt;
  opt.suite = "classical-ot";
  opt.trials = 3;
  const BatteryReport r = run_battery(opt);
  CHECK(r.failures == 0);
  CHECK_FALSE(r.results.empty());
  const std::vector<std::string>& all = required_checks();
  for (const CheckResult& c : r.results) {
    CHECK(std::find(all.begin(), all.end(), c.name) != all.end());
    CHECK(c.name != "w1_duality");
  }
}
