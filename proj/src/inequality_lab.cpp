#include "qw1/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include <Eigen/Eigenvalues>

namespace qw1 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Eigenvalues of a Hermitian matrix, ascending.
RVector spectrum(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "Hermitian eigensolver failed");
  return es.eigenvalues();
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Equality checks are phrased as |a - b| <= tol.
CheckResult equality(std::string name, double a, double b, double tol) {
  return make_check(std::move(name), std::abs(a - b), tol);
}

double w1(const HermitianOperator& x, const SolverOptions& opt) { return w1_primal(x, opt).value; }

double lipschitz_of(const HermitianOperator& h, const SolverOptions& opt) {
  return lipschitz_constant(h, opt).value;
}

}  // namespace

CheckResult make_check(std::string name, double lhs, double rhs) {
  CheckResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  if (std::isinf(rhs) && rhs > 0 && !std::isnan(lhs)) {
    r.pass = true;
  } else {
    r.pass = r.margin >= -kCheckTolerance * (1.0 + std::abs(rhs));
  }
  return r;
}

double entropy_g(double t) {
  if (t <= 0.0) return 0.0;
  return (t + 1.0) * std::log(t + 1.0) - t * std::log(t);
}

CheckResult check_entropy_continuity(const DensityMatrix& rho, const DensityMatrix& sigma,
                                     const SolverOptions& options) {
  const double w = w1_distance(rho, sigma, W1Method::Primal, options).value;
  const QuditLayout l = rho.layout();
  const double lhs = std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma));
  const double rhs = entropy_g(w) + w * std::log(static_cast<double>(l.d) * l.d * l.n);
  CheckResult r = make_check("entropy_continuity", lhs, rhs);
  r.instance.params["w1"] = w;
  return r;
}

CheckResult check_pinsker(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double lhs = trace_norm(rho - sigma);
  const double s = relative_entropy(rho, sigma);
  CheckResult r = make_check("pinsker", lhs, std::isinf(s) ? kInf : std::sqrt(2.0 * s));
  if (std::isinf(s)) r.flags.push_back("infinite_relative_entropy");
  return r;
}

CheckResult check_marton(const DensityMatrix& rho, const std::vector<DensityMatrix>& factors,
                         const SolverOptions& options) {
  if (static_cast<int>(factors.size()) != rho.layout().n) {
    fail(ErrorCode::LengthMismatch, "Marton reference needs one factor per qudit");
  }
  DensityMatrix sigma = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) sigma = tensor_product(sigma, factors[k], std::numeric_limits<int>::max());
  if (!(sigma.layout() == rho.layout())) fail(ErrorCode::LayoutMismatch, "reference factors do not match the layout");
  const int n = rho.layout().n;
  const double s = relative_entropy(rho, sigma);
  const double w = w1_distance(rho, sigma, W1Method::Primal, options).value;
  CheckResult r = make_check("marton", w, std::isinf(s) ? kInf : std::sqrt(0.5 * n * s));
  if (std::isinf(s)) r.flags.push_back("infinite_relative_entropy");
  if (w >= 0.5 * std::sqrt(static_cast<double>(n)) * trace_norm(rho - sigma) - 1e-12) {
    r.flags.push_back("marton_beats_pinsker");
  }
  return r;
}

CheckResult concentration_mgf(const HermitianOperator& h, double t, double lipschitz) {
  const int dim = h.dim();
  const int n = h.layout().n;
  const RVector ev = spectrum(h.matrix());
  const double mean = h.trace() / dim;
  const double lhs = (t * (ev.array() - mean)).exp().sum() / dim;
  const double rhs = std::exp(n * t * t * lipschitz * lipschitz / 8.0);
  CheckResult r = make_check("concentration_mgf", lhs, rhs);
  r.instance.params["t"] = t;
  r.instance.params["lipschitz"] = lipschitz;
  return r;
}

CheckResult concentration_mgf(const HermitianOperator& h, double t, const SolverOptions& options) {
  return concentration_mgf(h, t, lipschitz_of(h, options));
}

CheckResult spectral_tail(const HermitianOperator& h, double delta, double lipschitz) {
  if (!(delta >= 0.0)) fail(ErrorCode::ParameterRange, "delta must be nonnegative");
  const int dim = h.dim();
  const int n = h.layout().n;
  const RVector ev = spectrum(h.matrix());
  const double threshold = h.trace() / dim + delta * std::sqrt(static_cast<double>(n)) * lipschitz;
  const double slack = 1e-9 * (1.0 + std::abs(threshold));
  const auto count = std::count_if(ev.begin(), ev.end(), [&](double v) { return v >= threshold - slack; });
  CheckResult r = make_check("spectral_tail", static_cast<double>(count), dim * std::exp(-2.0 * delta * delta));
  r.instance.params["delta"] = delta;
  r.instance.params["lipschitz"] = lipschitz;
  return r;
}

CheckResult spectral_tail(const HermitianOperator& h, double delta, const SolverOptions& options) {
  return spectral_tail(h, delta, lipschitz_of(h, options));
}

// --- battery ---------------------------------------------------------------

namespace {

using Results = std::vector<CheckResult>;
using ProducerFn = std::function<Results(QuditLayout, Rng&, const SolverOptions&)>;

struct Producer {
  const char* module;
  const char* id;
  std::vector<std::string> outputs;
  int min_n;
  int max_n;
  ProducerFn run;
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t instance_seed(std::uint64_t seed, const std::string& producer, QuditLayout l, int trial) {
  std::uint64_t s = splitmix(seed ^ fnv1a(producer));
  s = splitmix(s ^ static_cast<std::uint64_t>(l.d));
  s = splitmix(s ^ static_cast<std::uint64_t>(l.n));
  return splitmix(s ^ static_cast<std::uint64_t>(trial));
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

DensityMatrix random_state(QuditLayout l, Rng& rng) { return random_density(l, uniform_int(rng, 1, l.dim()), rng); }
DensityMatrix full_rank_state(QuditLayout l, Rng& rng) { return random_density(l, l.dim(), rng); }

KrausChannel random_local_channel(int d, Rng& rng) {
  return random_channel(QuditLayout::make(d, 1), uniform_int(rng, 1, d), rng);
}

HermitianOperator unit_traceless(QuditLayout l, Rng& rng) {
  HermitianOperator x = random_traceless(l, rng);
  const double t = trace_norm(x);
  return t > 0 ? (1.0 / t) * x : x;
}

std::vector<DensityMatrix> random_factors(QuditLayout l, Rng& rng) {
  std::vector<DensityMatrix> f;
  for (int k = 0; k < l.n; ++k) f.push_back(full_rank_state(QuditLayout::make(l.d, 1), rng));
  return f;
}

DensityMatrix product_of(const std::vector<DensityMatrix>& factors) {
  DensityMatrix out = factors.front();
  for (size_t k = 1; k < factors.size(); ++k) out = tensor_product(out, factors[k], std::numeric_limits<int>::max());
  return out;
}

NormSearchOptions battery_search(Rng& rng) {
  NormSearchOptions s;
  s.starts = 8;
  s.grid_points = 2000;
  s.seed = rng();
  return s;
}

// tensor-ops ----------------------------------------------------------------

Results partial_trace_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  const HermitianOperator x = random_hermitian(l, rng);
  const HermitianOperator y = random_hermitian(l, rng);
  std::normal_distribution<double> g;
  const double a = g(rng);
  const double b = g(rng);
  const int i = uniform_int(rng, 1, l.n);
  const int drop[] = {i};
  const HermitianOperator lin = partial_trace(a * x + b * y, drop) - a * partial_trace(x, drop) - b * partial_trace(y, drop);
  return {make_check("partial_trace_linearity", max_abs(lin.matrix()), 0.0),
          equality("partial_trace_trace", partial_trace(x, drop).trace(), x.trace(), 0.0)};
}

Results norm_order_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  const HermitianOperator x = random_hermitian(l, rng);
  const double t = trace_norm(x);
  const double o = operator_norm(x);
  return {make_check("operator_le_trace_norm", o, t), make_check("trace_le_dim_operator_norm", t, l.dim() * o)};
}

Results replacement_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  const HermitianOperator x = random_hermitian(l, rng);
  const int i = uniform_int(rng, 1, l.n);
  const double d2 = static_cast<double>(l.d) * l.d;
  CheckResult r = make_check("replacement_trace_bound", trace_norm(x - replace_with_maximally_mixed(x, i)),
                             2.0 * (d2 - 1.0) / d2 * trace_norm(x));
  r.instance.params["qudit"] = i;
  return {r};
}

Results entropy_change_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  // sigma differs from rho by a channel on qudit 1, so the marginals on 2..n agree.
  const DensityMatrix rho = random_state(l, rng);
  const DensityMatrix sigma(apply_on_qudit(random_local_channel(l.d, rng), rho.op(), 1));
  return {make_check("local_entropy_change", std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma)),
                     2.0 * std::log(static_cast<double>(l.d)))};
}

Results unitary_basis_checks(QuditLayout l, Rng&, const SolverOptions&) {
  const UnitaryBasis basis = clock_shift_basis(l.d);
  double dev = 0.0;
  for (size_t a = 0; a < basis.operators.size(); ++a) {
    for (size_t b = 0; b < basis.operators.size(); ++b) {
      const Complex ip = (basis.operators[a].adjoint() * basis.operators[b]).trace();
      dev = std::max(dev, std::abs(ip - Complex(a == b ? l.d : 0.0, 0.0)));
    }
  }
  return {make_check("unitary_basis_orthogonality", dev, 1e-10)};
}

// conic-solver --------------------------------------------------------------

Results embedding_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  const HermitianOperator h = random_hermitian(l, rng);
  const RVector a = spectrum(h.matrix());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(embed_hermitian(h.matrix()), Eigen::EigenvaluesOnly);
  const RVector b = es.eigenvalues();
  const double dev = std::abs(a(0) - b(0)) + std::abs(a(a.size() - 1) - b(b.size() - 1));
  const CMatrix back = unembed_hermitian(embed_hermitian(h.matrix()));
  return {make_check("embedding_spectrum", dev, 1e-10 * (1.0 + operator_norm(h))),
          make_check("embedding_roundtrip", max_abs(back - h.matrix()), 1e-12 * (1.0 + operator_norm(h)))};
}

Results solver_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator x = unit_traceless(l, rng);
  const W1Certificate a = w1_primal(x, opt);
  const W1Certificate b = w1_primal(x, opt);
  const double diff = std::abs(a.value - b.value) + std::abs(a.iterations - b.iterations);
  return {make_check("solver_duality_gap", a.gap, opt.gap_tolerance), make_check("solver_determinism", diff, 0.0)};
}

// w1-core -------------------------------------------------------------------

Results w1_duality_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator x = unit_traceless(l, rng);
  const W1Certificate p = w1_primal(x, opt);
  const W1Certificate d = w1_dual(x, opt);
  HermitianOperator sum = HermitianOperator::zero(l);
  double marg = 0.0;
  for (int i = 0; i < l.n; ++i) {
    const HermitianOperator& xi = p.decomposition[i];
    sum += xi;
    if (l.n == 1) {
      marg = std::max(marg, std::abs(xi.trace()));
    } else {
      const int drop[] = {i + 1};
      marg = std::max(marg, max_abs(partial_trace(xi, drop).matrix()));
    }
  }
  const double lip = lipschitz_of(*d.witness, opt);
  return {make_check("w1_duality", std::abs(p.value - d.value), 1e-6 * (1.0 + p.value)),
          make_check("w1_decomposition_sum", max_abs((sum - x).matrix()), 1e-7),
          make_check("w1_decomposition_marginals", marg, 1e-7),
          equality("w1_witness_value", (d.witness->matrix() * x.matrix()).trace().real(), d.value, 1e-7),
          make_check("w1_witness_lipschitz", lip, 1.0 + 1e-6)};
}

Results norm_axiom_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator x = unit_traceless(l, rng);
  const HermitianOperator y = unit_traceless(l, rng);
  const double c = std::normal_distribution<double>(0.0, 2.0)(rng);
  const double wx = w1(x, opt);
  const double wcx = w1(c * x, opt);
  const double wy = w1(y, opt);
  const double wxy = w1(x + y, opt);
  CheckResult hom = equality("w1_homogeneity", wcx, std::abs(c) * wx, 1e-6 * (1.0 + wcx));
  hom.instance.params["c"] = c;
  return {hom, make_check("w1_triangle", wxy, wx + wy)};
}

Results sandwich_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator x = unit_traceless(l, rng);
  const double w = w1(x, opt);
  const double t = trace_norm(x);
  return {make_check("trace_norm_sandwich_lower", 0.5 * t, w), make_check("trace_norm_sandwich_upper", w, 0.5 * l.n * t)};
}

Results neighboring_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix rho = random_state(l, rng);
  const int i = uniform_int(rng, 1, l.n);
  const DensityMatrix sigma(apply_on_qudit(random_local_channel(l.d, rng), rho.op(), i));
  const double w = w1_distance(rho, sigma, W1Method::Primal, opt).value;
  CheckResult r = equality("neighboring_collapse", w, 0.5 * trace_norm(rho - sigma), 1e-6);
  r.instance.params["qudit"] = i;
  if (!is_neighboring(rho, sigma)) {
    r.pass = false;
    r.flags.push_back("not_neighboring");
  }
  return {r};
}

Results symmetry_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator x = unit_traceless(l, rng);
  const double w = w1(x, opt);
  std::vector<int> perm(l.n);
  std::iota(perm.begin(), perm.end(), 1);
  for (int k = l.n - 1; k > 0; --k) std::swap(perm[k], perm[uniform_int(rng, 0, k)]);
  const int i = uniform_int(rng, 1, l.n);
  const int support[] = {i};
  const CMatrix u = embed_local(haar_unitary(l.d, rng), support, l);
  const KrausChannel phi = random_local_channel(l.d, rng);
  const double wp = w1(permute_qudits(x, perm), opt);
  const double wu = w1(conjugate(x, u), opt);
  const double wc = w1(apply_on_qudit(phi, x, i), opt);
  return {equality("permutation_invariance", wp, w, 1e-6), equality("local_unitary_invariance", wu, w, 1e-6),
          make_check("local_channel_contractivity", wc, w)};
}

Results tensorization_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix rho = random_state(l, rng);
  const DensityMatrix sigma = random_state(l, rng);
  const HermitianOperator x = rho - sigma;
  const int first[] = {1};
  std::vector<int> rest(l.n - 1);
  std::iota(rest.begin(), rest.end(), 2);
  const HermitianOperator xa = marginal(x, first);
  const HermitianOperator xb = marginal(x, rest);
  const double super = 0.5 * trace_norm(xa) + w1(xb, opt);

  const QuditLayout la = QuditLayout::make(l.d, 1);
  const QuditLayout lb = QuditLayout::make(l.d, l.n - 1);
  const DensityMatrix r1 = random_state(la, rng), s1 = random_state(la, rng);
  const DensityMatrix r2 = random_state(lb, rng), s2 = random_state(lb, rng);
  const double joint = w1_distance(tensor_product(r1, r2), tensor_product(s1, s2), W1Method::Primal, opt).value;
  const double parts = 0.5 * trace_norm(r1 - s1) + w1_distance(r2, s2, W1Method::Primal, opt).value;
  return {make_check("marginal_superadditivity", super, w1(x, opt)),
          equality("product_additivity", joint, parts, 1e-6)};
}

Results locality_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const int k = uniform_int(rng, 1, std::min(2, l.n));
  const int start = uniform_int(rng, 1, l.n - k + 1);
  const DensityMatrix rho = random_state(l, rng);
  HermitianOperator s = rho.op();
  for (int q = start; q < start + k; ++q) s = apply_on_qudit(random_local_channel(l.d, rng), s, q);
  const DensityMatrix sigma(s);
  const double w = w1_distance(rho, sigma, W1Method::Primal, opt).value;
  const double c = (static_cast<double>(l.d) * l.d - 1.0) / (static_cast<double>(l.d) * l.d);
  CheckResult a = make_check("locality_trace_bound", w, k * c * trace_norm(rho - sigma));
  CheckResult b = make_check("locality_absolute_bound", w, 2.0 * k * c);
  a.instance.params["k"] = b.instance.params["k"] = k;
  return {a, b};
}

Results diagonal_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const Distribution p = random_distribution(l, rng);
  const Distribution q = random_distribution(l, rng);
  const DensityMatrix rho(HermitianOperator::diagonal(l, p.weights));
  const DensityMatrix sigma(HermitianOperator::diagonal(l, q.weights));
  const double quantum = w1_distance(rho, sigma, W1Method::Primal, opt).value;
  return {equality("diagonal_restriction", quantum, classical_w1(p, q, opt).value, 1e-6)};
}

Results xoy_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const QuditLayout lx = QuditLayout::make(l.d, l.n - 1);
  const HermitianOperator x = unit_traceless(lx, rng);
  const HermitianOperator y = random_hermitian(QuditLayout::make(l.d, 1), rng);
  return {make_check("tensor_factor_bound", w1(tensor_product(x, y), opt), w1(x, opt) * trace_norm(y))};
}

Results epr_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix gamma = maximally_entangled(l.d);
  const DensityMatrix mixed = maximally_mixed(l);
  const double d2 = static_cast<double>(l.d) * l.d;
  const double expected = (d2 - 1.0) / d2;
  const int second[] = {2};
  const CMatrix u = embed_local(haar_unitary(l.d, rng), second, l);
  const DensityMatrix rotated(conjugate(gamma.op(), u));
  return {equality("maximally_entangled_value", w1_distance(gamma, mixed, W1Method::Primal, opt).value, expected, 1e-6),
          equality("maximally_entangled_rotated", w1_distance(rotated, mixed, W1Method::Primal, opt).value, expected, 1e-6)};
}

Results containment_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix rho = random_state(l, rng);
  const int i = uniform_int(rng, 1, l.n);
  const HermitianOperator x = rho.op() - apply_on_qudit(random_local_channel(l.d, rng), rho.op(), i);
  CheckResult r = make_check("local_channel_containment", w1(x, opt), 1.0);
  r.instance.params["qudit"] = i;
  return {r};
}

Results lipschitz_sandwich_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator h = random_hermitian(l, rng);
  const LipschitzEstimate e = lipschitz_estimate(h);
  const double exact = lipschitz_of(h, opt);
  const double d2 = static_cast<double>(l.d) * l.d;
  return {make_check("lipschitz_sandwich_lower", e.lower, exact), make_check("lipschitz_sandwich_upper", exact, e.upper),
          equality("lipschitz_sandwich_ratio", e.upper, e.lower * 2.0 * (d2 - 1.0) / d2, 1e-12 * (1.0 + e.upper))};
}

Results local_hamiltonian_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  std::vector<LocalTerm> terms;
  HermitianOperator h = HermitianOperator::zero(l);
  const QuditLayout pair = QuditLayout::make(l.d, 2);
  const QuditLayout one = QuditLayout::make(l.d, 1);
  for (int i = 1; i <= l.n; ++i) {
    const std::vector<int> s1 = {i};
    terms.push_back({s1, HermitianOperator(l, embed_local(random_hermitian(one, rng).matrix(), s1, l))});
    h += terms.back().op;
    if (i < l.n) {
      const std::vector<int> s2 = {i, i + 1};
      terms.push_back({s2, HermitianOperator(l, embed_local(random_hermitian(pair, rng).matrix(), s2, l))});
      h += terms.back().op;
    }
  }
  return {make_check("local_hamiltonian_bound", lipschitz_of(h, opt), local_hamiltonian_lipschitz_bound(terms))};
}

Results classical_lipschitz_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  RVector f(l.dim());
  std::normal_distribution<double> g;
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = g(rng);
  const double c = classical_lipschitz(f, l);
  return {equality("classical_lipschitz_recovery", lipschitz_of(HermitianOperator::diagonal(l, f), opt), c,
                   1e-6 * (1.0 + c))};
}

// classical-ot --------------------------------------------------------------

Results classical_duality_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const Distribution p = random_distribution(l, rng);
  const Distribution q = random_distribution(l, rng);
  const ClassicalW1 primal = classical_w1(p, q, opt);
  const ClassicalW1Dual dual = classical_w1_dual(p, q, opt);
  const double coupling_err = (primal.coupling.rowwise().sum() - p.weights).cwiseAbs().maxCoeff() +
                              (primal.coupling.colwise().sum().transpose() - q.weights).cwiseAbs().maxCoeff();
  return {equality("classical_duality", primal.value, dual.value, 1e-8),
          make_check("classical_coupling_marginals", coupling_err, 1e-8),
          make_check("classical_potential_lipschitz", classical_lipschitz(dual.potential, l), 1.0 + 1e-8)};
}

Results last_site_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  // Shared prefix law on the first n - 1 sites; independent conditionals for the last.
  const int prefix = l.dim() / l.d;
  const QuditLayout lp = QuditLayout::make(l.d, std::max(1, l.n - 1));
  const RVector r = l.n > 1 ? random_distribution(lp, rng).weights : RVector::Ones(1);
  const QuditLayout one = QuditLayout::make(l.d, 1);
  RVector p(l.dim()), q(l.dim());
  for (int a = 0; a < prefix; ++a) {
    p.segment(a * l.d, l.d) = r(a) * random_distribution(one, rng).weights;
    q.segment(a * l.d, l.d) = r(a) * random_distribution(one, rng).weights;
  }
  p /= p.sum();
  q /= q.sum();
  return {make_check("classical_last_site_bound", classical_w1(Distribution::make(l, p), Distribution::make(l, q), opt).value, 1.0)};
}

Results classical_product_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  std::vector<RVector> fp, fq;
  double tv = 0.0;
  const QuditLayout one = QuditLayout::make(l.d, 1);
  for (int k = 0; k < l.n; ++k) {
    fp.push_back(random_distribution(one, rng).weights);
    fq.push_back(random_distribution(one, rng).weights);
    tv += 0.5 * (fp.back() - fq.back()).cwiseAbs().sum();
  }
  const Distribution p = product_distribution(fp, std::numeric_limits<int>::max());
  const Distribution q = product_distribution(fq, std::numeric_limits<int>::max());
  return {equality("classical_product_tv", classical_w1(p, q, opt).value, tv, 1e-8)};
}

Results shannon_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const BoundCheck b = shannon_continuity_bound(random_distribution(l, rng), random_distribution(l, rng), opt);
  return {make_check("shannon_continuity", b.lhs, b.rhs)};
}

Results classical_marton_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  std::vector<RVector> factors;
  for (int k = 0; k < l.n; ++k) factors.push_back(random_distribution(QuditLayout::make(l.d, 1), rng).weights);
  const BoundCheck b = classical_marton_bound(random_distribution(l, rng), factors, opt);
  return {make_check("classical_marton", b.lhs, b.rhs)};
}

// inequality-lab ------------------------------------------------------------

Results entropy_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix rho = random_state(l, rng);
  const DensityMatrix sigma = random_state(l, rng);
  return {check_entropy_continuity(rho, sigma, opt)};
}

Results pinsker_marton_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const DensityMatrix rho = random_state(l, rng);
  const std::vector<DensityMatrix> factors = random_factors(l, rng);
  return {check_pinsker(rho, product_of(factors)), check_marton(rho, factors, opt)};
}

Results concentration_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const HermitianOperator h = random_hermitian(l, rng);
  const double lip = lipschitz_of(h, opt);
  Results out;
  for (double t : {-1.0, -0.5, 0.5, 1.0}) out.push_back(concentration_mgf(h, t, lip));
  for (double delta : {0.5, 1.0, 2.0}) out.push_back(spectral_tail(h, delta, lip));
  return out;
}

// channels ------------------------------------------------------------------

Results channel_basic_checks(QuditLayout l, Rng& rng, const SolverOptions&) {
  const KrausChannel phi = random_channel(QuditLayout::make(l.d, 1), uniform_int(rng, 2, l.d + 1), rng);
  const DensityMatrix rho = random_state(l, rng);
  const int i = uniform_int(rng, 1, l.n);
  const double tr = apply_on_qudit(phi, rho.op(), i).trace();
  const DensityMatrix omega = fixed_point(phi);
  const double residual = trace_norm(apply(phi, omega.op()) - omega.op());
  return {equality("trace_preservation", tr, 1.0, 1e-12), make_check("fixed_point_residual", residual, kFixedPointTol)};
}

Results contraction_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const KrausChannel phi = random_channel(QuditLayout::make(l.d, 1), uniform_int(rng, 2, l.d), rng);
  const ContractionReport rep = tensor_power_contraction_bounds(phi, l.n, opt, battery_search(rng));
  const EmpiricalContraction emp = empirical_contraction(tensor_power(phi, l.n), 1, rng(), opt);
  return {make_check("diamond_dominance", rep.one_to_one, rep.diamond),
          make_check("contraction_bounds_order", rep.lower, rep.upper),
          make_check("contraction_best_lower_order", rep.best_lower, rep.upper),
          make_check("contraction_empirical_upper", emp.value, rep.upper),
          make_check("contraction_at_most_one", emp.value, 1.0)};
}

Results light_cone_checks(QuditLayout l, Rng& rng, const SolverOptions& opt) {
  const Circuit c = random_brickwork(l.d, l.n, 2, rng());
  const LightCones cones = light_cone_bound(c);
  const EmpiricalContraction emp = empirical_contraction(circuit_channel(c), 1, rng(), opt);
  return {make_check("light_cone_dominance", emp.value, cones.bound)};
}

const std::vector<Producer>& producers() {
  static const std::vector<Producer> all = {
      {"tensor-ops", "partial_trace", {"partial_trace_linearity", "partial_trace_trace"}, 2, 0, partial_trace_checks},
      {"tensor-ops", "norm_order", {"operator_le_trace_norm", "trace_le_dim_operator_norm"}, 1, 0, norm_order_checks},
      {"tensor-ops", "replacement_trace_bound", {"replacement_trace_bound"}, 1, 0, replacement_checks},
      {"tensor-ops", "local_entropy_change", {"local_entropy_change"}, 2, 0, entropy_change_checks},
      {"tensor-ops", "unitary_basis", {"unitary_basis_orthogonality"}, 1, 0, unitary_basis_checks},
      {"conic-solver", "embedding", {"embedding_spectrum", "embedding_roundtrip"}, 1, 0, embedding_checks},
      {"conic-solver", "solver", {"solver_duality_gap", "solver_determinism"}, 1, 0, solver_checks},
      {"w1-core",
       "w1_duality",
       {"w1_duality", "w1_decomposition_sum", "w1_decomposition_marginals", "w1_witness_value",
        "w1_witness_lipschitz"},
       1,
       0,
       w1_duality_checks},
      {"w1-core", "norm_axioms", {"w1_homogeneity", "w1_triangle"}, 1, 0, norm_axiom_checks},
      {"w1-core", "trace_norm_sandwich", {"trace_norm_sandwich_lower", "trace_norm_sandwich_upper"}, 1, 0,
       sandwich_checks},
      {"w1-core", "neighboring", {"neighboring_collapse"}, 1, 0, neighboring_checks},
      {"w1-core",
       "symmetries",
       {"permutation_invariance", "local_unitary_invariance", "local_channel_contractivity"},
       1,
       0,
       symmetry_checks},
      {"w1-core", "tensorization", {"marginal_superadditivity", "product_additivity"}, 2, 0, tensorization_checks},
      {"w1-core", "locality", {"locality_trace_bound", "locality_absolute_bound"}, 1, 0, locality_checks},
      {"w1-core", "diagonal", {"diagonal_restriction"}, 1, 0, diagonal_checks},
      {"w1-core", "tensor_factor_bound", {"tensor_factor_bound"}, 2, 0, xoy_checks},
      {"w1-core", "maximally_entangled_value", {"maximally_entangled_value", "maximally_entangled_rotated"}, 2, 2, epr_checks},
      {"w1-core", "containment", {"local_channel_containment"}, 1, 0, containment_checks},
      {"w1-core",
       "lipschitz_sandwich",
       {"lipschitz_sandwich_lower", "lipschitz_sandwich_upper", "lipschitz_sandwich_ratio"},
       1,
       0,
       lipschitz_sandwich_checks},
      {"w1-core", "local_hamiltonian", {"local_hamiltonian_bound"}, 2, 0, local_hamiltonian_checks},
      {"w1-core", "classical_lipschitz", {"classical_lipschitz_recovery"}, 1, 0, classical_lipschitz_checks},
      {"classical-ot",
       "classical_duality",
       {"classical_duality", "classical_coupling_marginals", "classical_potential_lipschitz"},
       1,
       0,
       classical_duality_checks},
      {"classical-ot", "classical_last_site_bound", {"classical_last_site_bound"}, 1, 0, last_site_checks},
      {"classical-ot", "classical_product", {"classical_product_tv"}, 1, 0, classical_product_checks},
      {"classical-ot", "shannon", {"shannon_continuity"}, 1, 0, shannon_checks},
      {"classical-ot", "classical_marton", {"classical_marton"}, 1, 0, classical_marton_checks},
      {"inequality-lab", "entropy", {"entropy_continuity"}, 1, 0, entropy_checks},
      {"inequality-lab", "pinsker_marton", {"pinsker", "marton"}, 1, 0, pinsker_marton_checks},
      {"inequality-lab", "concentration", {"concentration_mgf", "spectral_tail"}, 1, 0, concentration_checks},
      {"channels", "channel_basics", {"trace_preservation", "fixed_point_residual"}, 1, 0, channel_basic_checks},
      {"channels",
       "contraction",
       {"diamond_dominance", "contraction_bounds_order", "contraction_best_lower_order", "contraction_empirical_upper",
        "contraction_at_most_one"},
       1,
       0,
       contraction_checks},
      {"channels", "light_cone", {"light_cone_dominance"}, 2, 0, light_cone_checks},
  };
  return all;
}

bool applicable(const Producer& p, QuditLayout l) { return l.n >= p.min_n && (p.max_n == 0 || l.n <= p.max_n); }

/// Runs one producer; exceptions become failed results for each of its outputs.
Results run_producer(const Producer& p, const InstanceDescriptor& inst, const SolverOptions& opt) {
  Results out;
  const QuditLayout l{inst.d, inst.n};
  Rng rng(inst.seed);
  try {
    out = p.run(l, rng, opt);
  } catch (const std::exception& e) {
    out.clear();
    for (const std::string& name : p.outputs) {
      CheckResult r = make_check(name, std::numeric_limits<double>::quiet_NaN(), 0.0);
      r.pass = false;
      r.flags.push_back("error");
      r.message = e.what();
      out.push_back(std::move(r));
    }
  }
  for (CheckResult& r : out) {
    std::map<std::string, double> params = std::move(r.instance.params);
    r.instance = inst;
    r.instance.params = std::move(params);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& required_checks() {
  static const std::vector<std::string> names = {
      "classical_coupling_marginals",
      "classical_duality",
      "classical_last_site_bound",
      "classical_lipschitz_recovery",
      "classical_marton",
      "classical_potential_lipschitz",
      "classical_product_tv",
      "concentration_mgf",
      "contraction_at_most_one",
      "contraction_best_lower_order",
      "contraction_bounds_order",
      "contraction_empirical_upper",
      "diagonal_restriction",
      "diamond_dominance",
      "embedding_roundtrip",
      "embedding_spectrum",
      "entropy_continuity",
      "fixed_point_residual",
      "light_cone_dominance",
      "lipschitz_sandwich_lower",
      "lipschitz_sandwich_ratio",
      "lipschitz_sandwich_upper",
      "local_channel_containment",
      "local_channel_contractivity",
      "local_entropy_change",
      "local_hamiltonian_bound",
      "local_unitary_invariance",
      "locality_absolute_bound",
      "locality_trace_bound",
      "marginal_superadditivity",
      "marton",
      "maximally_entangled_rotated",
      "maximally_entangled_value",
      "neighboring_collapse",
      "operator_le_trace_norm",
      "partial_trace_linearity",
      "partial_trace_trace",
      "permutation_invariance",
      "pinsker",
      "product_additivity",
      "replacement_trace_bound",
      "shannon_continuity",
      "solver_determinism",
      "solver_duality_gap",
      "spectral_tail",
      "tensor_factor_bound",
      "trace_le_dim_operator_norm",
      "trace_norm_sandwich_lower",
      "trace_norm_sandwich_upper",
      "trace_preservation",
      "unitary_basis_orthogonality",
      "w1_decomposition_marginals",
      "w1_decomposition_sum",
      "w1_duality",
      "w1_homogeneity",
      "w1_triangle",
      "w1_witness_lipschitz",
      "w1_witness_value",
  };
  return names;
}

const std::vector<std::string>& battery_suites() {
  static const std::vector<std::string> suites = {"all",    "tensor-ops",   "conic-solver",  "w1-core",
                                                  "classical-ot", "channels", "inequality-lab"};
  return suites;
}

BatteryReport run_battery(const BatteryOptions& options) {
  if (std::find(battery_suites().begin(), battery_suites().end(), options.suite) == battery_suites().end()) {
    fail(ErrorCode::InvalidArgument, "unknown suite '" + options.suite + "'");
  }
  if (options.trials < 0) fail(ErrorCode::InvalidArgument, "trials must be nonnegative");

  // Static coverage: every required check must have a producer.
  std::set<std::string> produced;
  for (const Producer& p : producers()) produced.insert(p.outputs.begin(), p.outputs.end());
  for (const std::string& name : required_checks()) {
    if (!produced.count(name)) fail(ErrorCode::InvalidArgument, "no producer registered for check " + name);
  }

  BatteryReport report;
  report.seed = options.seed;
  report.trials = options.trials;
  report.layouts = options.layouts;
  report.suite = options.suite;
  std::set<std::string> expected;
  std::map<std::string, int> next_index;
  for (const Producer& p : producers()) {
    if (options.suite != "all" && options.suite != p.module) continue;
    expected.insert(p.outputs.begin(), p.outputs.end());
    for (const QuditLayout& l : options.layouts) {
      QuditLayout::make(l.d, l.n, std::numeric_limits<int>::max());
      if (!applicable(p, l)) continue;
      for (int trial = 0; trial < options.trials; ++trial) {
        InstanceDescriptor inst{l.d, l.n, trial, instance_seed(options.seed, p.id, l, trial), {}};
        for (CheckResult& r : run_producer(p, inst, options.solver)) {
          r.index = next_index[r.name]++;
          report.results.push_back(std::move(r));
        }
      }
    }
  }
  std::stable_sort(report.results.begin(), report.results.end(), [](const CheckResult& a, const CheckResult& b) {
    return a.name != b.name ? a.name < b.name : a.index < b.index;
  });
  for (const CheckResult& r : report.results) {
    CheckSummary& s = report.summary[r.name];
    s.worst_margin = s.count == 0 ? r.margin : std::min(s.worst_margin, r.margin);
    if (std::isnan(r.margin)) s.worst_margin = r.margin;
    ++s.count;
    if (!r.pass) {
      ++s.failures;
      ++report.failures;
    }
  }
  if (options.trials > 0) {
    for (const std::string& name : expected) {
      if (!report.summary.count(name)) report.not_run.push_back(name);
    }
  }
  return report;
}

std::vector<CheckResult> rerun_check(const std::string& check, const InstanceDescriptor& instance,
                                     const SolverOptions& options) {
  for (const Producer& p : producers()) {
    if (std::find(p.outputs.begin(), p.outputs.end(), check) != p.outputs.end()) {
      return run_producer(p, instance, options);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown check '" + check + "'");
}

}  // namespace qw1
