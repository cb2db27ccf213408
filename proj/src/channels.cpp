#include "qw1/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

namespace qw1 {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::ParameterRange, std::string(what) + " must lie in [0, 1]");
}

void require_one_qudit(const KrausChannel& phi, const char* what) {
  if (phi.layout().n != 1) fail(ErrorCode::LayoutMismatch, std::string(what) + " needs a one-qudit channel");
}

/// Eigen-decomposition of a Hermitian matrix after symmetrization.
Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eig(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "Hermitian eigensolver failed");
  return es;
}

double trace_norm_matrix(const CMatrix& m) { return hermitian_eig(m).eigenvalues().cwiseAbs().sum(); }

/// sign(M) for Hermitian M; zero eigenvalues map to +1.
CMatrix sign_matrix(const CMatrix& m) {
  const auto es = hermitian_eig(m);
  const RVector s = es.eigenvalues().unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; });
  return es.eigenvectors() * s.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix adjoint_difference(const ChannelDifference& f, const CMatrix& y) {
  return apply_adjoint(f.plus, y) - apply_adjoint(f.minus, y);
}

CMatrix projector(const CVector& psi) { return psi * psi.adjoint(); }

void require_same_channel_layout(const ChannelDifference& f) {
  if (!(f.plus.layout() == f.minus.layout())) fail(ErrorCode::LayoutMismatch, "channel difference layouts differ");
}

}  // namespace

KrausChannel::KrausChannel(QuditLayout layout, std::vector<CMatrix> kraus)
    : layout_(layout), kraus_(std::move(kraus)) {
  if (kraus_.empty()) fail(ErrorCode::InvalidArgument, "channel needs at least one Kraus operator");
  const int dim = layout_.dim();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const CMatrix& k : kraus_) {
    if (k.rows() != dim || k.cols() != dim) {
      fail(ErrorCode::DimensionMismatch, "Kraus operator must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    sum += k.adjoint() * k;
  }
  const double dev = (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (dev > kTracePreservingTol) {
    fail(ErrorCode::InvalidArgument, "Kraus operators are not trace preserving (deviation " + std::to_string(dev) + ")");
  }
}

CMatrix apply_matrix(const KrausChannel& phi, const CMatrix& x) {
  if (x.rows() != phi.dim() || x.cols() != phi.dim()) fail(ErrorCode::DimensionMismatch, "channel input size");
  CMatrix out = CMatrix::Zero(x.rows(), x.cols());
  for (const CMatrix& k : phi.kraus()) out.noalias() += k * x * k.adjoint();
  return out;
}

CMatrix apply_adjoint(const KrausChannel& phi, const CMatrix& y) {
  if (y.rows() != phi.dim() || y.cols() != phi.dim()) fail(ErrorCode::DimensionMismatch, "channel output size");
  CMatrix out = CMatrix::Zero(y.rows(), y.cols());
  for (const CMatrix& k : phi.kraus()) out.noalias() += k.adjoint() * y * k;
  return out;
}

HermitianOperator apply(const KrausChannel& phi, const HermitianOperator& x) {
  if (!(x.layout() == phi.layout())) fail(ErrorCode::LayoutMismatch, "operator layout does not match the channel");
  return HermitianOperator(x.layout(), apply_matrix(phi, x.matrix()));
}

HermitianOperator apply_on_qudit(const KrausChannel& phi, const HermitianOperator& x, int i) {
  require_one_qudit(phi, "apply_on_qudit");
  const QuditLayout layout = x.layout();
  if (layout.d != phi.layout().d) fail(ErrorCode::DimensionMismatch, "local dimension mismatch");
  if (i < 1 || i > layout.n) fail(ErrorCode::IndexOutOfRange, "qudit index out of range");
  const int support[] = {i};
  CMatrix out = CMatrix::Zero(x.dim(), x.dim());
  for (const CMatrix& k : phi.kraus()) {
    const CMatrix big = embed_local(k, support, layout);
    out.noalias() += big * x.matrix() * big.adjoint();
  }
  return HermitianOperator(layout, out);
}

HermitianOperator choi(const KrausChannel& phi, int cap) {
  const int dim = phi.dim();
  const QuditLayout out_layout = QuditLayout::make(phi.layout().d, 2 * phi.layout().n, cap);
  CMatrix j = CMatrix::Zero(dim * dim, dim * dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      CMatrix e = CMatrix::Zero(dim, dim);
      e(a, b) = 1.0;
      CMatrix ref = CMatrix::Zero(dim, dim);
      ref(a, b) = 1.0;
      j += kron(apply_matrix(phi, e), ref);
    }
  }
  return HermitianOperator(out_layout, j);
}

CMatrix apply_matrix(const ChannelDifference& f, const CMatrix& x) {
  require_same_channel_layout(f);
  return apply_matrix(f.plus, x) - apply_matrix(f.minus, x);
}

HermitianOperator choi(const ChannelDifference& f, int cap) {
  require_same_channel_layout(f);
  return choi(f.plus, cap) - choi(f.minus, cap);
}

KrausChannel tensor_power(const KrausChannel& phi, int copies, int cap) {
  if (copies < 1) fail(ErrorCode::InvalidArgument, "tensor power needs at least one copy");
  const QuditLayout layout = QuditLayout::make(phi.layout().d, phi.layout().n * copies, cap);
  std::vector<CMatrix> ops = phi.kraus();
  for (int c = 1; c < copies; ++c) {
    std::vector<CMatrix> next;
    next.reserve(ops.size() * phi.kraus().size());
    for (const CMatrix& a : ops) {
      for (const CMatrix& b : phi.kraus()) next.push_back(kron(a, b));
    }
    ops = std::move(next);
  }
  return KrausChannel(layout, std::move(ops));
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (!(second.layout() == first.layout())) fail(ErrorCode::LayoutMismatch, "composed channels differ in layout");
  std::vector<CMatrix> ops;
  for (const CMatrix& a : second.kraus()) {
    for (const CMatrix& b : first.kraus()) ops.push_back(a * b);
  }
  return KrausChannel(first.layout(), std::move(ops));
}

DensityMatrix fixed_point(const KrausChannel& phi) {
  const int dim = phi.dim();
  // Column-major vec: vec(K X K^dag) = (conj(K) (x) K) vec(X).
  CMatrix transfer = CMatrix::Zero(dim * dim, dim * dim);
  for (const CMatrix& k : phi.kraus()) transfer += kron(k.conjugate(), k);
  Eigen::ComplexEigenSolver<CMatrix> es(transfer);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "transfer-matrix eigensolver failed");
  for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
    if (std::abs(es.eigenvalues()(e) - Complex(1.0, 0.0)) > kFixedPointTol) continue;
    CMatrix m = Eigen::Map<const CMatrix>(es.eigenvectors().col(e).data(), dim, dim);
    const Complex tr = m.trace();
    if (std::abs(tr) < 1e-12) continue;
    m /= tr;
    m = 0.5 * (m + m.adjoint());
    const auto eig = hermitian_eig(m);
    if (eig.eigenvalues().minCoeff() < -kFixedPointTol) continue;
    const RVector clamped = eig.eigenvalues().cwiseMax(0.0);
    m = eig.eigenvectors() * (clamped / clamped.sum()).cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
    if (trace_norm_matrix(apply_matrix(phi, m) - m) > kFixedPointTol) continue;
    return DensityMatrix(HermitianOperator(phi.layout(), m));
  }
  fail(ErrorCode::NoFixedPoint, "no positive eigenvector of the transfer matrix at eigenvalue 1");
}

KrausChannel identity_channel(QuditLayout layout) {
  return KrausChannel(layout, {CMatrix::Identity(layout.dim(), layout.dim())});
}

KrausChannel amplitude_damping(double p) {
  require_probability(p, "amplitude damping parameter");
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(p);
  CMatrix k1 = CMatrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(1.0 - p);
  return KrausChannel(QuditLayout::make(2, 1), {k0, k1});
}

KrausChannel depolarizing(double p, const DensityMatrix& omega) {
  require_probability(p, "depolarizing parameter");
  const QuditLayout layout = omega.layout();
  const int dim = layout.dim();
  std::vector<CMatrix> ops;
  if (p > 0.0) ops.push_back(std::sqrt(p) * CMatrix::Identity(dim, dim));
  const auto es = hermitian_eig(omega.matrix());
  const RVector w = omega.eigenvalues();
  for (int a = 0; a < dim; ++a) {
    if (w(a) <= 0.0 || p == 1.0) continue;
    for (int b = 0; b < dim; ++b) {
      CMatrix k = CMatrix::Zero(dim, dim);
      k.col(b) = std::sqrt((1.0 - p) * w(a)) * es.eigenvectors().col(a);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(layout, std::move(ops));
}

KrausChannel replacer(const DensityMatrix& omega) { return depolarizing(0.0, omega); }

KrausChannel unitary_channel(QuditLayout layout, const CMatrix& u) {
  const int dim = layout.dim();
  if (u.rows() != dim || u.cols() != dim) fail(ErrorCode::DimensionMismatch, "unitary size does not match the layout");
  if ((u.adjoint() * u - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kUnitaryTol) {
    fail(ErrorCode::InvalidArgument, "matrix is not unitary");
  }
  return KrausChannel(layout, {u});
}

KrausChannel random_channel(QuditLayout layout, int kraus_rank, Rng& rng) {
  if (kraus_rank < 1) fail(ErrorCode::InvalidArgument, "Kraus rank must be positive");
  const int dim = layout.dim();
  const CMatrix v = haar_unitary(dim * kraus_rank, rng).leftCols(dim);
  std::vector<CMatrix> ops;
  for (int k = 0; k < kraus_rank; ++k) ops.push_back(v.middleRows(k * dim, dim));
  return KrausChannel(layout, std::move(ops));
}

// --- norms -----------------------------------------------------------------

namespace {

/// Monotone ascent psi <- top eigenvector of F^dag(sign F(psi psi^dag)).
std::pair<double, CVector> ascend_one_to_one(const ChannelDifference& f, CVector psi, int max_steps) {
  double value = trace_norm_matrix(apply_matrix(f, projector(psi)));
  for (int step = 0; step < max_steps; ++step) {
    const CMatrix s = sign_matrix(apply_matrix(f, projector(psi)));
    const auto es = hermitian_eig(adjoint_difference(f, s));
    const CVector next = es.eigenvectors().col(es.eigenvalues().size() - 1);
    const double v = trace_norm_matrix(apply_matrix(f, projector(next)));
    if (v <= value + 1e-14) break;
    value = v;
    psi = next;
  }
  return {value, psi};
}

CVector bloch_vector_state(double theta, double phi) {
  CVector psi(2);
  psi(0) = std::cos(0.5 * theta);
  psi(1) = std::polar(std::sin(0.5 * theta), phi);
  return psi;
}

/// Fibonacci lattice on the Bloch sphere.
std::vector<CVector> bloch_grid(int points) {
  std::vector<CVector> out;
  out.reserve(points);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < points; ++k) {
    const double z = 1.0 - 2.0 * (k + 0.5) / points;
    out.push_back(bloch_vector_state(std::acos(z), golden * k));
  }
  return out;
}

std::vector<CVector> search_starts(int dim, const NormSearchOptions& options) {
  std::vector<CVector> starts;
  for (int a = 0; a < dim; ++a) starts.push_back(CVector::Unit(dim, a));
  Rng rng(options.seed);
  for (int s = 0; s < options.starts; ++s) starts.push_back(random_pure_vector(dim, rng));
  return starts;
}

}  // namespace

OneToOneNorm one_to_one_norm(const ChannelDifference& f, const NormSearchOptions& options) {
  require_same_channel_layout(f);
  const int dim = f.plus.dim();
  OneToOneNorm best;
  best.maximizer = CVector::Unit(dim, 0);
  auto consider = [&](const std::pair<double, CVector>& r) {
    if (r.first > best.value) {
      best.value = r.first;
      best.maximizer = r.second;
    }
  };
  if (dim == 2 && options.grid_points > 0) {
    best.grid_search = true;
    std::vector<std::pair<double, int>> scored;
    const std::vector<CVector> grid = bloch_grid(options.grid_points);
    for (int k = 0; k < static_cast<int>(grid.size()); ++k) {
      scored.emplace_back(trace_norm_matrix(apply_matrix(f, projector(grid[k]))), k);
    }
    const int keep = std::min<int>(8, static_cast<int>(scored.size()));
    std::partial_sort(scored.begin(), scored.begin() + keep, scored.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    for (int k = 0; k < keep; ++k) consider(ascend_one_to_one(f, grid[scored[k].second], options.max_ascent_steps));
  }
  for (const CVector& s : search_starts(dim, options)) consider(ascend_one_to_one(f, s, options.max_ascent_steps));
  return best;
}

DiamondNorm diamond_norm(const ChannelDifference& f, const SolverOptions& options, int cap) {
  require_same_channel_layout(f);
  const int d = f.plus.dim();
  const HermitianOperator j = choi(f, cap);
  DiamondNorm out;
  if (j.matrix().cwiseAbs().maxCoeff() <= 1e-14) return out;
  const int big = d * d;
  // A = I (x) sigma - W, B = I (x) sigma + W on output (x) reference; maximize Tr[J W].
  ConicProblem p;
  const int a = p.add_psd_block(2 * big);
  const int b = p.add_psd_block(2 * big);
  add_hermitian_functional(p.objective, a, j.matrix(), 0.5);
  add_hermitian_functional(p.objective, b, j.matrix(), -0.5);
  for (const CMatrix& t : traceless_hermitian_basis(d)) {
    for (const CMatrix& z : hermitian_basis(d)) {
      const CMatrix m = kron(t, z);
      LinearFunctional c;
      add_hermitian_functional(c, a, m);
      add_hermitian_functional(c, b, m);
      p.add_constraint(std::move(c), 0.0);
    }
  }
  LinearFunctional tr;
  add_hermitian_functional(tr, a, CMatrix::Identity(big, big));
  add_hermitian_functional(tr, b, CMatrix::Identity(big, big));
  p.add_constraint(std::move(tr), 2.0 * d);

  const ConicSolution s = solve(p, options);
  if (s.status != SolverStatus::Optimal) {
    fail(ErrorCode::SolverFailure, std::string("diamond-norm program: solver returned ") + status_name(s.status));
  }
  out.value = std::max(0.0, -s.primal_value);
  out.gap = s.gap;
  out.iterations = s.iterations;
  return out;
}

namespace {

/// Monotone ascent on orthogonal pairs: top and bottom eigenvectors of Phi^dag(S).
TraceContraction ascend_pair(const KrausChannel& phi, CVector psi, CVector chi, int max_steps) {
  auto value_of = [&](const CVector& u, const CVector& v) {
    return 0.5 * trace_norm_matrix(apply_matrix(phi, projector(u) - projector(v)));
  };
  double value = value_of(psi, chi);
  for (int step = 0; step < max_steps; ++step) {
    const CMatrix s = sign_matrix(apply_matrix(phi, projector(psi) - projector(chi)));
    const auto es = hermitian_eig(apply_adjoint(phi, s));
    const CVector top = es.eigenvectors().col(es.eigenvalues().size() - 1);
    const CVector bottom = es.eigenvectors().col(0);
    const double v = value_of(top, bottom);
    if (v <= value + 1e-14) break;
    value = v;
    psi = top;
    chi = bottom;
  }
  return TraceContraction{value, psi, chi};
}

}  // namespace

TraceContraction trace_contraction(const KrausChannel& phi, const NormSearchOptions& options) {
  const int dim = phi.dim();
  TraceContraction best{0.0, CVector::Unit(dim, 0), CVector::Unit(dim, std::min(1, dim - 1))};
  if (dim == 1) return best;
  auto consider = [&](const TraceContraction& r) {
    if (r.value > best.value) best = r;
  };
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      consider(ascend_pair(phi, CVector::Unit(dim, a), CVector::Unit(dim, b), options.max_ascent_steps));
    }
  }
  Rng rng(options.seed);
  for (int s = 0; s < options.starts; ++s) {
    const CMatrix u = haar_unitary(dim, rng);
    consider(ascend_pair(phi, u.col(0), u.col(1), options.max_ascent_steps));
  }
  return best;
}

std::optional<double> depolarizing_parameter(const KrausChannel& phi, double tol) {
  const std::vector<CMatrix> basis = traceless_hermitian_basis(phi.dim());
  if (basis.empty()) return std::nullopt;
  const double q = apply_matrix(phi, basis.front()).cwiseProduct(basis.front().conjugate()).sum().real();
  for (const CMatrix& t : basis) {
    if ((apply_matrix(phi, t) - q * t).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  }
  return q;
}

ContractionReport tensor_power_contraction_bounds(const KrausChannel& phi, int n, const SolverOptions& solver,
                                                  const NormSearchOptions& search, int cap) {
  require_one_qudit(phi, "tensor_power_contraction_bounds");
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be positive");
  QuditLayout::make(phi.layout().d, n, cap);
  const int d = phi.dim();

  ContractionReport r;
  r.n = n;
  r.omega = fixed_point(phi);
  const ChannelDifference diff{phi, replacer(r.omega)};

  const OneToOneNorm oto = one_to_one_norm(diff, search);
  r.one_to_one = oto.value;
  r.methods.push_back(oto.grid_search ? "one_to_one:bloch-grid+ascent" : "one_to_one:multistart-ascent");
  r.lower = 0.5 * oto.value;
  r.closed_form_upper = d * oto.value;

  const DiamondNorm dn = diamond_norm(diff, solver, cap);
  r.diamond = dn.value;
  r.methods.push_back("diamond:choi-sdp");

  // Witnesses Y (x) omega^{(x)(n-1)} with Tr Y = 0: Phi^{(x)n} maps them to
  // Phi(Y) (x) omega^{(x)(n-1)}, and both are neighboring at qudit 1, so each
  // W1 norm is half a trace norm.
  const HermitianOperator rest = n > 1 ? tensor_power(r.omega.op(), n - 1, cap) : HermitianOperator();
  auto lift = [&](const CMatrix& y) {
    const HermitianOperator local(phi.layout(), y);
    return n > 1 ? tensor_product(local, rest, cap) : local;
  };
  const CMatrix rho_star = projector(oto.maximizer);
  const CMatrix y_lower = rho_star - r.omega.matrix();
  r.lower_witness = lift(y_lower);
  r.lower_witness_value = 0.5 * trace_norm_matrix(apply_matrix(phi, y_lower));

  r.best_lower = 0.0;
  const double y_norm = trace_norm_matrix(y_lower);
  if (y_norm > 1e-12) {
    r.best_lower = r.lower_witness_value / (0.5 * y_norm);
    r.best_witness = r.lower_witness;
  }
  const TraceContraction eta = trace_contraction(phi, search);
  if (eta.value > r.best_lower || r.best_witness.dim() == 0) {
    r.best_lower = eta.value;
    r.best_witness = lift(projector(eta.first) - projector(eta.second));
  }
  r.methods.push_back("best_lower:product-witness");

  r.upper = std::min(1.0, r.diamond);
  r.methods.push_back("upper:diamond");
  r.depolarizing = depolarizing_parameter(phi);
  if (r.depolarizing && *r.depolarizing >= 0.0 && *r.depolarizing < r.upper) {
    r.upper = *r.depolarizing;
    r.methods.push_back("upper:depolarizing-structure");
  }
  r.best_lower = std::min(r.best_lower, 1.0);
  if (r.best_lower >= r.upper - 1e-9) {
    r.exact = r.upper;
    r.methods.push_back("exact");
  }
  return r;
}

EmpiricalContraction empirical_contraction(const KrausChannel& phi, int samples, std::uint64_t seed,
                                           const SolverOptions& options) {
  const QuditLayout layout = phi.layout();
  const QuditLayout local = QuditLayout::make(layout.d, 1);
  Rng rng(seed);
  std::uniform_int_distribution<int> pick_qudit(1, layout.n);
  std::uniform_int_distribution<int> pick_rank(1, layout.d);
  EmpiricalContraction out;
  for (int s = 0; s < samples; ++s) {
    const int i = pick_qudit(rng);
    const DensityMatrix tau = random_density(layout, 1 + static_cast<int>(rng() % layout.dim()), rng);
    const KrausChannel c1 = random_channel(local, pick_rank(rng), rng);
    const KrausChannel c2 = random_channel(local, pick_rank(rng), rng);
    const HermitianOperator x = apply_on_qudit(c1, tau.op(), i) - apply_on_qudit(c2, tau.op(), i);
    ++out.samples;
    const double x_w1 = 0.5 * trace_norm(x);
    if (x_w1 <= 1e-9) continue;
    const double ratio = w1_primal(apply(phi, x), options).value / x_w1;
    if (ratio > out.value) {
      out.value = ratio;
      out.best_sample = s;
      out.best_qudit = i;
    }
  }
  return out;
}

// --- circuits --------------------------------------------------------------

Circuit Circuit::make(int d, int n, std::vector<Gate> gates, int cap) {
  QuditLayout::make(d, n, cap);
  for (size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    const std::string where = "gate " + std::to_string(g);
    if (gate.support.empty()) fail(ErrorCode::InvalidArgument, where + " has empty support");
    std::set<int> seen;
    for (int q : gate.support) {
      if (q < 1 || q > n) fail(ErrorCode::IndexOutOfRange, where + " acts on qudit " + std::to_string(q));
      if (!seen.insert(q).second) fail(ErrorCode::InvalidArgument, where + " repeats qudit " + std::to_string(q));
    }
    const int dim = int_pow(d, static_cast<int>(gate.support.size()));
    if (gate.unitary.rows() != dim || gate.unitary.cols() != dim) {
      fail(ErrorCode::DimensionMismatch, where + " unitary must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if ((gate.unitary.adjoint() * gate.unitary - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kUnitaryTol) {
      fail(ErrorCode::InvalidArgument, where + " is not unitary");
    }
  }
  return Circuit{d, n, std::move(gates)};
}

CMatrix circuit_unitary(const Circuit& c) {
  const QuditLayout layout = QuditLayout::make(c.d, c.n, std::numeric_limits<int>::max());
  CMatrix u = CMatrix::Identity(layout.dim(), layout.dim());
  for (const Gate& g : c.gates) u = embed_local(g.unitary, g.support, layout) * u;
  return u;
}

KrausChannel circuit_channel(const Circuit& c) {
  const QuditLayout layout = QuditLayout::make(c.d, c.n, std::numeric_limits<int>::max());
  return KrausChannel(layout, {circuit_unitary(c)});
}

LightCones light_cone_bound(const Circuit& c) {
  LightCones out;
  std::size_t widest = 0;
  for (int i = 1; i <= c.n; ++i) {
    std::set<int> cone{i};
    for (const Gate& g : c.gates) {
      const bool touches = std::any_of(g.support.begin(), g.support.end(), [&](int q) { return cone.count(q) > 0; });
      if (touches) cone.insert(g.support.begin(), g.support.end());
    }
    widest = std::max(widest, cone.size());
    out.cones.emplace_back(cone.begin(), cone.end());
  }
  const double d2 = static_cast<double>(c.d) * c.d;
  out.bound = 2.0 * (d2 - 1.0) / d2 * static_cast<double>(widest);
  return out;
}

Circuit random_brickwork(int d, int n, int depth, std::uint64_t seed, int cap) {
  Rng rng(seed);
  std::vector<Gate> gates;
  for (int layer = 0; layer < depth; ++layer) {
    for (int q = 1 + layer % 2; q + 1 <= n; q += 2) gates.push_back(Gate{{q, q + 1}, haar_unitary(d * d, rng)});
  }
  return Circuit::make(d, n, std::move(gates), cap);
}

}  // namespace qw1
