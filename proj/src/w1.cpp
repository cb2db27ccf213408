#include "qw1/w1.hpp"

#include <algorithm>
#include <cmath>

namespace qw1 {

namespace {

constexpr double kDualityTolerance = 1e-6;
constexpr double kNeighborTolerance = 1e-9;
constexpr double kSupportTolerance = 1e-9;

void require_traceless(const HermitianOperator& x) {
  if (!x.is_traceless()) {
    fail(ErrorCode::NotTraceless, "W1 norm needs a traceless operator (trace " + std::to_string(x.trace()) + ")");
  }
}

void require_optimal(const ConicSolution& s, const char* what) {
  if (s.status != SolverStatus::Optimal) {
    fail(ErrorCode::SolverFailure, std::string(what) + ": solver returned " + status_name(s.status) +
                                       (s.message.empty() ? "" : " (" + s.message + ")"));
  }
}

// Hermitian basis of the operators on the n - 1 qudits other than i, lifted
// to I^(i) (x) B. For n = 1 the single element is the identity.
std::vector<CMatrix> marginal_functionals(QuditLayout layout, int i) {
  const int rest = layout.dim() / layout.d;
  std::vector<CMatrix> out;
  for (const CMatrix& b : hermitian_basis(rest)) out.push_back(identity_on_qudit(b, i, layout));
  return out;
}

}  // namespace

const char* method_name(W1Method method) {
  switch (method) {
    case W1Method::Primal: return "primal";
    case W1Method::Dual: return "dual";
    case W1Method::Both: return "both";
  }
  return "unknown";
}

CMatrix identity_on_qudit(const CMatrix& rest, int i, QuditLayout layout) {
  if (i < 1 || i > layout.n) fail(ErrorCode::IndexOutOfRange, "qudit index out of range");
  if (layout.n == 1) {
    if (rest.rows() != 1 || rest.cols() != 1) fail(ErrorCode::DimensionMismatch, "shift on zero qudits must be 1x1");
    return rest(0, 0) * CMatrix::Identity(layout.d, layout.d);
  }
  std::vector<int> support;
  for (int k = 1; k <= layout.n; ++k) {
    if (k != i) support.push_back(k);
  }
  return embed_local(rest, support, layout);
}

W1Certificate w1_primal(const HermitianOperator& x, const SolverOptions& options) {
  require_traceless(x);
  const QuditLayout layout = x.layout();
  const int n = layout.n;
  const int dim = layout.dim();
  W1Certificate cert;
  cert.method = W1Method::Primal;
  if (x.matrix().isZero(0.0)) {
    cert.decomposition.assign(n, HermitianOperator::zero(layout));
    cert.primal_value = 0.0;
    return cert;
  }

  // Blocks 2i and 2i + 1 hold the positive and negative parts of X^(i+1).
  ConicProblem p;
  for (int i = 0; i < 2 * n; ++i) p.add_psd_block(2 * dim);
  const CMatrix id = CMatrix::Identity(dim, dim);
  for (int b = 0; b < 2 * n; ++b) add_hermitian_functional(p.objective, b, id, 0.5);

  const std::vector<CMatrix> basis = hermitian_basis(dim);
  const RVector coords = hermitian_coordinates(x.matrix());
  for (size_t k = 0; k < basis.size(); ++k) {
    LinearFunctional f;
    for (int i = 0; i < n; ++i) {
      add_hermitian_functional(f, 2 * i, basis[k], 1.0);
      add_hermitian_functional(f, 2 * i + 1, basis[k], -1.0);
    }
    p.add_constraint(std::move(f), coords(static_cast<Eigen::Index>(k)));
  }
  for (int i = 0; i < n; ++i) {
    for (const CMatrix& m : marginal_functionals(layout, i + 1)) {
      LinearFunctional f;
      add_hermitian_functional(f, 2 * i, m, 1.0);
      add_hermitian_functional(f, 2 * i + 1, m, -1.0);
      p.add_constraint(std::move(f), 0.0);
    }
  }

  const ConicSolution s = solve(p, options);
  require_optimal(s, "W1 primal program");
  double half_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const CMatrix xi = unembed_hermitian(s.psd[2 * i]) - unembed_hermitian(s.psd[2 * i + 1]);
    cert.decomposition.emplace_back(layout, xi);
    half_sum += 0.5 * trace_norm(cert.decomposition.back());
  }
  cert.primal_value = half_sum;
  cert.value = half_sum;
  cert.gap = s.gap;
  cert.iterations = s.iterations;
  return cert;
}

W1Certificate w1_dual(const HermitianOperator& x, const SolverOptions& options) {
  require_traceless(x);
  const QuditLayout layout = x.layout();
  const int n = layout.n;
  const int dim = layout.dim();
  W1Certificate cert;
  cert.method = W1Method::Dual;
  if (x.matrix().isZero(0.0)) {
    cert.witness = HermitianOperator::zero(layout);
    cert.dual_value = 0.0;
    return cert;
  }

  // Free variables: coordinates of a traceless H, then the shifts K_i.
  // Slack blocks 2i, 2i + 1: 1/2 I -/+ (H - I^(i) (x) K_i).
  const std::vector<CMatrix> tl = traceless_hermitian_basis(dim);
  const std::vector<CMatrix> basis = hermitian_basis(dim);
  const int nh = static_cast<int>(tl.size());
  ConicProblem p;
  for (int i = 0; i < 2 * n; ++i) p.add_psd_block(2 * dim);
  p.add_free(nh);
  std::vector<int> k_offset(n);
  std::vector<RMatrix> k_coords(n);
  for (int i = 0; i < n; ++i) {
    const std::vector<CMatrix> lifts = marginal_functionals(layout, i + 1);
    k_offset[i] = p.add_free(static_cast<int>(lifts.size()));
    k_coords[i].resize(dim * dim, static_cast<Eigen::Index>(lifts.size()));
    for (size_t l = 0; l < lifts.size(); ++l) k_coords[i].col(static_cast<Eigen::Index>(l)) = hermitian_coordinates(lifts[l]);
  }
  RMatrix h_coords(dim * dim, nh);
  for (int k = 0; k < nh; ++k) {
    h_coords.col(k) = hermitian_coordinates(tl[k]);
    p.objective.add_free(k, -(tl[k] * x.matrix()).trace().real());
  }
  const RVector half_id = 0.5 * hermitian_coordinates(CMatrix::Identity(dim, dim));
  constexpr double kDrop = 1e-15;
  for (int i = 0; i < n; ++i) {
    for (int sign : {1, -1}) {
      const int block = sign > 0 ? 2 * i : 2 * i + 1;
      for (int j = 0; j < dim * dim; ++j) {
        LinearFunctional f;
        add_hermitian_functional(f, block, basis[j], 1.0);
        for (int k = 0; k < nh; ++k) {
          if (std::abs(h_coords(j, k)) > kDrop) f.add_free(k, sign * h_coords(j, k));
        }
        for (Eigen::Index l = 0; l < k_coords[i].cols(); ++l) {
          if (std::abs(k_coords[i](j, l)) > kDrop) f.add_free(k_offset[i] + static_cast<int>(l), -sign * k_coords[i](j, l));
        }
        p.add_constraint(std::move(f), half_id(j));
      }
    }
  }

  const ConicSolution s = solve(p, options);
  require_optimal(s, "W1 dual program");
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int k = 0; k < nh; ++k) h += s.free(k) * tl[k];
  cert.witness = HermitianOperator(layout, h);
  cert.dual_value = (h * x.matrix()).trace().real();
  cert.value = *cert.dual_value;
  cert.gap = s.gap;
  cert.iterations = s.iterations;
  return cert;
}

W1Certificate w1_norm(const HermitianOperator& x, W1Method method, const SolverOptions& options) {
  switch (method) {
    case W1Method::Primal: return w1_primal(x, options);
    case W1Method::Dual: return w1_dual(x, options);
    case W1Method::Both: break;
  }
  W1Certificate primal = w1_primal(x, options);
  W1Certificate dual = w1_dual(x, options);
  W1Certificate cert = std::move(primal);
  cert.method = W1Method::Both;
  cert.witness = std::move(dual.witness);
  cert.dual_value = dual.dual_value;
  cert.gap = std::abs(*cert.primal_value - *cert.dual_value);
  cert.iterations += dual.iterations;
  if (cert.gap > kDualityTolerance * (1.0 + cert.value)) {
    fail(ErrorCode::SolverFailure, "primal and dual W1 values disagree by " + std::to_string(cert.gap));
  }
  return cert;
}

W1Certificate w1_distance(const DensityMatrix& rho, const DensityMatrix& sigma, W1Method method,
                          const SolverOptions& options) {
  if (!(rho.layout() == sigma.layout())) fail(ErrorCode::LayoutMismatch, "states have different layouts");
  return w1_norm(rho - sigma, method, options);
}

LipschitzResult lipschitz_constant(const HermitianOperator& h, const SolverOptions& options) {
  const QuditLayout layout = h.layout();
  const int dim = layout.dim();
  LipschitzResult out;
  for (int i = 1; i <= layout.n; ++i) {
    const std::vector<CMatrix> lifts = marginal_functionals(layout, i);
    const int rest = dim / layout.d;
    const std::vector<CMatrix> rest_basis = layout.n == 1 ? std::vector<CMatrix>{CMatrix::Identity(1, 1)}
                                                          : hermitian_basis(rest);
    // Dual form in y = (t, kappa): blocks t I -/+ (H - I (x) K) with K = sum kappa_l B_l.
    ConicProblem p;
    const int plus = p.add_psd_block(2 * dim);
    const int minus = p.add_psd_block(2 * dim);
    const CMatrix id = CMatrix::Identity(dim, dim);
    add_hermitian_functional(p.objective, plus, -h.matrix());
    add_hermitian_functional(p.objective, minus, h.matrix());
    {
      LinearFunctional f;
      add_hermitian_functional(f, plus, id, -1.0);
      add_hermitian_functional(f, minus, id, -1.0);
      p.add_constraint(std::move(f), -1.0);
    }
    for (const CMatrix& m : lifts) {
      LinearFunctional f;
      add_hermitian_functional(f, plus, m, -1.0);
      add_hermitian_functional(f, minus, m, 1.0);
      p.add_constraint(std::move(f), 0.0);
    }
    const ConicSolution s = solve(p, options);
    require_optimal(s, "Lipschitz program");
    CMatrix k = CMatrix::Zero(rest, rest);
    for (size_t l = 0; l < rest_basis.size(); ++l) k += s.y(static_cast<Eigen::Index>(l + 1)) * rest_basis[l];
    k = 0.5 * (k + k.adjoint()).eval();
    const HermitianOperator residual(layout, h.matrix() - identity_on_qudit(k, i, layout));
    out.per_qudit.push_back(2.0 * operator_norm(residual));
    out.shifts.push_back(k);
  }
  out.value = *std::max_element(out.per_qudit.begin(), out.per_qudit.end());
  return out;
}

LipschitzEstimate lipschitz_estimate(const HermitianOperator& h) {
  const QuditLayout layout = h.layout();
  double m = 0.0;
  for (int i = 1; i <= layout.n; ++i) m = std::max(m, operator_norm(h - replace_with_maximally_mixed(h, i)));
  const double d2 = static_cast<double>(layout.d) * layout.d;
  return LipschitzEstimate{d2 / (d2 - 1.0) * m, 2.0 * m};
}

std::optional<int> is_neighboring(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.layout() == sigma.layout())) fail(ErrorCode::LayoutMismatch, "states have different layouts");
  const HermitianOperator diff = rho - sigma;
  if (rho.layout().n == 1) {
    // Discarding the only qudit leaves the scalar trace, equal for two states.
    return 1;
  }
  for (int i = 1; i <= rho.layout().n; ++i) {
    const int discard[] = {i};
    if (trace_norm(partial_trace(diff, discard)) <= kNeighborTolerance) return i;
  }
  return std::nullopt;
}

double local_hamiltonian_lipschitz_bound(const std::vector<LocalTerm>& terms) {
  if (terms.empty()) return 0.0;
  const QuditLayout layout = terms.front().op.layout();
  std::vector<CMatrix> per_qudit(layout.n, CMatrix::Zero(layout.dim(), layout.dim()));
  for (const LocalTerm& t : terms) {
    if (!(t.op.layout() == layout)) fail(ErrorCode::LayoutMismatch, "local terms have different layouts");
    std::vector<int> support = t.support;
    std::sort(support.begin(), support.end());
    if (std::adjacent_find(support.begin(), support.end()) != support.end()) {
      fail(ErrorCode::InvalidArgument, "repeated qudit in a term support");
    }
    for (int q : support) {
      if (q < 1 || q > layout.n) fail(ErrorCode::IndexOutOfRange, "term support outside [1, n]");
    }
    if (static_cast<int>(support.size()) < layout.n) {
      // A term supported on I equals (I / d^|I^c|) (x) Tr_{I^c} of itself.
      const int outside = layout.n - static_cast<int>(support.size());
      const HermitianOperator reduced = marginal(t.op, support);
      const CMatrix lifted = embed_local(reduced.matrix(), support, layout) / std::pow(layout.d, outside);
      const double scale = std::max(1.0, t.op.matrix().cwiseAbs().maxCoeff());
      if ((t.op.matrix() - lifted).cwiseAbs().maxCoeff() > kSupportTolerance * scale) {
        fail(ErrorCode::SupportMismatch, "a term acts outside its declared support");
      }
    }
    for (int q : support) per_qudit[q - 1] += t.op.matrix();
  }
  double m = 0.0;
  for (const CMatrix& s : per_qudit) m = std::max(m, operator_norm(HermitianOperator(layout, s)));
  return 2.0 * m;
}

}  // namespace qw1
