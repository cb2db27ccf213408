#include "qw1/classical_ot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qw1 {

Distribution Distribution::make(QuditLayout layout, RVector weights) {
  if (weights.size() != layout.dim()) {
    fail(ErrorCode::DimensionMismatch, "distribution has " + std::to_string(weights.size()) +
                                           " weights, layout requires " + std::to_string(layout.dim()));
  }
  for (double w : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::InvalidArgument, "distribution has a negative or non-finite weight");
  }
  const double total = weights.sum();
  if (std::abs(total - 1.0) > kDistributionSumTol) {
    fail(ErrorCode::InvalidArgument, "distribution weights sum to " + std::to_string(total));
  }
  return Distribution{layout, std::move(weights)};
}

int hamming(std::span<const int> x, std::span<const int> y) {
  if (x.size() != y.size()) fail(ErrorCode::LengthMismatch, "Hamming distance of strings with different lengths");
  int h = 0;
  for (size_t k = 0; k < x.size(); ++k) h += x[k] != y[k] ? 1 : 0;
  return h;
}

int hamming_index(int a, int b, QuditLayout layout) {
  int h = 0;
  for (int k = 0; k < layout.n; ++k) {
    h += (a % layout.d) != (b % layout.d) ? 1 : 0;
    a /= layout.d;
    b /= layout.d;
  }
  return h;
}

namespace {

void require_same_layout(const Distribution& p, const Distribution& q) {
  if (!(p.layout == q.layout)) fail(ErrorCode::LayoutMismatch, "distributions have different layouts");
}

void require_optimal(const ConicSolution& s, const char* what) {
  if (s.status != SolverStatus::Optimal) {
    fail(ErrorCode::SolverFailure, std::string(what) + ": solver returned " + status_name(s.status));
  }
}

}  // namespace

ClassicalW1 classical_w1(const Distribution& p, const Distribution& q, const SolverOptions& options) {
  require_same_layout(p, q);
  const int dim = p.layout.dim();
  ClassicalW1 out;
  if (p.weights == q.weights) {
    out.coupling = p.weights.asDiagonal();
    return out;
  }
  // Variable x * dim + y holds pi(x, y).
  ConicProblem lp;
  lp.add_lp(dim * dim);
  for (int x = 0; x < dim; ++x) {
    for (int y = 0; y < dim; ++y) {
      const int h = hamming_index(x, y, p.layout);
      if (h != 0) lp.objective.add_lp(x * dim + y, h);
    }
  }
  for (int x = 0; x < dim; ++x) {
    LinearFunctional f;
    for (int y = 0; y < dim; ++y) f.add_lp(x * dim + y, 1.0);
    lp.add_constraint(std::move(f), p.weights(x));
  }
  for (int y = 0; y < dim; ++y) {
    LinearFunctional f;
    for (int x = 0; x < dim; ++x) f.add_lp(x * dim + y, 1.0);
    lp.add_constraint(std::move(f), q.weights(y));
  }
  const ConicSolution s = solve(lp, options);
  require_optimal(s, "transportation LP");
  out.coupling = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      s.lp.data(), dim, dim);
  out.value = s.primal_value;
  return out;
}

ClassicalW1Dual classical_w1_dual(const Distribution& p, const Distribution& q, const SolverOptions& options) {
  require_same_layout(p, q);
  const int dim = p.layout.dim();
  ClassicalW1Dual out;
  out.potential = RVector::Zero(dim);
  if (p.weights == q.weights) return out;
  // Free f(1..dim-1) with f(0) = 0; slack h(x, y) - f(x) + f(y) >= 0 for x != y.
  ConicProblem lp;
  lp.add_free(dim - 1);
  lp.add_lp(dim * (dim - 1));
  const RVector diff = p.weights - q.weights;
  for (int x = 1; x < dim; ++x) lp.objective.add_free(x - 1, -diff(x));
  int slack = 0;
  for (int x = 0; x < dim; ++x) {
    for (int y = 0; y < dim; ++y) {
      if (x == y) continue;
      LinearFunctional f;
      f.add_lp(slack++, 1.0);
      if (x > 0) f.add_free(x - 1, 1.0);
      if (y > 0) f.add_free(y - 1, -1.0);
      lp.add_constraint(std::move(f), hamming_index(x, y, p.layout));
    }
  }
  const ConicSolution s = solve(lp, options);
  require_optimal(s, "transportation dual LP");
  out.potential.tail(dim - 1) = s.free;
  out.value = out.potential.dot(diff);
  return out;
}

double binary_entropy(double t) {
  t = std::clamp(t, 0.0, 1.0);
  double h = 0.0;
  if (t > 0.0) h -= t * std::log(t);
  if (t < 1.0) h -= (1.0 - t) * std::log(1.0 - t);
  return h;
}

double kl_divergence(const Distribution& p, const Distribution& q) {
  require_same_layout(p, q);
  double s = 0.0;
  for (Eigen::Index x = 0; x < p.weights.size(); ++x) {
    const double a = p.weights(x);
    const double b = q.weights(x);
    if (a <= 0.0) continue;
    if (b <= 0.0) return std::numeric_limits<double>::infinity();
    s += a * std::log(a / b);
  }
  return std::max(0.0, s);
}

BoundCheck shannon_continuity_bound(const Distribution& p, const Distribution& q, const SolverOptions& options) {
  const double w = classical_w1(p, q, options).value;
  const int n = p.layout.n;
  const double lhs = std::abs(shannon_entropy({p.weights.data(), static_cast<size_t>(p.weights.size())}) -
                              shannon_entropy({q.weights.data(), static_cast<size_t>(q.weights.size())}));
  const double rhs = n * binary_entropy(w / n) + w * std::log(static_cast<double>(p.layout.d - 1));
  return BoundCheck{lhs, rhs};
}

BoundCheck classical_marton_bound(const Distribution& p, const std::vector<RVector>& factors,
                                  const SolverOptions& options) {
  if (static_cast<int>(factors.size()) != p.layout.n) {
    fail(ErrorCode::LengthMismatch, "Marton reference needs one factor per site");
  }
  const Distribution q = product_distribution(factors, p.layout.dim());
  if (!(q.layout == p.layout)) fail(ErrorCode::LayoutMismatch, "reference factors do not match the layout");
  const double kl = kl_divergence(p, q);
  if (!std::isfinite(kl)) fail(ErrorCode::SupportViolation, "relative entropy is infinite");
  return BoundCheck{classical_w1(p, q, options).value, std::sqrt(0.5 * p.layout.n * kl)};
}

Distribution product_distribution(const std::vector<RVector>& factors, int cap) {
  if (factors.empty()) fail(ErrorCode::InvalidArgument, "product of zero factors");
  const int d = static_cast<int>(factors.front().size());
  const QuditLayout layout = QuditLayout::make(d, static_cast<int>(factors.size()), cap);
  RVector w = RVector::Ones(1);
  for (const RVector& f : factors) {
    if (f.size() != d) fail(ErrorCode::DimensionMismatch, "factors have different local dimensions");
    RVector next(w.size() * d);
    for (Eigen::Index a = 0; a < w.size(); ++a) next.segment(a * d, d) = w(a) * f;
    w = std::move(next);
  }
  return Distribution::make(layout, std::move(w));
}

Distribution random_distribution(QuditLayout layout, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  RVector w(layout.dim());
  for (Eigen::Index x = 0; x < w.size(); ++x) w(x) = e(rng);
  w /= w.sum();
  // Put the rounding residue on the largest entry so the sum is 1 to the last bit.
  Eigen::Index top;
  w.maxCoeff(&top);
  w(top) += 1.0 - w.sum();
  return Distribution::make(layout, std::move(w));
}

double classical_lipschitz(const RVector& f, QuditLayout layout) {
  if (f.size() != layout.dim()) fail(ErrorCode::DimensionMismatch, "function length does not match the layout");
  double best = 0.0;
  for (int x = 0; x < layout.dim(); ++x) {
    for (int y = x + 1; y < layout.dim(); ++y) {
      best = std::max(best, std::abs(f(x) - f(y)) / hamming_index(x, y, layout));
    }
  }
  return best;
}

}  // namespace qw1
