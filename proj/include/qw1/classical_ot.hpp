#pragma once

// Classical W1 distance on [d]^n with the Hamming cost.

#include <span>
#include <vector>

#include "qw1/conic_solver.hpp"
#include "qw1/tensor_ops.hpp"

namespace qw1 {

inline constexpr double kDistributionSumTol = 1e-12;

/// Probability vector over [d]^n in lexicographic order (qudit 1 most significant).
struct Distribution {
  QuditLayout layout;
  RVector weights;

  /// Rejects negative entries and sums off 1 by more than kDistributionSumTol.
  static Distribution make(QuditLayout layout, RVector weights);
};

int hamming(std::span<const int> x, std::span<const int> y);
/// Hamming distance between the strings with the given basis indices.
int hamming_index(int a, int b, QuditLayout layout);

struct ClassicalW1 {
  double value = 0.0;
  /// coupling(x, y): row sums p, column sums q.
  RMatrix coupling;
};

struct ClassicalW1Dual {
  double value = 0.0;
  /// 1-Lipschitz potential with f(0...0) = 0.
  RVector potential;
};

ClassicalW1 classical_w1(const Distribution& p, const Distribution& q, const SolverOptions& options = {});
ClassicalW1Dual classical_w1_dual(const Distribution& p, const Distribution& q, const SolverOptions& options = {});

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Natural-log binary entropy; h2(0) = h2(1) = 0.
double binary_entropy(double t);
double kl_divergence(const Distribution& p, const Distribution& q);

/// lhs = |S(p) - S(q)|, rhs = n h2(W1 / n) + W1 ln(d - 1).
BoundCheck shannon_continuity_bound(const Distribution& p, const Distribution& q, const SolverOptions& options = {});

/// lhs = W1(p, q), rhs = sqrt(n / 2 KL(p || q)) for q = q_1 x ... x q_n.
/// SupportViolation when KL is infinite.
BoundCheck classical_marton_bound(const Distribution& p, const std::vector<RVector>& factors,
                                  const SolverOptions& options = {});

Distribution product_distribution(const std::vector<RVector>& factors, int cap = kDefaultDimCap);
Distribution random_distribution(QuditLayout layout, Rng& rng);

/// max over x != y of |f(x) - f(y)| / h(x, y).
double classical_lipschitz(const RVector& f, QuditLayout layout);

}  // namespace qw1
