#pragma once

// Quantum W1 norm of traceless operators and the quantum Lipschitz constant.

#include <optional>
#include <string>
#include <vector>

#include "qw1/conic_solver.hpp"
#include "qw1/tensor_ops.hpp"

namespace qw1 {

enum class W1Method { Primal, Dual, Both };

const char* method_name(W1Method method);

struct W1Certificate {
  W1Method method = W1Method::Primal;
  double value = 0.0;
  /// X^(1..n) with Tr_i X^(i) = 0 and sum_i X^(i) = X; empty for Dual.
  std::vector<HermitianOperator> decomposition;
  /// Traceless H with Lipschitz constant at most 1; absent for Primal.
  std::optional<HermitianOperator> witness;
  /// 1/2 sum_i ||X^(i)||_1 of the returned decomposition.
  std::optional<double> primal_value;
  /// Tr[H X] of the returned witness.
  std::optional<double> dual_value;
  /// |primal - dual| for Both; the solver's relative gap otherwise.
  double gap = 0.0;
  int iterations = 0;
};

W1Certificate w1_primal(const HermitianOperator& x, const SolverOptions& options = {});
W1Certificate w1_dual(const HermitianOperator& x, const SolverOptions& options = {});
/// Both sides must agree within 1e-6 (1 + value), else SolverFailure.
W1Certificate w1_norm(const HermitianOperator& x, W1Method method = W1Method::Primal,
                      const SolverOptions& options = {});
W1Certificate w1_distance(const DensityMatrix& rho, const DensityMatrix& sigma,
                          W1Method method = W1Method::Primal, const SolverOptions& options = {});

struct LipschitzResult {
  double value = 0.0;
  /// 2 min_K ||H - I^(i) (x) K||_inf for each qudit i.
  std::vector<double> per_qudit;
  /// Optimal K for each qudit, as matrices on the other n - 1 qudits (1x1 when n = 1).
  std::vector<CMatrix> shifts;
};

LipschitzResult lipschitz_constant(const HermitianOperator& h, const SolverOptions& options = {});

struct LipschitzEstimate {
  double lower = 0.0;
  double upper = 0.0;
};

/// Optimization-free sandwich from ||H - E_i(H)||_inf, E_i the replacement of
/// qudit i by the maximally mixed state.
LipschitzEstimate lipschitz_estimate(const HermitianOperator& h);

/// Smallest qudit i (1-based) with ||Tr_i rho - Tr_i sigma||_1 <= 1e-9.
std::optional<int> is_neighboring(const DensityMatrix& rho, const DensityMatrix& sigma);

struct LocalTerm {
  std::vector<int> support;
  /// Full n-qudit operator acting trivially outside `support`.
  HermitianOperator op;
};

/// 2 max_i ||sum_{I containing i} H_I||_inf.
double local_hamiltonian_lipschitz_bound(const std::vector<LocalTerm>& terms);

/// I on qudit i (1-based) tensored with `rest` on the remaining qudits, in order.
CMatrix identity_on_qudit(const CMatrix& rest, int i, QuditLayout layout);

}  // namespace qw1
