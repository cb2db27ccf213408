#pragma once

// Dense primal-dual interior-point solver for small conic programs.
//
// Primal:  min <C, x>  s.t.  <A_i, x> = b_i,  x in K
// Dual:    max b^T y   s.t.  C - sum_i y_i A_i = S in K*
//
// K is a product of real symmetric PSD blocks, a nonnegative orthant segment
// and a free segment (whose dual slack is fixed at zero).

#include <string>
#include <utility>
#include <vector>

#include "qw1/tensor_ops.hpp"

namespace qw1 {

/// One entry of a symmetric block coefficient; stands for both (row, col)
/// and (col, row). Normalized so that row <= col.
struct SymEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearFunctional {
  std::vector<SymEntry> psd;
  std::vector<std::pair<int, double>> lp;
  std::vector<std::pair<int, double>> free;

  void add_psd(int block, int row, int col, double value);
  void add_lp(int index, double value) { lp.emplace_back(index, value); }
  void add_free(int index, double value) { free.emplace_back(index, value); }
};

struct ConicProblem {
  std::vector<int> psd_sizes;
  int lp_size = 0;
  int free_size = 0;
  LinearFunctional objective;
  std::vector<LinearFunctional> constraints;
  std::vector<double> rhs;

  int add_psd_block(int size);
  /// Returns the index of the first new variable.
  int add_lp(int count);
  int add_free(int count);
  int add_constraint(LinearFunctional functional, double value);
};

struct SolverOptions {
  int max_iterations = 200;
  double gap_tolerance = 1e-8;
  double feasibility_tolerance = 1e-8;
  bool verbose = false;
};

enum class SolverStatus { Optimal, MaxIterations, NumericalFailure };

const char* status_name(SolverStatus status);

struct ConicSolution {
  SolverStatus status = SolverStatus::NumericalFailure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| / (1 + |primal|).
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<RMatrix> psd;
  RVector lp;
  RVector free;
  RVector y;
  std::vector<RMatrix> psd_slack;
  RVector lp_slack;
  int removed_constraints = 0;
  std::string message;
};

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

// --- complex Hermitian blocks through the real embedding ---------------------
//
// embed(A + iB) = [[A, -B], [B, A]]. Tr[embed(X) embed(Y)] = 2 Re Tr[XY], so the
// functional X -> Re Tr[C X] on an embedded block is embed(C) / 2.

RMatrix embed_hermitian(const CMatrix& h);
/// Inverse on the embedded subspace; for a general symmetric Y it returns the
/// Hermitian matrix whose embedding is the average of Y and J Y J^T.
CMatrix unembed_hermitian(const RMatrix& y);

/// f += weight * (X -> Re Tr[C X]) on the complex block stored at `block`.
void add_hermitian_functional(LinearFunctional& f, int block, const CMatrix& c, double weight = 1.0);

/// Orthonormal basis of the dim x dim Hermitian matrices under Tr[AB]:
/// E_pp, (E_pq + E_qp)/sqrt2, i(E_pq - E_qp)/sqrt2.
std::vector<CMatrix> hermitian_basis(int dim);
/// Orthonormal basis of the traceless Hermitian matrices (off-diagonal
/// elements as above, generalized Gell-Mann diagonals).
std::vector<CMatrix> traceless_hermitian_basis(int dim);
/// Coordinates Tr[E_k A] of a Hermitian A in the hermitian_basis order.
RVector hermitian_coordinates(const CMatrix& a);

}  // namespace qw1
