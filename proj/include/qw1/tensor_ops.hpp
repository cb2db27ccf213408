#pragma once

// Dense multi-qudit linear algebra on (C^d)^{\otimes n}.
//
// Qudits are indexed from 1. Basis states |x_1 ... x_n> are stored row-major
// with qudit 1 as the most significant digit, i.e. index = sum_k x_k d^(n-k).

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qw1/error.hpp"

namespace qw1 {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr int kDefaultDimCap = 32;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kDensityEigenTol = 1e-9;
inline constexpr double kNormEigenCutoff = 1e-12;
inline constexpr double kSupportCutoff = 1e-10;

struct QuditLayout {
  int d = 2;
  int n = 1;

  /// Validated construction; throws CapExceeded when d^n > cap.
  static QuditLayout make(int d, int n, int cap = kDefaultDimCap);

  int dim() const;
  friend bool operator==(const QuditLayout&, const QuditLayout&) = default;
};

/// Dense self-adjoint operator with its qudit layout.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  /// Rejects matrices that are not square, not d^n sized, or not Hermitian
  /// within kHermitianTol (relative to the largest entry when that exceeds 1);
  /// stores the symmetrized (X + X^dag) / 2.
  HermitianOperator(QuditLayout layout, const CMatrix& entries);

  static HermitianOperator zero(QuditLayout layout);
  static HermitianOperator identity(QuditLayout layout);
  static HermitianOperator diagonal(QuditLayout layout, const RVector& diag);

  const QuditLayout& layout() const { return layout_; }
  const CMatrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  double trace() const { return m_.trace().real(); }
  bool is_traceless(double tol = kTraceTol) const;

  HermitianOperator& operator+=(const HermitianOperator& rhs);
  HermitianOperator& operator-=(const HermitianOperator& rhs);
  HermitianOperator& operator*=(double s);

 private:
  QuditLayout layout_;
  CMatrix m_;
};

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b);
HermitianOperator operator-(HermitianOperator a);
HermitianOperator operator*(double s, HermitianOperator a);

/// Positive unit-trace operator. Eigenvalues down to -kDensityEigenTol are
/// accepted and clamped to zero when read.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(HermitianOperator op);

  const HermitianOperator& op() const { return op_; }
  const QuditLayout& layout() const { return op_.layout(); }
  const CMatrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }

  /// Ascending, clamped at zero.
  RVector eigenvalues() const;

 private:
  HermitianOperator op_;
};

HermitianOperator operator-(const DensityMatrix& a, const DensityMatrix& b);

/// d^2 unitaries on C^d with U_1 = I and Tr[U_i^dag U_j] = d delta_ij,
/// realized as clock-and-shift operators X^a Z^b.
struct UnitaryBasis {
  int d = 2;
  std::vector<CMatrix> operators;
};

UnitaryBasis clock_shift_basis(int d);

// --- structural operations -------------------------------------------------

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b,
                                 int cap = kDefaultDimCap);
HermitianOperator tensor_power(const HermitianOperator& a, int copies, int cap = kDefaultDimCap);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, int cap = kDefaultDimCap);
DensityMatrix tensor_power(const DensityMatrix& a, int copies, int cap = kDefaultDimCap);

/// Traces out the listed (1-based) qudits; at least one qudit must remain.
HermitianOperator partial_trace(const HermitianOperator& x, std::span<const int> discard);
HermitianOperator partial_trace(const HermitianOperator& x, std::initializer_list<int> discard);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> discard);

/// Marginal on the listed qudits, in increasing qudit order.
HermitianOperator marginal(const HermitianOperator& x, std::span<const int> keep);

/// The operator acting as `local` on the ordered `support` and as identity on
/// every other qudit of `layout`.
CMatrix embed_local(const CMatrix& local, std::span<const int> support, QuditLayout layout);

/// Re-inserts an identity on qudit i: the result acts as I_d on qudit i and
/// as `x` (an (n-1)-qudit operator) on the remaining qudits.
HermitianOperator insert_identity(const HermitianOperator& x, int i);

/// Output qudit j carries input qudit perm[j-1] (perm is a 1-based permutation).
HermitianOperator permute_qudits(const HermitianOperator& x, std::span<const int> perm);

HermitianOperator conjugate(const HermitianOperator& x, const CMatrix& u);

// --- spectral quantities ---------------------------------------------------

RVector eigenvalues(const HermitianOperator& x);
double trace_norm(const HermitianOperator& x);
double operator_norm(const HermitianOperator& x);
/// Entropy in nats; 0 ln 0 := 0.
double von_neumann_entropy(const DensityMatrix& rho);
/// Tr[rho (ln rho - ln sigma)]; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);
double shannon_entropy(std::span<const double> p);

/// Zeroes every off-diagonal entry (the canonical-basis dephasing D^{\otimes n}).
HermitianOperator dephase(const HermitianOperator& x);

/// (I_d / d)_i \otimes Tr_i X, re-inserted at position i.
HermitianOperator replace_with_maximally_mixed(const HermitianOperator& x, int i);

// --- named states ----------------------------------------------------------

DensityMatrix basis_projector(QuditLayout layout, std::span<const int> digits);
DensityMatrix maximally_mixed(QuditLayout layout);
/// sum_k |kk> / sqrt(d) on two qudits.
DensityMatrix maximally_entangled(int d);
DensityMatrix pure_state(QuditLayout layout, const CVector& psi);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

// --- random generation (deterministic under the caller's seed) -------------

DensityMatrix random_density(QuditLayout layout, int rank, Rng& rng);
DensityMatrix random_density(QuditLayout layout, int rank, std::uint64_t seed);
HermitianOperator random_hermitian(QuditLayout layout, Rng& rng);
HermitianOperator random_traceless(QuditLayout layout, Rng& rng);
HermitianOperator random_traceless(QuditLayout layout, std::uint64_t seed);
CMatrix haar_unitary(int dim, Rng& rng);
CMatrix haar_unitary(int dim, std::uint64_t seed);
CVector random_pure_vector(int dim, Rng& rng);

// --- basis-index helpers ---------------------------------------------------

std::vector<int> index_to_digits(int index, QuditLayout layout);
int digits_to_index(std::span<const int> digits, QuditLayout layout);
int int_pow(int base, int exp);

}  // namespace qw1
