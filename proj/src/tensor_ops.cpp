#include "qw1/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qw1 {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotDensity: return "NotDensity";
    case ErrorCode::NotTraceless: return "NotTraceless";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::ParameterRange: return "ParameterRange";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NoFixedPoint: return "NoFixedPoint";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

int int_pow(int base, int exp) {
  long long r = 1;
  for (int k = 0; k < exp; ++k) {
    r *= base;
    if (r > std::numeric_limits<int>::max()) fail(ErrorCode::CapExceeded, "dimension overflow");
  }
  return static_cast<int>(r);
}

QuditLayout QuditLayout::make(int d, int n, int cap) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "local dimension must be >= 2");
  if (n < 1) fail(ErrorCode::InvalidArgument, "qudit count must be >= 1");
  long long dim = 1;
  for (int k = 0; k < n; ++k) {
    dim *= d;
    if (dim > cap) {
      fail(ErrorCode::CapExceeded, "d^n = " + std::to_string(d) + "^" + std::to_string(n) +
                                       " exceeds the dimension cap " + std::to_string(cap));
    }
  }
  return QuditLayout{d, n};
}

int QuditLayout::dim() const { return int_pow(d, n); }

std::vector<int> index_to_digits(int index, QuditLayout layout) {
  std::vector<int> digits(layout.n);
  for (int k = layout.n - 1; k >= 0; --k) {
    digits[k] = index % layout.d;
    index /= layout.d;
  }
  return digits;
}

int digits_to_index(std::span<const int> digits, QuditLayout layout) {
  int index = 0;
  for (int k = 0; k < layout.n; ++k) index = index * layout.d + digits[k];
  return index;
}

// --- HermitianOperator ------------------------------------------------------

HermitianOperator::HermitianOperator(QuditLayout layout, const CMatrix& entries) : layout_(layout) {
  const int dim = layout.dim();
  if (entries.rows() != entries.cols()) fail(ErrorCode::DimensionMismatch, "matrix is not square");
  if (entries.rows() != dim) {
    fail(ErrorCode::DimensionMismatch, "matrix has " + std::to_string(entries.rows()) +
                                           " rows, layout requires " + std::to_string(dim));
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (!(asym <= kHermitianTol * scale)) {
    fail(ErrorCode::NotHermitian, "matrix is not Hermitian (max |X - X^dag| = " + std::to_string(asym) + ")");
  }
  m_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::zero(QuditLayout layout) {
  return HermitianOperator(layout, CMatrix::Zero(layout.dim(), layout.dim()));
}

HermitianOperator HermitianOperator::identity(QuditLayout layout) {
  return HermitianOperator(layout, CMatrix::Identity(layout.dim(), layout.dim()));
}

HermitianOperator HermitianOperator::diagonal(QuditLayout layout, const RVector& diag) {
  if (diag.size() != layout.dim()) fail(ErrorCode::DimensionMismatch, "diagonal length mismatch");
  return HermitianOperator(layout, diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

bool HermitianOperator::is_traceless(double tol) const { return std::abs(trace()) <= tol; }

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& rhs) {
  if (!(layout_ == rhs.layout_)) fail(ErrorCode::LayoutMismatch, "operator layouts differ");
  m_ += rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& rhs) {
  if (!(layout_ == rhs.layout_)) fail(ErrorCode::LayoutMismatch, "operator layouts differ");
  m_ -= rhs.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
HermitianOperator operator-(HermitianOperator a) { return a *= -1.0; }
HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  if (std::abs(op_.trace() - 1.0) > kTraceTol) {
    fail(ErrorCode::NotDensity, "trace is " + std::to_string(op_.trace()) + ", expected 1");
  }
  const RVector ev = qw1::eigenvalues(op_);
  if (ev.size() > 0 && ev(0) < -kDensityEigenTol) {
    fail(ErrorCode::NotDensity, "negative eigenvalue " + std::to_string(ev(0)));
  }
}

RVector DensityMatrix::eigenvalues() const { return qw1::eigenvalues(op_).cwiseMax(0.0); }

HermitianOperator operator-(const DensityMatrix& a, const DensityMatrix& b) { return a.op() - b.op(); }

// --- unitary basis ------------------------------------------------------------

UnitaryBasis clock_shift_basis(int d) {
  if (d < 2) fail(ErrorCode::InvalidArgument, "local dimension must be >= 2");
  CMatrix shift = CMatrix::Zero(d, d);
  CMatrix clock = CMatrix::Zero(d, d);
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < d; ++k) {
    shift((k + 1) % d, k) = 1.0;
    clock(k, k) = std::polar(1.0, two_pi * k / d);
  }
  UnitaryBasis basis{d, {}};
  CMatrix xa = CMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    CMatrix zb = CMatrix::Identity(d, d);
    for (int b = 0; b < d; ++b) {
      basis.operators.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return basis;
}

// --- structural operations --------------------------------------------------

HermitianOperator tensor_product(const HermitianOperator& a, const HermitianOperator& b, int cap) {
  if (a.layout().d != b.layout().d) {
    fail(ErrorCode::DimensionMismatch, "tensor product of operators with different local dimensions");
  }
  const QuditLayout layout = QuditLayout::make(a.layout().d, a.layout().n + b.layout().n, cap);
  const CMatrix& am = a.matrix();
  const CMatrix& bm = b.matrix();
  const auto nb = bm.rows();
  CMatrix out(am.rows() * nb, am.cols() * nb);
  for (Eigen::Index i = 0; i < am.rows(); ++i) {
    for (Eigen::Index j = 0; j < am.cols(); ++j) out.block(i * nb, j * nb, nb, nb) = am(i, j) * bm;
  }
  return HermitianOperator(layout, out);
}

HermitianOperator tensor_power(const HermitianOperator& a, int copies, int cap) {
  if (copies < 1) fail(ErrorCode::InvalidArgument, "tensor power needs at least one copy");
  HermitianOperator out = a;
  for (int k = 1; k < copies; ++k) out = tensor_product(out, a, cap);
  return out;
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b, int cap) {
  return DensityMatrix(tensor_product(a.op(), b.op(), cap));
}

DensityMatrix tensor_power(const DensityMatrix& a, int copies, int cap) {
  return DensityMatrix(tensor_power(a.op(), copies, cap));
}

namespace {

// Splits every basis index into (kept sub-index, discarded sub-index).
struct IndexSplit {
  std::vector<int> kept;
  std::vector<int> rest;
  int kept_dim = 1;
};

IndexSplit split_indices(QuditLayout layout, const std::vector<bool>& in_kept) {
  IndexSplit s;
  const int dim = layout.dim();
  s.kept.resize(dim);
  s.rest.resize(dim);
  for (int k = 0; k < layout.n; ++k) {
    if (in_kept[k]) s.kept_dim *= layout.d;
  }
  for (int x = 0; x < dim; ++x) {
    const auto digits = index_to_digits(x, layout);
    int ki = 0, ri = 0;
    for (int k = 0; k < layout.n; ++k) {
      if (in_kept[k]) {
        ki = ki * layout.d + digits[k];
      } else {
        ri = ri * layout.d + digits[k];
      }
    }
    s.kept[x] = ki;
    s.rest[x] = ri;
  }
  return s;
}

std::vector<bool> membership(int n, std::span<const int> qudits, const char* what) {
  std::vector<bool> in(n, false);
  for (int q : qudits) {
    if (q < 1 || q > n) {
      fail(ErrorCode::IndexOutOfRange, std::string(what) + ": qudit index " + std::to_string(q) +
                                           " outside [1, " + std::to_string(n) + "]");
    }
    in[q - 1] = true;
  }
  return in;
}

}  // namespace

HermitianOperator partial_trace(const HermitianOperator& x, std::span<const int> discard) {
  const QuditLayout layout = x.layout();
  std::vector<bool> gone = membership(layout.n, discard, "partial_trace");
  std::vector<bool> keep(layout.n);
  int remaining = 0;
  for (int k = 0; k < layout.n; ++k) {
    keep[k] = !gone[k];
    remaining += keep[k] ? 1 : 0;
  }
  if (remaining == 0) fail(ErrorCode::InvalidArgument, "partial_trace: at least one qudit must remain");
  if (remaining == layout.n) return x;
  const IndexSplit s = split_indices(layout, keep);
  CMatrix out = CMatrix::Zero(s.kept_dim, s.kept_dim);
  const CMatrix& m = x.matrix();
  const int dim = layout.dim();
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (s.rest[a] == s.rest[b]) out(s.kept[a], s.kept[b]) += m(a, b);
    }
  }
  return HermitianOperator(QuditLayout{layout.d, remaining}, out);
}

HermitianOperator partial_trace(const HermitianOperator& x, std::initializer_list<int> discard) {
  return partial_trace(x, std::span<const int>(discard.begin(), discard.size()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> discard) {
  return DensityMatrix(partial_trace(rho.op(), discard));
}

HermitianOperator marginal(const HermitianOperator& x, std::span<const int> keep) {
  std::vector<bool> in = membership(x.layout().n, keep, "marginal");
  std::vector<int> discard;
  for (int k = 0; k < x.layout().n; ++k) {
    if (!in[k]) discard.push_back(k + 1);
  }
  return partial_trace(x, discard);
}

CMatrix embed_local(const CMatrix& local, std::span<const int> support, QuditLayout layout) {
  const int k = static_cast<int>(support.size());
  std::vector<bool> in = membership(layout.n, support, "embed_local");
  int distinct = 0;
  for (bool b : in) distinct += b ? 1 : 0;
  if (distinct != k) fail(ErrorCode::InvalidArgument, "embed_local: repeated qudit in support");
  const int local_dim = int_pow(layout.d, k);
  if (local.rows() != local_dim || local.cols() != local_dim) {
    fail(ErrorCode::DimensionMismatch, "embed_local: operator size does not match its support");
  }
  const int dim = layout.dim();
  std::vector<int> sub(dim), rest(dim);
  for (int x = 0; x < dim; ++x) {
    const auto digits = index_to_digits(x, layout);
    int si = 0;
    for (int q : support) si = si * layout.d + digits[q - 1];
    int ri = 0;
    for (int j = 0; j < layout.n; ++j) {
      if (!in[j]) ri = ri * layout.d + digits[j];
    }
    sub[x] = si;
    rest[x] = ri;
  }
  CMatrix out = CMatrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) {
      if (rest[a] == rest[b]) out(a, b) = local(sub[a], sub[b]);
    }
  }
  return out;
}

HermitianOperator insert_identity(const HermitianOperator& x, int i) {
  const QuditLayout small = x.layout();
  const QuditLayout full{small.d, small.n + 1};
  if (i < 1 || i > full.n) fail(ErrorCode::IndexOutOfRange, "insert_identity: qudit index out of range");
  std::vector<int> support;
  for (int k = 1; k <= full.n; ++k) {
    if (k != i) support.push_back(k);
  }
  return HermitianOperator(full, embed_local(x.matrix(), support, full));
}

HermitianOperator permute_qudits(const HermitianOperator& x, std::span<const int> perm) {
  const QuditLayout layout = x.layout();
  if (static_cast<int>(perm.size()) != layout.n) fail(ErrorCode::InvalidArgument, "permutation length mismatch");
  std::vector<bool> seen = membership(layout.n, perm, "permute_qudits");
  for (bool s : seen) {
    if (!s) fail(ErrorCode::InvalidArgument, "not a permutation");
  }
  const int dim = layout.dim();
  std::vector<int> map(dim);
  std::vector<int> out_digits(layout.n);
  for (int a = 0; a < dim; ++a) {
    const auto digits = index_to_digits(a, layout);
    for (int j = 0; j < layout.n; ++j) out_digits[j] = digits[perm[j] - 1];
    map[a] = digits_to_index(out_digits, layout);
  }
  CMatrix out(dim, dim);
  const CMatrix& m = x.matrix();
  for (int a = 0; a < dim; ++a) {
    for (int b = 0; b < dim; ++b) out(map[a], map[b]) = m(a, b);
  }
  return HermitianOperator(layout, out);
}

HermitianOperator conjugate(const HermitianOperator& x, const CMatrix& u) {
  if (u.rows() != x.dim() || u.cols() != x.dim()) fail(ErrorCode::DimensionMismatch, "conjugate: size mismatch");
  return HermitianOperator(x.layout(), u * x.matrix() * u.adjoint());
}

// --- spectral quantities ------------------------------------------------------

RVector eigenvalues(const HermitianOperator& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::EigenFailure, "eigendecomposition did not converge");
  return es.eigenvalues();
}

double trace_norm(const HermitianOperator& x) {
  double s = 0.0;
  for (double v : eigenvalues(x)) {
    if (std::abs(v) >= kNormEigenCutoff) s += std::abs(v);
  }
  return s;
}

double operator_norm(const HermitianOperator& x) {
  const RVector ev = eigenvalues(x);
  double m = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return m < kNormEigenCutoff ? 0.0 : m;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double v : rho.eigenvalues()) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return std::max(0.0, s);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (!(rho.layout() == sigma.layout())) fail(ErrorCode::LayoutMismatch, "relative_entropy: layouts differ");
  Eigen::SelfAdjointEigenSolver<CMatrix> er(rho.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sigma.matrix());
  if (er.info() != Eigen::Success || es.info() != Eigen::Success) {
    fail(ErrorCode::EigenFailure, "eigendecomposition did not converge");
  }
  const RVector lr = er.eigenvalues().cwiseMax(0.0);
  const RVector ls = es.eigenvalues().cwiseMax(0.0);
  // Overlaps |<r_a|s_b>|^2 between eigenbases.
  const RMatrix overlap = (er.eigenvectors().adjoint() * es.eigenvectors()).cwiseAbs2();
  double value = 0.0;
  for (Eigen::Index a = 0; a < lr.size(); ++a) {
    if (lr(a) <= kSupportCutoff) continue;
    value += lr(a) * std::log(lr(a));
    for (Eigen::Index b = 0; b < ls.size(); ++b) {
      const double w = overlap(a, b);
      if (ls(b) <= kSupportCutoff) {
        if (w * lr(a) > kSupportCutoff) return std::numeric_limits<double>::infinity();
        continue;
      }
      value -= lr(a) * w * std::log(ls(b));
    }
  }
  return std::max(0.0, value);
}

double shannon_entropy(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) {
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

HermitianOperator dephase(const HermitianOperator& x) {
  CMatrix out = CMatrix::Zero(x.dim(), x.dim());
  out.diagonal() = x.matrix().diagonal().real().cast<Complex>();
  return HermitianOperator(x.layout(), out);
}

HermitianOperator replace_with_maximally_mixed(const HermitianOperator& x, int i) {
  const QuditLayout layout = x.layout();
  if (i < 1 || i > layout.n) fail(ErrorCode::IndexOutOfRange, "replace_with_maximally_mixed: bad qudit index");
  if (layout.n == 1) {
    return HermitianOperator(layout, CMatrix::Identity(layout.d, layout.d) * (x.trace() / layout.d));
  }
  const int discard[] = {i};
  HermitianOperator reduced = partial_trace(x, discard);
  return (1.0 / layout.d) * insert_identity(reduced, i);
}

// --- named states -------------------------------------------------------------

DensityMatrix basis_projector(QuditLayout layout, std::span<const int> digits) {
  if (static_cast<int>(digits.size()) != layout.n) fail(ErrorCode::LengthMismatch, "basis_projector: wrong digit count");
  for (int v : digits) {
    if (v < 0 || v >= layout.d) fail(ErrorCode::IndexOutOfRange, "basis_projector: digit out of range");
  }
  CMatrix m = CMatrix::Zero(layout.dim(), layout.dim());
  const int x = digits_to_index(digits, layout);
  m(x, x) = 1.0;
  return DensityMatrix(HermitianOperator(layout, m));
}

DensityMatrix maximally_mixed(QuditLayout layout) {
  const int dim = layout.dim();
  return DensityMatrix(HermitianOperator(layout, CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

DensityMatrix maximally_entangled(int d) {
  const QuditLayout layout = QuditLayout::make(d, 2, std::max(kDefaultDimCap, d * d));
  CVector psi = CVector::Zero(d * d);
  for (int k = 0; k < d; ++k) psi(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
  return pure_state(layout, psi);
}

DensityMatrix pure_state(QuditLayout layout, const CVector& psi) {
  if (psi.size() != layout.dim()) fail(ErrorCode::DimensionMismatch, "pure_state: vector length mismatch");
  const double norm = psi.norm();
  if (norm == 0.0) fail(ErrorCode::InvalidArgument, "pure_state: zero vector");
  const CVector u = psi / norm;
  return DensityMatrix(HermitianOperator(layout, u * u.adjoint()));
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

// --- random generation ----------------------------------------------------------

namespace {

CMatrix complex_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

DensityMatrix random_density(QuditLayout layout, int rank, Rng& rng) {
  const int dim = layout.dim();
  if (rank < 1 || rank > dim) fail(ErrorCode::InvalidArgument, "random_density: rank must lie in [1, d^n]");
  const CMatrix g = complex_gaussian(dim, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(HermitianOperator(layout, 0.5 * (rho + rho.adjoint())));
}

DensityMatrix random_density(QuditLayout layout, int rank, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(layout, rank, rng);
}

HermitianOperator random_hermitian(QuditLayout layout, Rng& rng) {
  const int dim = layout.dim();
  const CMatrix g = complex_gaussian(dim, dim, rng);
  return HermitianOperator(layout, 0.5 * (g + g.adjoint()));
}

HermitianOperator random_traceless(QuditLayout layout, Rng& rng) {
  HermitianOperator h = random_hermitian(layout, rng);
  const int dim = layout.dim();
  CMatrix m = h.matrix();
  m -= CMatrix::Identity(dim, dim) * (h.trace() / dim);
  return HermitianOperator(layout, m);
}

HermitianOperator random_traceless(QuditLayout layout, std::uint64_t seed) {
  Rng rng(seed);
  return random_traceless(layout, rng);
}

CMatrix haar_unitary(int dim, Rng& rng) {
  const CMatrix g = complex_gaussian(dim, dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix column phases so the distribution is Haar.
  for (int j = 0; j < dim; ++j) {
    const Complex diag = r(j, j);
    const double a = std::abs(diag);
    if (a > 0.0) q.col(j) *= diag / a;
  }
  return q;
}

CMatrix haar_unitary(int dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

CVector random_pure_vector(int dim, Rng& rng) {
  CVector v = complex_gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

}  // namespace qw1
