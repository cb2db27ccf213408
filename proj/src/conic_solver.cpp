#include "qw1/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Sparse>

namespace qw1 {

void LinearFunctional::add_psd(int block, int row, int col, double value) {
  if (row > col) std::swap(row, col);
  psd.push_back(SymEntry{block, row, col, value});
}

int ConicProblem::add_psd_block(int size) {
  if (size < 1) fail(ErrorCode::InvalidArgument, "PSD block size must be positive");
  psd_sizes.push_back(size);
  return static_cast<int>(psd_sizes.size()) - 1;
}

int ConicProblem::add_lp(int count) {
  const int first = lp_size;
  lp_size += count;
  return first;
}

int ConicProblem::add_free(int count) {
  const int first = free_size;
  free_size += count;
  return first;
}

int ConicProblem::add_constraint(LinearFunctional functional, double value) {
  constraints.push_back(std::move(functional));
  rhs.push_back(value);
  return static_cast<int>(constraints.size()) - 1;
}

const char* status_name(SolverStatus status) {
  switch (status) {
    case SolverStatus::Optimal: return "Optimal";
    case SolverStatus::MaxIterations: return "MaxIterations";
    case SolverStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

namespace {

// Diagonal shift, relative to the largest Schur diagonal, applied only when the
// unshifted factorization breaks down. A permanent shift biases dy once the
// NT scaling becomes ill-conditioned and caps the attainable primal residual.
constexpr double kRegularization = 1e-12;
constexpr double kPresolvePivot = 1e-10;
constexpr int kRefinementPasses = 3;

struct Trip {
  int a;
  int b;
  double v;
};

// Sorts and merges duplicate entries, dropping exact zeros.
LinearFunctional normalized(const LinearFunctional& f, const ConicProblem& p) {
  LinearFunctional out;
  std::vector<SymEntry> psd = f.psd;
  for (const auto& e : psd) {
    if (e.block < 0 || e.block >= static_cast<int>(p.psd_sizes.size())) {
      fail(ErrorCode::InvalidArgument, "functional references a missing PSD block");
    }
    const int s = p.psd_sizes[e.block];
    if (e.row < 0 || e.col < 0 || e.row >= s || e.col >= s) {
      fail(ErrorCode::IndexOutOfRange, "functional entry outside its PSD block");
    }
  }
  std::sort(psd.begin(), psd.end(), [](const SymEntry& x, const SymEntry& y) {
    if (x.block != y.block) return x.block < y.block;
    if (x.col != y.col) return x.col < y.col;
    return x.row < y.row;
  });
  for (const auto& e : psd) {
    if (!out.psd.empty() && out.psd.back().block == e.block && out.psd.back().row == e.row &&
        out.psd.back().col == e.col) {
      out.psd.back().value += e.value;
    } else {
      out.psd.push_back(e);
    }
  }
  std::erase_if(out.psd, [](const SymEntry& e) { return e.value == 0.0; });

  auto merge = [](std::vector<std::pair<int, double>> v, int limit) {
    for (const auto& [i, x] : v) {
      (void)x;
      if (i < 0 || i >= limit) fail(ErrorCode::IndexOutOfRange, "functional index outside its segment");
    }
    std::sort(v.begin(), v.end());
    std::vector<std::pair<int, double>> o;
    for (const auto& [i, x] : v) {
      if (!o.empty() && o.back().first == i) {
        o.back().second += x;
      } else {
        o.emplace_back(i, x);
      }
    }
    std::erase_if(o, [](const auto& e) { return e.second == 0.0; });
    return o;
  };
  out.lp = merge(f.lp, p.lp_size);
  out.free = merge(f.free, p.free_size);
  return out;
}

// Indices of a linearly independent subset of rows, chosen greedily in order.
struct Presolve {
  std::vector<int> kept;
  bool consistent = true;
};

Presolve presolve(const std::vector<LinearFunctional>& rows, const std::vector<double>& b,
                  const ConicProblem& p) {
  const int m = static_cast<int>(rows.size());
  std::vector<long long> offset(p.psd_sizes.size() + 1, 0);
  for (size_t k = 0; k < p.psd_sizes.size(); ++k) {
    const long long s = p.psd_sizes[k];
    offset[k + 1] = offset[k] + s * (s + 1) / 2;
  }
  const long long lp_off = offset.back();
  const long long free_off = lp_off + p.lp_size;
  const long long cols = free_off + p.free_size;

  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m; ++i) {
    for (const auto& e : rows[i].psd) {
      const long long key = offset[e.block] + static_cast<long long>(e.col) * (e.col + 1) / 2 + e.row;
      trips.emplace_back(i, static_cast<int>(key), e.row == e.col ? e.value : std::sqrt(2.0) * e.value);
    }
    for (const auto& [l, v] : rows[i].lp) trips.emplace_back(i, static_cast<int>(lp_off + l), v);
    for (const auto& [f, v] : rows[i].free) trips.emplace_back(i, static_cast<int>(free_off + f), v);
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> a(m, static_cast<Eigen::Index>(cols));
  a.setFromTriplets(trips.begin(), trips.end());
  const RMatrix gram = RMatrix(a * a.transpose());

  Presolve out;
  RMatrix l = RMatrix::Zero(m, m);
  RVector bk(m);
  int k = 0;
  for (int i = 0; i < m; ++i) {
    const double gii = gram(i, i);
    RVector li(k);
    for (int j = 0; j < k; ++j) {
      double s = gram(out.kept[j], i);
      for (int t = 0; t < j; ++t) s -= l(j, t) * li(t);
      li(j) = s / l(j, j);
    }
    const double r2 = gii - li.squaredNorm();
    if (gii > 0.0 && r2 > kPresolvePivot * gii) {
      l.row(k).head(k) = li.transpose();
      l(k, k) = std::sqrt(r2);
      bk(k) = b[i];
      out.kept.push_back(i);
      ++k;
      continue;
    }
    // Dependent row: its right-hand side must follow from the kept rows.
    double predicted = 0.0;
    if (k > 0) {
      const RVector c = l.topLeftCorner(k, k).triangularView<Eigen::Lower>().transpose().solve(li);
      predicted = c.dot(bk.head(k));
    }
    if (std::abs(b[i] - predicted) > 1e-8 * (1.0 + std::abs(b[i]) + std::abs(predicted))) {
      out.consistent = false;
    }
  }
  return out;
}

// The iteration is generic in its scalar; solve() retries in long double when
// the double run stops short of the tolerances.
template <class Real>
using MatOf = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using VecOf = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

template <class Real>
struct BlockData {
  using Mat = MatOf<Real>;
  int size = 0;
  std::vector<int> rows;
  std::vector<std::vector<Trip>> full;
  std::vector<std::vector<SymEntry>> sym;
  Mat c;
};

template <class Real>
struct Scaling {
  using Mat = MatOf<Real>;
  using Vec = VecOf<Real>;
  Mat g;
  Mat ginv;
  Mat w;
  Vec lambda;
};

template <class Real>
Real sym_dot(const std::vector<SymEntry>& entries, const MatOf<Real>& x) {
  Real s = 0.0;
  for (const auto& e : entries) s += (e.row == e.col ? 1.0 : 2.0) * e.value * x(e.row, e.col);
  return s;
}

// Largest alpha with V + alpha * D >= 0 in the scaled space (infinity if unbounded).
template <class Real>
Real max_step_psd(const VecOf<Real>& lambda, const MatOf<Real>& d) {
  const VecOf<Real> inv = lambda.cwiseSqrt().cwiseInverse();
  const MatOf<Real> t = inv.asDiagonal() * d * inv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<MatOf<Real>> es(0.5 * (t + t.transpose()), Eigen::EigenvaluesOnly);
  const Real e = es.eigenvalues()(0);
  return e < 0.0 ? -1.0 / e : std::numeric_limits<Real>::infinity();
}

template <class Real>
Real max_step_lp(const VecOf<Real>& x, const VecOf<Real>& dx) {
  Real a = std::numeric_limits<Real>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) a = std::min(a, -x(i) / dx(i));
  }
  return a;
}

template <class Real>
class Solver {
 public:
  using Mat = MatOf<Real>;
  using Vec = VecOf<Real>;

  Solver(const ConicProblem& p, const SolverOptions& o) : p_(p), opt_(o) {}

  ConicSolution run();

 private:
  struct Direction {
    std::vector<Mat> dx;
    std::vector<Mat> ds;
    Vec dx_lp;
    Vec ds_lp;
    Vec dx_free;
    Vec dy;
  };

  void setup(const std::vector<LinearFunctional>& rows, const std::vector<double>& b, const LinearFunctional& obj);
  Vec apply_a(const std::vector<Mat>& x, const Vec& xl, const Vec& xf) const;
  void apply_at(const Vec& y, std::vector<Mat>& out, Vec& out_lp, Vec& out_free) const;
  bool compute_scaling();
  bool factor();
  Vec solve_kkt(const Vec& r1, const Vec& rf, Vec& dxf) const;
  Direction direction(const std::vector<Mat>& z, const Vec& z_lp) const;

  const ConicProblem& p_;
  SolverOptions opt_;

  int m_ = 0;
  std::vector<BlockData<Real>> blocks_;
  std::vector<std::vector<std::pair<int, Real>>> lp_cols_;
  Vec c_lp_;
  Vec c_free_;
  Mat a_free_;
  Vec b_;

  std::vector<Mat> x_, s_;
  Vec x_lp_, s_lp_, x_free_, y_;

  std::vector<Scaling<Real>> sc_;
  Vec w_lp_, v_lp_;
  std::vector<Mat> rd_;
  Vec rd_lp_, rf_, rp_;

  Eigen::LLT<Mat> llt_;
  Eigen::PartialPivLU<Mat> lu_;
  bool use_lu_ = false;
};

template <class Real>
void Solver<Real>::setup(const std::vector<LinearFunctional>& rows, const std::vector<double>& b,
                   const LinearFunctional& obj) {
  m_ = static_cast<int>(rows.size());
  b_ = Eigen::Map<const RVector>(b.data(), m_).cast<Real>();
  blocks_.resize(p_.psd_sizes.size());
  for (size_t k = 0; k < blocks_.size(); ++k) {
    blocks_[k].size = p_.psd_sizes[k];
    blocks_[k].c = Mat::Zero(p_.psd_sizes[k], p_.psd_sizes[k]);
  }
  lp_cols_.assign(p_.lp_size, {});
  a_free_ = Mat::Zero(m_, p_.free_size);
  for (int i = 0; i < m_; ++i) {
    const auto& f = rows[i];
    size_t e = 0;
    while (e < f.psd.size()) {
      const int k = f.psd[e].block;
      BlockData<Real>& bd = blocks_[k];
      bd.rows.push_back(i);
      bd.full.emplace_back();
      bd.sym.emplace_back();
      for (; e < f.psd.size() && f.psd[e].block == k; ++e) {
        const SymEntry& s = f.psd[e];
        bd.sym.back().push_back(s);
        bd.full.back().push_back(Trip{s.row, s.col, s.value});
        if (s.row != s.col) bd.full.back().push_back(Trip{s.col, s.row, s.value});
      }
    }
    for (const auto& [l, v] : f.lp) lp_cols_[l].emplace_back(i, v);
    for (const auto& [j, v] : f.free) a_free_(i, j) = v;
  }
  for (const auto& e : obj.psd) {
    blocks_[e.block].c(e.row, e.col) += e.value;
    if (e.row != e.col) blocks_[e.block].c(e.col, e.row) += e.value;
  }
  c_lp_ = Vec::Zero(p_.lp_size);
  for (const auto& [l, v] : obj.lp) c_lp_(l) += v;
  c_free_ = Vec::Zero(p_.free_size);
  for (const auto& [j, v] : obj.free) c_free_(j) += v;
}

template <class Real>
typename Solver<Real>::Vec Solver<Real>::apply_a(const std::vector<Mat>& x, const Vec& xl, const Vec& xf) const {
  Vec out = Vec::Zero(m_);
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const BlockData<Real>& bd = blocks_[k];
    for (size_t r = 0; r < bd.rows.size(); ++r) out(bd.rows[r]) += sym_dot(bd.sym[r], x[k]);
  }
  for (size_t l = 0; l < lp_cols_.size(); ++l) {
    for (const auto& [i, v] : lp_cols_[l]) out(i) += v * xl(l);
  }
  if (p_.free_size > 0) out += a_free_ * xf;
  return out;
}

template <class Real>
void Solver<Real>::apply_at(const Vec& y, std::vector<Mat>& out, Vec& out_lp, Vec& out_free) const {
  out.resize(blocks_.size());
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const BlockData<Real>& bd = blocks_[k];
    out[k] = Mat::Zero(bd.size, bd.size);
    for (size_t r = 0; r < bd.rows.size(); ++r) {
      const Real yi = y(bd.rows[r]);
      for (const auto& t : bd.full[r]) out[k](t.a, t.b) += yi * t.v;
    }
  }
  out_lp = Vec::Zero(p_.lp_size);
  for (size_t l = 0; l < lp_cols_.size(); ++l) {
    for (const auto& [i, v] : lp_cols_[l]) out_lp(l) += v * y(i);
  }
  out_free = p_.free_size > 0 ? Vec(a_free_.transpose() * y) : Vec::Zero(0);
}

template <class Real>
bool Solver<Real>::compute_scaling() {
  sc_.resize(blocks_.size());
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const int n = blocks_[k].size;
    Eigen::LLT<Mat> chol(x_[k]);
    if (chol.info() != Eigen::Success) return false;
    const Mat l = chol.matrixL();
    const Mat lt_s_l = l.transpose() * s_[k] * l;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (lt_s_l + lt_s_l.transpose()));
    if (es.info() != Eigen::Success) return false;
    const Vec d = es.eigenvalues();
    if (!(d.minCoeff() > 0.0)) return false;
    const Vec q = d.array().pow(-0.25).matrix();
    Scaling<Real>& s = sc_[k];
    s.g = l * es.eigenvectors() * q.asDiagonal();
    const Mat linv = l.template triangularView<Eigen::Lower>().solve(Mat::Identity(n, n));
    s.ginv = q.cwiseInverse().asDiagonal() * es.eigenvectors().transpose() * linv;
    s.w = s.g * s.g.transpose();
    s.lambda = d.cwiseSqrt();
  }
  w_lp_ = (x_lp_.array() / s_lp_.array()).sqrt().matrix();
  v_lp_ = (x_lp_.array() * s_lp_.array()).sqrt().matrix();
  return true;
}

template <class Real>
bool Solver<Real>::factor() {
  Mat m = Mat::Zero(m_, m_);
  for (size_t k = 0; k < blocks_.size(); ++k) {
    const BlockData<Real>& bd = blocks_[k];
    const Mat& w = sc_[k].w;
    const size_t nr = bd.rows.size();
    for (size_t q = 0; q < nr; ++q) {
      const auto& aq = bd.full[q];
      for (size_t pp = 0; pp <= q; ++pp) {
        const auto& ap = bd.full[pp];
        Real s = 0.0;
        for (const auto& t : ap) {
          for (const auto& u : aq) s += t.v * u.v * w(t.a, u.a) * w(u.b, t.b);
        }
        m(bd.rows[pp], bd.rows[q]) += s;
      }
    }
  }
  for (size_t l = 0; l < lp_cols_.size(); ++l) {
    const Real w2 = w_lp_(l) * w_lp_(l);
    const auto& col = lp_cols_[l];
    for (size_t q = 0; q < col.size(); ++q) {
      for (size_t pp = 0; pp <= q; ++pp) {
        const int i = std::min(col[pp].first, col[q].first);
        const int j = std::max(col[pp].first, col[q].first);
        m(i, j) += w2 * col[pp].second * col[q].second;
      }
    }
  }
  m = m.template selfadjointView<Eigen::Upper>();
  if (!m.allFinite()) return false;
  const Real reg = kRegularization * std::max<Real>(1.0, m_ > 0 ? m.diagonal().maxCoeff() : 1.0);

  const int nf = p_.free_size;
  if (nf == 0) {
    use_lu_ = false;
    llt_.compute(m);
    if (llt_.info() == Eigen::Success) return true;
    m.diagonal().array() += reg;
    llt_.compute(m);
    if (llt_.info() == Eigen::Success) return true;
    use_lu_ = true;
    lu_.compute(m);
    return true;
  }
  Mat kkt = Mat::Zero(m_ + nf, m_ + nf);
  kkt.topLeftCorner(m_, m_) = m;
  kkt.topRightCorner(m_, nf) = a_free_;
  kkt.bottomLeftCorner(nf, m_) = a_free_.transpose();
  use_lu_ = true;
  lu_.compute(kkt);
  if (lu_.rcond() > 0 && std::isfinite(static_cast<double>(lu_.rcond()))) return true;
  kkt.topLeftCorner(m_, m_).diagonal().array() += reg;
  kkt.bottomRightCorner(nf, nf).diagonal().setConstant(-reg);
  lu_.compute(kkt);
  return true;
}

template <class Real>
typename Solver<Real>::Vec Solver<Real>::solve_kkt(const Vec& r1, const Vec& rf, Vec& dxf) const {
  const int nf = p_.free_size;
  if (nf == 0) {
    dxf = Vec::Zero(0);
    return use_lu_ ? Vec(lu_.solve(r1)) : Vec(llt_.solve(r1));
  }
  Vec rhs(m_ + nf);
  rhs << r1, rf;
  const Vec sol = lu_.solve(rhs);
  dxf = sol.tail(nf);
  return sol.head(m_);
}

template <class Real>
typename Solver<Real>::Direction Solver<Real>::direction(const std::vector<Mat>& z, const Vec& z_lp) const {
  const size_t nb = blocks_.size();
  std::vector<Mat> gzg(nb), wrw(nb);
  for (size_t k = 0; k < nb; ++k) {
    gzg[k] = sc_[k].g * z[k] * sc_[k].g.transpose();
    wrw[k] = sc_[k].w * rd_[k] * sc_[k].w;
  }
  const Vec w2 = w_lp_.cwiseProduct(w_lp_);
  const Vec gzg_lp = w_lp_.cwiseProduct(z_lp);
  const Vec wrw_lp = w2.cwiseProduct(rd_lp_);
  const Vec zero_f = Vec::Zero(p_.free_size);
  const Vec r1 = rp_ - apply_a(gzg, gzg_lp, zero_f) + apply_a(wrw, wrw_lp, zero_f);

  Direction d;
  d.dy = solve_kkt(r1, rf_, d.dx_free);
  std::vector<Mat> aty;
  Vec aty_lp, aty_f;
  // Iterative refinement against the matrix-free operator that A(dX) uses.
  const Real r_norm = std::max(r1.norm() + rf_.norm(), std::numeric_limits<Real>::min());
  for (int pass = 0;; ++pass) {
    apply_at(d.dy, aty, aty_lp, aty_f);
    std::vector<Mat> waw(nb);
    for (size_t k = 0; k < nb; ++k) waw[k] = sc_[k].w * aty[k] * sc_[k].w;
    const Vec e1 = r1 - apply_a(waw, w2.cwiseProduct(aty_lp), d.dx_free);
    const Vec ef = p_.free_size > 0 ? Vec(rf_ - aty_f) : Vec::Zero(0);
    if (pass == kRefinementPasses || e1.norm() + ef.norm() <= 1e-15 * r_norm) break;
    Vec cf;
    d.dy += solve_kkt(e1, ef, cf);
    if (p_.free_size > 0) d.dx_free += cf;
  }
  d.ds.resize(nb);
  d.dx.resize(nb);
  for (size_t k = 0; k < nb; ++k) {
    d.ds[k] = rd_[k] - aty[k];
    Mat dx = gzg[k] - sc_[k].w * d.ds[k] * sc_[k].w;
    d.dx[k] = 0.5 * (dx + dx.transpose());
  }
  d.ds_lp = rd_lp_ - aty_lp;
  d.dx_lp = gzg_lp - w2.cwiseProduct(d.ds_lp);
  return d;
}

template <class Real>
ConicSolution Solver<Real>::run() {
  ConicSolution sol;
  std::vector<LinearFunctional> all(p_.constraints.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = normalized(p_.constraints[i], p_);
  const LinearFunctional obj = normalized(p_.objective, p_);
  if (p_.rhs.size() != p_.constraints.size()) fail(ErrorCode::InvalidArgument, "rhs length mismatch");

  const Presolve pre = presolve(all, p_.rhs, p_);
  sol.removed_constraints = static_cast<int>(all.size() - pre.kept.size());
  if (!pre.consistent) {
    sol.status = SolverStatus::NumericalFailure;
    sol.message = "inconsistent equality constraints";
    return sol;
  }
  std::vector<LinearFunctional> rows;
  std::vector<double> b;
  for (int i : pre.kept) {
    rows.push_back(all[i]);
    b.push_back(p_.rhs[i]);
  }
  setup(rows, b, obj);

  const size_t nb = blocks_.size();
  const int nl = p_.lp_size;
  const int nf = p_.free_size;
  Real nu = nl;
  for (const auto& bd : blocks_) nu += bd.size;
  if (nu == 0) fail(ErrorCode::InvalidArgument, "problem has no conic variables");

  // Infeasible starting point, scaled to the data.
  x_.resize(nb);
  s_.resize(nb);
  for (size_t k = 0; k < nb; ++k) {
    const BlockData<Real>& bd = blocks_[k];
    const Real n = bd.size;
    Real xi_p = std::max<Real>(10.0, std::sqrt(n));
    Real xi_d = std::max<Real>({10.0, std::sqrt(n), bd.c.norm()});
    for (size_t r = 0; r < bd.rows.size(); ++r) {
      Real na = 0.0;
      for (const auto& t : bd.full[r]) na += t.v * t.v;
      na = std::sqrt(na);
      xi_p = std::max<Real>(xi_p, n * (1.0 + std::abs(b_(bd.rows[r]))) / (1.0 + na));
      xi_d = std::max<Real>(xi_d, na);
    }
    x_[k] = xi_p * Mat::Identity(bd.size, bd.size);
    s_[k] = xi_d * Mat::Identity(bd.size, bd.size);
  }
  {
    Real xi_p = std::max<Real>(10.0, std::sqrt(static_cast<Real>(nl)));
    Real xi_d = std::max<Real>({10.0, std::sqrt(static_cast<Real>(nl)), c_lp_.size() ? c_lp_.norm() : 0.0});
    for (int l = 0; l < nl; ++l) {
      Real na = 0.0, bmax = 0.0;
      for (const auto& [i, v] : lp_cols_[l]) {
        na += v * v;
        bmax = std::max<Real>(bmax, std::abs(b_(i)));
      }
      xi_p = std::max<Real>(xi_p, (1.0 + bmax) / (1.0 + std::sqrt(na)));
      xi_d = std::max<Real>(xi_d, std::sqrt(na));
    }
    x_lp_ = Vec::Constant(nl, xi_p);
    s_lp_ = Vec::Constant(nl, xi_d);
  }
  x_free_ = Vec::Zero(nf);
  y_ = Vec::Zero(m_);

  Real c_norm = c_lp_.squaredNorm() + c_free_.squaredNorm();
  for (const auto& bd : blocks_) c_norm += bd.c.squaredNorm();
  c_norm = std::sqrt(c_norm);
  const Real b_norm = b_.norm();

  int stalls = 0;
  sol.status = SolverStatus::MaxIterations;
  int iter = 0;
  for (;; ++iter) {
    rp_ = b_ - apply_a(x_, x_lp_, x_free_);
    std::vector<Mat> aty;
    Vec aty_lp, aty_f;
    apply_at(y_, aty, aty_lp, aty_f);
    rd_.resize(nb);
    Real rd_sq = 0.0;
    Real pobj = c_lp_.dot(x_lp_) + c_free_.dot(x_free_);
    Real comp = x_lp_.dot(s_lp_);
    for (size_t k = 0; k < nb; ++k) {
      rd_[k] = blocks_[k].c - aty[k] - s_[k];
      rd_sq += rd_[k].squaredNorm();
      pobj += blocks_[k].c.cwiseProduct(x_[k]).sum();
      comp += x_[k].cwiseProduct(s_[k]).sum();
    }
    rd_lp_ = c_lp_ - aty_lp - s_lp_;
    rf_ = c_free_ - aty_f;
    rd_sq += rd_lp_.squaredNorm() + rf_.squaredNorm();
    const Real dobj = b_.dot(y_);
    const Real pinf = rp_.norm() / (1.0 + b_norm);
    const Real dinf = std::sqrt(rd_sq) / (1.0 + c_norm);
    const Real gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const Real mu = comp / nu;

    sol.primal_value = pobj;
    sol.dual_value = dobj;
    sol.gap = gap;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    if (opt_.verbose) {
      std::fprintf(stderr, "%3d  p=% .10Le d=% .10Le gap=%.2Le pinf=%.2Le dinf=%.2Le mu=%.2Le\n", iter,
                   static_cast<long double>(pobj), static_cast<long double>(dobj), static_cast<long double>(gap),
                   static_cast<long double>(pinf), static_cast<long double>(dinf), static_cast<long double>(mu));
    }
    if (!std::isfinite(pobj) || !std::isfinite(dobj) || !std::isfinite(mu)) {
      sol.status = SolverStatus::NumericalFailure;
      sol.message = "non-finite iterate";
      break;
    }
    if (pinf <= opt_.feasibility_tolerance && dinf <= opt_.feasibility_tolerance && gap <= opt_.gap_tolerance) {
      sol.status = SolverStatus::Optimal;
      break;
    }
    if (iter >= opt_.max_iterations) {
      sol.status = SolverStatus::MaxIterations;
      sol.message = "iteration limit reached";
      break;
    }
    if (!compute_scaling() || !factor()) {
      sol.status = SolverStatus::NumericalFailure;
      sol.message = "scaling or Newton system breakdown";
      break;
    }

    // Predictor.
    std::vector<Mat> z(nb);
    for (size_t k = 0; k < nb; ++k) z[k] = Mat((-sc_[k].lambda).asDiagonal());
    Vec z_lp = -v_lp_;
    const Direction aff = direction(z, z_lp);

    auto primal_step = [&](const Direction& d) {
      Real a = max_step_lp<Real>(x_lp_, d.dx_lp);
      for (size_t k = 0; k < nb; ++k) a = std::min<Real>(a, max_step_psd<Real>(sc_[k].lambda, sc_[k].ginv * d.dx[k] * sc_[k].ginv.transpose()));
      return a;
    };
    auto dual_step = [&](const Direction& d) {
      Real a = max_step_lp<Real>(s_lp_, d.ds_lp);
      for (size_t k = 0; k < nb; ++k) a = std::min<Real>(a, max_step_psd<Real>(sc_[k].lambda, sc_[k].g.transpose() * d.ds[k] * sc_[k].g));
      return a;
    };
    const Real ap_aff = std::min<Real>(1.0, primal_step(aff));
    const Real ad_aff = std::min<Real>(1.0, dual_step(aff));
    Real comp_aff = (x_lp_ + ap_aff * aff.dx_lp).dot(s_lp_ + ad_aff * aff.ds_lp);
    for (size_t k = 0; k < nb; ++k) {
      comp_aff += (x_[k] + ap_aff * aff.dx[k]).cwiseProduct(s_[k] + ad_aff * aff.ds[k]).sum();
    }
    const Real mu_aff = comp_aff / nu;
    const Real sigma = std::clamp<Real>(std::pow(std::max<Real>(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (size_t k = 0; k < nb; ++k) {
      const Scaling<Real>& s = sc_[k];
      const Mat xh = s.ginv * aff.dx[k] * s.ginv.transpose();
      const Mat sh = s.g.transpose() * aff.ds[k] * s.g;
      Mat rhs = -0.5 * (xh * sh + sh * xh);
      rhs.diagonal().array() += sigma * mu - s.lambda.array().square();
      const int n = blocks_[k].size;
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) rhs(i, j) *= 2.0 / (s.lambda(i) + s.lambda(j));
      }
      z[k] = 0.5 * (rhs + rhs.transpose());
    }
    {
      const Vec xh = aff.dx_lp.cwiseQuotient(w_lp_);
      const Vec sh = aff.ds_lp.cwiseProduct(w_lp_);
      z_lp = ((sigma * mu - v_lp_.array().square() - xh.array() * sh.array()) / v_lp_.array()).matrix();
    }
    const Direction d = direction(z, z_lp);
    const Real tau = 0.9 + 0.09 * std::min<Real>(ap_aff, ad_aff);
    const Real ap = std::min<Real>(1.0, tau * primal_step(d));
    const Real ad = std::min<Real>(1.0, tau * dual_step(d));
    if (!std::isfinite(ap) || !std::isfinite(ad) || !d.dy.allFinite()) {
      sol.status = SolverStatus::NumericalFailure;
      sol.message = "non-finite search direction";
      break;
    }
    stalls = (ap < 1e-8 && ad < 1e-8) ? stalls + 1 : 0;
    if (stalls >= 3) {
      sol.status = SolverStatus::NumericalFailure;
      sol.message = "step length stagnation";
      break;
    }
    for (size_t k = 0; k < nb; ++k) {
      x_[k] += ap * d.dx[k];
      s_[k] += ad * d.ds[k];
      x_[k] = 0.5 * (x_[k] + x_[k].transpose()).eval();
      s_[k] = 0.5 * (s_[k] + s_[k].transpose()).eval();
    }
    x_lp_ += ap * d.dx_lp;
    s_lp_ += ad * d.ds_lp;
    x_free_ += ap * d.dx_free;
    y_ += ad * d.dy;
  }

  sol.iterations = iter;
  sol.psd.clear();
  sol.psd_slack.clear();
  for (size_t k = 0; k < nb; ++k) {
    sol.psd.push_back(x_[k].template cast<double>());
    sol.psd_slack.push_back(s_[k].template cast<double>());
  }
  sol.lp = x_lp_.template cast<double>();
  sol.lp_slack = s_lp_.template cast<double>();
  sol.free = x_free_.template cast<double>();
  sol.y = RVector::Zero(static_cast<Eigen::Index>(p_.constraints.size()));
  for (size_t r = 0; r < pre.kept.size(); ++r) sol.y(pre.kept[r]) = static_cast<double>(y_(static_cast<Eigen::Index>(r)));
  return sol;
}

}  // namespace

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
  ConicSolution sol = Solver<double>(problem, options).run();
  if (sol.status == SolverStatus::Optimal) return sol;
  ConicSolution extended = Solver<long double>(problem, options).run();
  return extended.status == SolverStatus::Optimal ? extended : sol;
}

// --- real embedding ----------------------------------------------------------

RMatrix embed_hermitian(const CMatrix& h) {
  const auto n = h.rows();
  RMatrix out(2 * n, 2 * n);
  const RMatrix a = h.real();
  const RMatrix b = h.imag();
  out.topLeftCorner(n, n) = a;
  out.topRightCorner(n, n) = -b;
  out.bottomLeftCorner(n, n) = b;
  out.bottomRightCorner(n, n) = a;
  return out;
}

CMatrix unembed_hermitian(const RMatrix& y) {
  const auto n = y.rows() / 2;
  const RMatrix a = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RMatrix b = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  CMatrix out(n, n);
  out.real() = a;
  out.imag() = b;
  return 0.5 * (out + out.adjoint());
}

void add_hermitian_functional(LinearFunctional& f, int block, const CMatrix& c, double weight) {
  const int n = static_cast<int>(c.rows());
  // Half of embed(C), symmetrized so that each stored entry covers (r, c) and (c, r).
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p < n; ++p) {
      const double re = 0.5 * (c(p, q).real() + c(q, p).real()) * 0.5 * weight;
      const double im = 0.5 * (c(p, q).imag() - c(q, p).imag()) * 0.5 * weight;
      if (p <= q && re != 0.0) {
        f.add_psd(block, p, q, re);
        f.add_psd(block, n + p, n + q, re);
      }
      // embed places -B at (p, n + q) and B at (n + p, q); only (p, n + q) with
      // its transpose partner is stored.
      if (im != 0.0) f.add_psd(block, p, n + q, -im);
    }
  }
}

std::vector<CMatrix> hermitian_basis(int dim) {
  std::vector<CMatrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < dim; ++p) {
    CMatrix e = CMatrix::Zero(dim, dim);
    e(p, p) = 1.0;
    out.push_back(e);
  }
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      CMatrix s = CMatrix::Zero(dim, dim);
      s(p, q) = r;
      s(q, p) = r;
      out.push_back(s);
      CMatrix a = CMatrix::Zero(dim, dim);
      a(p, q) = Complex(0.0, r);
      a(q, p) = Complex(0.0, -r);
      out.push_back(a);
    }
  }
  return out;
}

std::vector<CMatrix> traceless_hermitian_basis(int dim) {
  std::vector<CMatrix> out;
  for (int k = 1; k < dim; ++k) {
    CMatrix g = CMatrix::Zero(dim, dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) g(j, j) = s;
    g(k, k) = -k * s;
    out.push_back(g);
  }
  const std::vector<CMatrix> full = hermitian_basis(dim);
  out.insert(out.end(), full.begin() + dim, full.end());
  return out;
}

RVector hermitian_coordinates(const CMatrix& a) {
  const int dim = static_cast<int>(a.rows());
  RVector out(dim * dim);
  int k = 0;
  for (int p = 0; p < dim; ++p) out(k++) = a(p, p).real();
  const double r = std::sqrt(2.0);
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      const Complex h = 0.5 * (a(p, q) + std::conj(a(q, p)));
      out(k++) = r * h.real();
      out(k++) = r * h.imag();
    }
  }
  return out;
}

}  // namespace qw1
