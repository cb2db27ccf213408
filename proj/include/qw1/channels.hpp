#pragma once

// Quantum channels in Kraus form, their norms, and W1 contraction bounds.

#include <optional>
#include <string>
#include <vector>

#include "qw1/conic_solver.hpp"
#include "qw1/tensor_ops.hpp"
#include "qw1/w1.hpp"

namespace qw1 {

inline constexpr double kTracePreservingTol = 1e-9;
inline constexpr double kUnitaryTol = 1e-9;
inline constexpr double kFixedPointTol = 1e-8;

/// Completely positive trace-preserving map on a fixed qudit layout
/// (input and output layouts coincide).
class KrausChannel {
 public:
  KrausChannel() = default;
  /// Rejects empty lists, wrong sizes and sum K^dag K != I beyond 1e-9.
  KrausChannel(QuditLayout layout, std::vector<CMatrix> kraus);

  const QuditLayout& layout() const { return layout_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  int dim() const { return layout_.dim(); }

 private:
  QuditLayout layout_;
  std::vector<CMatrix> kraus_;
};

HermitianOperator apply(const KrausChannel& phi, const HermitianOperator& x);
CMatrix apply_matrix(const KrausChannel& phi, const CMatrix& x);
/// Adjoint map Y -> sum K^dag Y K.
CMatrix apply_adjoint(const KrausChannel& phi, const CMatrix& y);
/// Applies a one-qudit channel to qudit i (1-based) of x.
HermitianOperator apply_on_qudit(const KrausChannel& phi, const HermitianOperator& x, int i);

/// J = sum_ij Phi(|i><j|) (x) |i><j| on output (x) reference.
HermitianOperator choi(const KrausChannel& phi, int cap = kDefaultDimCap);
KrausChannel tensor_power(const KrausChannel& phi, int copies, int cap = kDefaultDimCap);
/// Composition: first `first`, then `second`.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

/// A state with Phi(omega) = omega, from an eigenvector of the transfer matrix
/// at eigenvalue 1; NoFixedPoint if none is positive semidefinite.
DensityMatrix fixed_point(const KrausChannel& phi);

KrausChannel identity_channel(QuditLayout layout);
/// Decay probability 1 - p on a qubit.
KrausChannel amplitude_damping(double p);
/// X -> p X + (1 - p) omega Tr X.
KrausChannel depolarizing(double p, const DensityMatrix& omega);
KrausChannel replacer(const DensityMatrix& omega);
KrausChannel unitary_channel(QuditLayout layout, const CMatrix& u);
/// Stinespring dilation of a Haar isometry with the given Kraus rank.
KrausChannel random_channel(QuditLayout layout, int kraus_rank, Rng& rng);

/// The Hermiticity-preserving difference plus - minus.
struct ChannelDifference {
  KrausChannel plus;
  KrausChannel minus;
};

CMatrix apply_matrix(const ChannelDifference& f, const CMatrix& x);
HermitianOperator choi(const ChannelDifference& f, int cap = kDefaultDimCap);

struct NormSearchOptions {
  int starts = 64;
  int grid_points = 10000;
  std::uint64_t seed = 1;
  int max_ascent_steps = 500;
};

struct OneToOneNorm {
  double value = 0.0;
  CVector maximizer;
  /// Grid coverage at d = 2; otherwise a multistart lower estimate.
  bool grid_search = false;
};

/// max over states rho of ||F(rho)||_1 (attained on pure states).
OneToOneNorm one_to_one_norm(const ChannelDifference& f, const NormSearchOptions& options = {});

struct DiamondNorm {
  double value = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

DiamondNorm diamond_norm(const ChannelDifference& f, const SolverOptions& options = {}, int cap = kDefaultDimCap);

struct TraceContraction {
  double value = 0.0;
  CVector first;
  CVector second;
};

/// max over orthogonal pure pairs of 1/2 ||Phi(psi psi^dag - phi phi^dag)||_1,
/// the trace-distance contraction coefficient.
TraceContraction trace_contraction(const KrausChannel& phi, const NormSearchOptions& options = {});

/// Some q with Phi(T) = q T for every traceless T, if one exists.
std::optional<double> depolarizing_parameter(const KrausChannel& phi, double tol = 1e-9);

struct ContractionReport {
  int n = 1;
  DensityMatrix omega;
  double one_to_one = 0.0;
  double diamond = 0.0;
  /// 1/2 ||Phi - E||_{1->1}, realized by lower_witness.
  double lower = 0.0;
  HermitianOperator lower_witness;
  /// ||Phi^{(x)n}(lower_witness)||_W1.
  double lower_witness_value = 0.0;
  /// max ||Phi^{(x)n}(X)||_W1 / ||X||_W1 over the product witnesses.
  double best_lower = 0.0;
  HermitianOperator best_witness;
  /// d ||Phi - E||_{1->1}, which dominates the diamond norm.
  double closed_form_upper = 0.0;
  std::optional<double> depolarizing;
  /// min(1, diamond, depolarizing parameter).
  double upper = 1.0;
  std::optional<double> exact;
  std::vector<std::string> methods;
};

ContractionReport tensor_power_contraction_bounds(const KrausChannel& phi, int n, const SolverOptions& solver = {},
                                                  const NormSearchOptions& search = {},
                                                  int cap = kDefaultDimCap);

struct EmpiricalContraction {
  double value = 0.0;
  int samples = 0;
  int best_sample = -1;
  int best_qudit = 0;
};

/// max over sampled neighboring pairs (rho, sigma) of W1(Phi(rho), Phi(sigma)) / W1(rho, sigma).
EmpiricalContraction empirical_contraction(const KrausChannel& phi, int samples, std::uint64_t seed,
                                           const SolverOptions& options = {});

struct Gate {
  std::vector<int> support;
  CMatrix unitary;
};

struct Circuit {
  int d = 2;
  int n = 1;
  std::vector<Gate> gates;

  /// Validates supports and unitarity.
  static Circuit make(int d, int n, std::vector<Gate> gates, int cap = kDefaultDimCap);
};

CMatrix circuit_unitary(const Circuit& c);
KrausChannel circuit_channel(const Circuit& c);

struct LightCones {
  /// cones[i-1]: output qudits reachable from input qudit i, sorted.
  std::vector<std::vector<int>> cones;
  double bound = 0.0;
};

LightCones light_cone_bound(const Circuit& c);

/// Layers alternate gates on (1,2),(3,4),... and (2,3),(4,5),...; Haar gates.
Circuit random_brickwork(int d, int n, int depth, std::uint64_t seed, int cap = kDefaultDimCap);

}  // namespace qw1
