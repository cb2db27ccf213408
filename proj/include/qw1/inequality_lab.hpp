#pragma once

// Both sides of the W1 inequalities on constructed and random instances, and
// the seeded battery that runs every invariant of the library.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qw1/channels.hpp"
#include "qw1/classical_ot.hpp"
#include "qw1/w1.hpp"

namespace qw1 {

inline constexpr double kCheckTolerance = 1e-7;

/// Everything needed to regenerate one battery instance.
struct InstanceDescriptor {
  int d = 2;
  int n = 1;
  int trial = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
};

struct CheckResult {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  /// rhs - lhs.
  double margin = 0.0;
  /// margin >= -kCheckTolerance (1 + |rhs|).
  bool pass = true;
  /// e.g. "infinite_relative_entropy", "marton_beats_pinsker", "error".
  std::vector<std::string> flags;
  std::string message;
  InstanceDescriptor instance;
  int index = 0;
};

CheckResult make_check(std::string name, double lhs, double rhs);

/// g(t) = (t + 1) ln(t + 1) - t ln t.
double entropy_g(double t);

/// |S(rho) - S(sigma)| <= g(W1) + W1 ln(d^2 n).
CheckResult check_entropy_continuity(const DensityMatrix& rho, const DensityMatrix& sigma,
                                     const SolverOptions& options = {});
/// ||rho - sigma||_1 <= sqrt(2 S(rho || sigma)).
CheckResult check_pinsker(const DensityMatrix& rho, const DensityMatrix& sigma);
/// ||rho - sigma||_W1 <= sqrt(n / 2 S(rho || sigma)) for sigma the product of `factors`.
CheckResult check_marton(const DensityMatrix& rho, const std::vector<DensityMatrix>& factors,
                         const SolverOptions& options = {});

/// d^-n Tr exp(t (H - Tr H / d^n)) <= exp(n t^2 ||H||_L^2 / 8).
CheckResult concentration_mgf(const HermitianOperator& h, double t, const SolverOptions& options = {});
CheckResult concentration_mgf(const HermitianOperator& h, double t, double lipschitz);
/// #{eigenvalues >= Tr H / d^n + delta sqrt(n) ||H||_L} <= d^n exp(-2 delta^2).
/// Eigenvalues within 1e-9 (1 + |threshold|) of the threshold count as reaching it.
CheckResult spectral_tail(const HermitianOperator& h, double delta, const SolverOptions& options = {});
CheckResult spectral_tail(const HermitianOperator& h, double delta, double lipschitz);

/// Names every battery run must be able to produce.
const std::vector<std::string>& required_checks();

/// Modules a suite name can select: "all" or one module name.
const std::vector<std::string>& battery_suites();

struct BatteryOptions {
  std::uint64_t seed = 42;
  int trials = 100;
  std::vector<QuditLayout> layouts = {{2, 1}, {2, 2}, {2, 3}};
  std::string suite = "all";
  SolverOptions solver;
};

struct CheckSummary {
  int count = 0;
  int failures = 0;
  double worst_margin = 0.0;
};

struct BatteryReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<QuditLayout> layouts;
  std::string suite;
  /// Ordered by check name, then instance index.
  std::vector<CheckResult> results;
  std::map<std::string, CheckSummary> summary;
  /// Required checks of the suite that no layout could exercise.
  std::vector<std::string> not_run;
  int failures = 0;
};

BatteryReport run_battery(const BatteryOptions& options);

/// Regenerates the results of the producer owning `check` for one instance.
std::vector<CheckResult> rerun_check(const std::string& check, const InstanceDescriptor& instance,
                                     const SolverOptions& options = {});

}  // namespace qw1
