#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "ming/basis_index.hpp"
#include "ming/dynamics.hpp"
#include "ming/orbit.hpp"

namespace ming {

/// How many misplaced digits a cocked amplifier may carry at size n.
struct BudgetRule {
  enum class Kind { zero, sqrt, power };

  Kind kind = Kind::sqrt;
  /// Exponent for Kind::power, in (0, 1).
  double gamma = 0.5;

  static BudgetRule zero() { return {Kind::zero, 0.0}; }
  static BudgetRule square_root() { return {Kind::sqrt, 0.5}; }
  static BudgetRule power(double gamma);

  int operator()(int n) const;
  std::string name() const;
};

struct PointerConfig {
  int n = 0;
  int defect_budget = 0;
  /// Digits below this position should be excited, the rest in the ground state.
  int half = 0;

  static PointerConfig make(int n, int defect_budget);
  static PointerConfig with_rule(int n, const BudgetRule& rule = {});
};

/// Number of digits disagreeing with the cocked pattern 1...10...0: unexcited
/// digits below `half` plus excited digits at or above it.
int defect_count(const BasisIndex& i, const PointerConfig& config);

/// The set C of cocked basis vectors psi_eps (x) |i>: those with at most
/// defect_budget defects. Membership does not depend on eps.
class CockedSet {
 public:
  explicit CockedSet(PointerConfig config);

  const PointerConfig& config() const { return config_; }
  bool contains(const BasisIndex& i) const;
  /// |1...10...0> with `half` excited low digits.
  BasisIndex canonical_state() const;
  /// Membership of each orbit member, in rotation order.
  std::vector<char> mask(const Orbit& orbit) const;
  /// |orbit intersected with C|; walks the orbit once.
  int count_on_orbit(const Orbit& orbit) const;

 private:
  PointerConfig config_;
};

enum class PointerKind {
  /// f_n(w) = 1 - sum over cocked basis vectors of |c_i|^2.
  amplitude,
  /// 0 when w lies in the span of C, 1 otherwise. Supported on a null set of
  /// each trajectory, so its averages ignore the particle's amplitudes.
  indicator,
};

/// Probability mass of a normalized state on C. Throws NotNormalized.
double cocked_mass(const CombinedState& state, const CockedSet& cocked);

/// f_n(w) = 1 - cocked_mass(w). Throws NotNormalized beyond 1e-9.
double pointer_value(const CombinedState& state, const CockedSet& cocked);

enum class AverageMethod { spectral, quadrature };

struct TimeAverageResult {
  int n = 0;
  double value = 0.0;
  AverageMethod method = AverageMethod::spectral;
  /// Members of the initial state's orbit lying in C.
  int s = 0;
  double s_over_n = 0.0;
  cdouble a0{};
  cdouble a1{};
  PointerConfig config;
};

/// Infinite-time average of f_n from (a0 psi_0 + a1 psi_1) (x) initial, where
/// initial defaults to the canonical cocked state. Because every frequency is
/// a multiple of 2 pi / n, a single period [0, n] is exact: the average uses
/// `steps` equally spaced samples (periodic trapezoid rule), which is exact
/// for steps >= n up to rounding. Throws QuadratureUnderresolved when
/// steps < 2n + 1.
TimeAverageResult time_average_quadrature(cdouble a0, cdouble a1, const PointerConfig& config,
                                          long steps, const DynamicsOptions& options = {},
                                          const std::optional<BasisIndex>& initial = {});

/// Closed-form infinite-time average. Distinct frequencies do not interfere
/// on average, so the active branch spends exactly 1/n of the time on each
/// orbit position while the idle branch stays put:
///   <f_n> = |a1|^2 (1 - s/n) + |a0|^2 [initial not in C].
TimeAverageResult time_average_spectral(cdouble a0, cdouble a1, const PointerConfig& config,
                                        const std::optional<BasisIndex>& initial = {});

/// Time average of the indicator pointer: the active branch leaves the span of
/// C for all but finitely many times per period unless its whole orbit is
/// cocked, so the average is 1 whenever a1 != 0 and s < n.
TimeAverageResult indicator_time_average(cdouble a0, cdouble a1, const PointerConfig& config);

struct SweepRow {
  TimeAverageResult spectral;
  /// Absent when n exceeds the quadrature limit.
  std::optional<double> quadrature;
  /// | <f_n> - |a1|^2 |
  double residual = 0.0;
};

struct SweepOptions {
  long steps_per_n = 10;
  /// When positive, every quadrature row uses exactly this many samples.
  long steps = 0;
  /// Rows with larger n skip the quadrature column.
  int quadrature_max_n = 2003;
  unsigned jobs = 1;
  DynamicsOptions dynamics;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  /// Residuals strictly decrease along the sweep (rows with a1 = 0 excluded).
  bool residual_decreasing = true;
};

/// One row per n (each must be prime). Rows are independent and are computed
/// on up to options.jobs threads.
SweepTable convergence_sweep(const std::vector<int>& n_list, cdouble a0, cdouble a1,
                             const BudgetRule& rule, const SweepOptions& options = {});

/// Single-site state alpha|0> + beta|1>.
struct SiteState {
  cdouble ground{1.0};
  cdouble excited{};
};

/// Product vector psi (x) v_1 (x) ... (x) v_{n0} on which the tail is appended.
struct ProductPrefix {
  std::string label;
  cdouble a0{};
  cdouble a1{1.0};
  std::vector<SiteState> sites;
};

/// f_n on prefix (x) tail^(n - n0), computed exactly: digits are independent,
/// so the defect count is a sum of independent Bernoulli variables.
double product_pointer_value(const ProductPrefix& prefix, const SiteState& tail, int n,
                             const BudgetRule& rule, PointerKind kind);

struct MacroscopicRow {
  std::string label;
  int n = 0;
  double value = 0.0;
};

struct MacroscopicReport {
  std::vector<MacroscopicRow> rows;
  int largest_n = 0;
  double spread_at_largest = 0.0;
  double tolerance = 1e-3;
  bool pass = false;
};

/// Evaluates f_n on every prefix at each size and reports the spread of the
/// values at the largest size. PASS when the spread is below tolerance.
MacroscopicReport macroscopic_check(const std::vector<ProductPrefix>& prefixes,
                                    const SiteState& tail, const std::vector<int>& sizes,
                                    const BudgetRule& rule, PointerKind kind,
                                    double tolerance = 1e-3);

/// Time averages of a pointer along a sequence of sizes, and whether their
/// distance to |a1|^2 is vanishing: the log-log slope of the residual between
/// the first and last size is below -0.25, or the last residual is below
/// 1e-12.
struct BornTrend {
  std::vector<TimeAverageResult> averages;
  std::vector<double> residuals;
  double decay_exponent = 0.0;
  bool converges = false;
};

BornTrend born_trend(cdouble a0, cdouble a1, const std::vector<int>& sizes,
                     const BudgetRule& rule, PointerKind kind);

/// The two-point limit system {P0, P1} with F the indicator of P1.
struct ClassicalLimit {
  /// Weight of P0 (no detection) and P1 (detection).
  double weight_p0 = 0.0;
  double weight_p1 = 0.0;

  double expectation_of_f() const { return weight_p1; }
};

ClassicalLimit classical_limit(cdouble a0, cdouble a1);

}  // namespace ming
