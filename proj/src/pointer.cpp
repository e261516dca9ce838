#include "ming/pointer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "ming/errors.hpp"

namespace ming {

namespace {

constexpr double kNormTolerance = 1e-9;

void require_normalized_pair(cdouble a0, cdouble a1) {
  const double total = std::norm(a0) + std::norm(a1);
  if (std::abs(total - 1.0) > kNormTolerance) throw NotNormalized(std::sqrt(total));
}

// Masks of the cocked positions for each tracked orbit of a branch.
struct BranchMasks {
  std::vector<std::vector<char>> orbit_masks;
  bool zeros_cocked = false;
  bool ones_cocked = false;
};

BranchMasks masks_for(const BranchState& branch, const CockedSet& cocked) {
  BranchMasks m;
  const int n = cocked.config().n;
  m.zeros_cocked = cocked.contains(BasisIndex::zeros(n));
  m.ones_cocked = cocked.contains(BasisIndex::ones(n));
  for (const auto& o : branch.orbits) m.orbit_masks.push_back(cocked.mask(o.orbit));
  return m;
}

double branch_cocked_mass(const BranchState& branch, const BranchMasks& masks) {
  double mass = 0.0;
  if (masks.zeros_cocked) mass += std::norm(branch.all_zeros);
  if (masks.ones_cocked) mass += std::norm(branch.all_ones);
  for (std::size_t k = 0; k < branch.orbits.size(); ++k) {
    const auto& amps = branch.orbits[k].amplitudes;
    const auto& mask = masks.orbit_masks[k];
    for (std::size_t j = 0; j < amps.size(); ++j) {
      if (mask[j]) mass += std::norm(amps[j]);
    }
  }
  return mass;
}

double masked_mass(const CombinedState& state, const BranchMasks& m0, const BranchMasks& m1) {
  return std::norm(state.a0) * branch_cocked_mass(state.branch0, m0) +
         std::norm(state.a1) * branch_cocked_mass(state.branch1, m1);
}

void check_state(const CombinedState& state, const CockedSet& cocked) {
  if (state.n != cocked.config().n) throw std::invalid_argument("state and cocked set sizes differ");
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) throw NotNormalized(norm);
}

BasisIndex initial_or_canonical(const std::optional<BasisIndex>& initial, const CockedSet& c) {
  if (!initial) return c.canonical_state();
  if (initial->size() != c.config().n) throw std::invalid_argument("initial state has wrong size");
  return *initial;
}

// |orbit of i intersected with C| and the orbit length; fixed points are
// their own length-one orbits.
std::pair<int, int> cocked_share(const BasisIndex& i, const CockedSet& cocked) {
  if (i.is_fixed_point()) return {cocked.contains(i) ? 1 : 0, 1};
  const Orbit orbit = orbit_of(i);
  return {cocked.count_on_orbit(orbit), orbit.length()};
}

}  // namespace

BudgetRule BudgetRule::power(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("budget exponent must lie in (0, 1)");
  return {Kind::power, gamma};
}

int BudgetRule::operator()(int n) const {
  switch (kind) {
    case Kind::zero:
      return 0;
    case Kind::sqrt:
      return static_cast<int>(std::sqrt(static_cast<double>(n)));
    case Kind::power:
      return static_cast<int>(std::floor(std::pow(static_cast<double>(n), gamma)));
  }
  return 0;
}

std::string BudgetRule::name() const {
  switch (kind) {
    case Kind::zero:
      return "zero";
    case Kind::sqrt:
      return "sqrt";
    case Kind::power:
      return "power:" + std::to_string(gamma);
  }
  return "?";
}

PointerConfig PointerConfig::make(int n, int defect_budget) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (defect_budget < 0) throw std::invalid_argument("defect budget must be nonnegative");
  return {n, defect_budget, (n + 1) / 2};
}

PointerConfig PointerConfig::with_rule(int n, const BudgetRule& rule) {
  return make(n, rule(n));
}

int defect_count(const BasisIndex& i, const PointerConfig& config) {
  if (i.size() != config.n) throw std::invalid_argument("index size differs from pointer config");
  const auto words = i.words();
  int defects = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const int lo = static_cast<int>(k) * 64;
    const int hi = std::min(lo + 64, config.n);
    const int width = hi - lo;
    const std::uint64_t valid = width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
    // Positions below `half` in this word.
    const int low_bits = std::clamp(config.half - lo, 0, width);
    const std::uint64_t low =
        low_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << low_bits) - 1;
    const std::uint64_t high = valid & ~low;
    defects += std::popcount(~words[k] & low) + std::popcount(words[k] & high);
  }
  return defects;
}

CockedSet::CockedSet(PointerConfig config) : config_(config) {}

bool CockedSet::contains(const BasisIndex& i) const {
  return defect_count(i, config_) <= config_.defect_budget;
}

BasisIndex CockedSet::canonical_state() const {
  BasisIndex out(config_.n);
  for (int p = 0; p < config_.half; ++p) out.set_bit(p, true);
  return out;
}

std::vector<char> CockedSet::mask(const Orbit& orbit) const {
  std::vector<char> m(static_cast<std::size_t>(orbit.length()));
  BasisIndex cur = orbit.representative();
  for (auto& bit : m) {
    bit = contains(cur) ? 1 : 0;
    cur = rotate(cur);
  }
  return m;
}

int CockedSet::count_on_orbit(const Orbit& orbit) const {
  const auto m = mask(orbit);
  return static_cast<int>(std::count(m.begin(), m.end(), 1));
}

double cocked_mass(const CombinedState& state, const CockedSet& cocked) {
  check_state(state, cocked);
  return masked_mass(state, masks_for(state.branch0, cocked), masks_for(state.branch1, cocked));
}

double pointer_value(const CombinedState& state, const CockedSet& cocked) {
  return 1.0 - cocked_mass(state, cocked);
}

TimeAverageResult time_average_quadrature(cdouble a0, cdouble a1, const PointerConfig& config,
                                          long steps, const DynamicsOptions& options,
                                          const std::optional<BasisIndex>& initial) {
  require_normalized_pair(a0, a1);
  const long required = 2L * config.n + 1;
  if (steps < required) throw QuadratureUnderresolved(steps, required);

  const CockedSet cocked(config);
  const BasisIndex apparatus = initial_or_canonical(initial, cocked);
  const CombinedState start = CombinedState::prepared(a0, a1, apparatus);
  check_state(start, cocked);
  const BranchMasks m0 = masks_for(start.branch0, cocked);
  const BranchMasks m1 = masks_for(start.branch1, cocked);

  const double period = config.n;
  double sum = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double t = period * static_cast<double>(k) / static_cast<double>(steps);
    sum += 1.0 - masked_mass(evolve_combined(start, t, options), m0, m1);
  }

  const auto [s, length] = cocked_share(apparatus, cocked);
  TimeAverageResult r;
  r.n = config.n;
  r.value = sum / static_cast<double>(steps);
  r.method = AverageMethod::quadrature;
  r.s = s;
  r.s_over_n = static_cast<double>(s) / length;
  r.a0 = a0;
  r.a1 = a1;
  r.config = config;
  return r;
}

TimeAverageResult time_average_spectral(cdouble a0, cdouble a1, const PointerConfig& config,
                                        const std::optional<BasisIndex>& initial) {
  require_normalized_pair(a0, a1);
  const CockedSet cocked(config);
  const BasisIndex start = initial_or_canonical(initial, cocked);
  const auto [s, length] = cocked_share(start, cocked);
  const double idle = cocked.contains(start) ? 0.0 : std::norm(a0);

  TimeAverageResult r;
  r.n = config.n;
  r.s = s;
  r.s_over_n = static_cast<double>(s) / length;
  r.value = std::norm(a1) * (1.0 - r.s_over_n) + idle;
  r.method = AverageMethod::spectral;
  r.a0 = a0;
  r.a1 = a1;
  r.config = config;
  return r;
}

TimeAverageResult indicator_time_average(cdouble a0, cdouble a1, const PointerConfig& config) {
  require_normalized_pair(a0, a1);
  const CockedSet cocked(config);
  const auto [s, length] = cocked_share(cocked.canonical_state(), cocked);

  TimeAverageResult r;
  r.n = config.n;
  r.s = s;
  r.s_over_n = static_cast<double>(s) / length;
  r.value = (std::norm(a1) > 0.0 && s < length) ? 1.0 : 0.0;
  r.method = AverageMethod::spectral;
  r.a0 = a0;
  r.a1 = a1;
  r.config = config;
  return r;
}

SweepTable convergence_sweep(const std::vector<int>& n_list, cdouble a0, cdouble a1,
                             const BudgetRule& rule, const SweepOptions& options) {
  require_normalized_pair(a0, a1);
  for (int n : n_list) {
    if (!is_prime(n)) throw NonPrimeN(n);
  }

  SweepTable table;
  table.rows.resize(n_list.size());
  const double target = std::norm(a1);

  auto compute = [&](std::size_t k) {
    const auto config = PointerConfig::with_rule(n_list[k], rule);
    SweepRow row;
    row.spectral = time_average_spectral(a0, a1, config);
    row.residual = std::abs(row.spectral.value - target);
    if (n_list[k] <= options.quadrature_max_n) {
      const long steps = options.steps > 0
                             ? options.steps
                             : std::max(options.steps_per_n * n_list[k], 2L * n_list[k] + 1);
      row.quadrature = time_average_quadrature(a0, a1, config, steps, options.dynamics).value;
    }
    table.rows[k] = std::move(row);
  };

  const unsigned workers =
      std::clamp<unsigned>(options.jobs, 1U, static_cast<unsigned>(std::max<std::size_t>(1, n_list.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < n_list.size(); ++k) compute(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < n_list.size(); k = next++) compute(k);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (target > 0.0) {
    for (std::size_t k = 1; k < table.rows.size(); ++k) {
      if (!(table.rows[k].residual < table.rows[k - 1].residual)) table.residual_decreasing = false;
    }
  }
  return table;
}

double product_pointer_value(const ProductPrefix& prefix, const SiteState& tail, int n,
                             const BudgetRule& rule, PointerKind kind) {
  const int n0 = static_cast<int>(prefix.sites.size());
  if (n < n0) throw std::invalid_argument("size is smaller than the prefix");
  require_normalized_pair(prefix.a0, prefix.a1);
  auto site_at = [&](int p) -> const SiteState& { return p < n0 ? prefix.sites[static_cast<std::size_t>(p)] : tail; };
  for (int p = 0; p < std::min(n, n0 + 1); ++p) {
    const auto& v = site_at(p);
    const double norm = std::norm(v.ground) + std::norm(v.excited);
    if (std::abs(norm - 1.0) > kNormTolerance) throw NotNormalized(std::sqrt(norm));
  }

  const auto config = PointerConfig::with_rule(n, rule);
  const auto budget = static_cast<std::size_t>(config.defect_budget);
  // dist[d] = P(defects so far == d), truncated at the budget.
  std::vector<double> dist(budget + 1, 0.0);
  dist[0] = 1.0;
  for (int p = 0; p < n; ++p) {
    const auto& v = site_at(p);
    const double q = p < config.half ? std::norm(v.ground) : std::norm(v.excited);
    for (std::size_t d = budget + 1; d-- > 0;) {
      dist[d] = dist[d] * (1.0 - q) + (d > 0 ? dist[d - 1] * q : 0.0);
    }
  }
  double mass = 0.0;
  for (double x : dist) mass += x;
  mass *= std::norm(prefix.a0) + std::norm(prefix.a1);

  if (kind == PointerKind::indicator) return mass >= 1.0 - 1e-12 ? 0.0 : 1.0;
  return 1.0 - mass;
}

MacroscopicReport macroscopic_check(const std::vector<ProductPrefix>& prefixes,
                                    const SiteState& tail, const std::vector<int>& sizes,
                                    const BudgetRule& rule, PointerKind kind,
                                    double tolerance) {
  if (prefixes.empty() || sizes.empty()) {
    throw std::invalid_argument("macroscopic check needs prefixes and sizes");
  }
  MacroscopicReport report;
  report.tolerance = tolerance;
  report.largest_n = *std::max_element(sizes.begin(), sizes.end());
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (int n : sizes) {
    for (const auto& prefix : prefixes) {
      const double v = product_pointer_value(prefix, tail, n, rule, kind);
      report.rows.push_back({prefix.label, n, v});
      if (n == report.largest_n) {
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
      }
    }
  }
  report.spread_at_largest = hi - lo;
  report.pass = report.spread_at_largest < tolerance;
  return report;
}

BornTrend born_trend(cdouble a0, cdouble a1, const std::vector<int>& sizes,
                     const BudgetRule& rule, PointerKind kind) {
  if (sizes.size() < 2) throw std::invalid_argument("need at least two sizes for a trend");
  BornTrend trend;
  const double target = std::norm(a1);
  for (int n : sizes) {
    if (!is_prime(n)) throw NonPrimeN(n);
    const auto config = PointerConfig::with_rule(n, rule);
    auto r = kind == PointerKind::amplitude ? time_average_spectral(a0, a1, config)
                                            : indicator_time_average(a0, a1, config);
    trend.residuals.push_back(std::abs(r.value - target));
    trend.averages.push_back(r);
  }
  const double first = trend.residuals.front();
  const double last = trend.residuals.back();
  if (last < 1e-12) {
    trend.converges = true;
  } else if (first > 0.0) {
    trend.decay_exponent = std::log(last / first) /
                           std::log(static_cast<double>(sizes.back()) / sizes.front());
    trend.converges = trend.decay_exponent < -0.25;
  }
  return trend;
}

ClassicalLimit classical_limit(cdouble a0, cdouble a1) {
  require_normalized_pair(a0, a1);
  return {std::norm(a0), std::norm(a1)};
}

}  // namespace ming
