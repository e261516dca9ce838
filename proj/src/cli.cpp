#include "ming/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ming/errors.hpp"
#include "ming/measurement.hpp"
#include "ming/orbit.hpp"
#include "ming/validation.hpp"

namespace ming::cli {

namespace {

using json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rows of a CSV file plus deterministic comment lines written after the
/// optional timestamp.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
};

struct Artifact {
  Table table;
  json document;
  /// Two-column plot files, keyed by file name.
  std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> plots;
  /// Invariant violations found while running; nonempty means exit 1.
  std::vector<std::string> failures;
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

json index_json(const BasisIndex& i) {
  if (i.fits_u64()) return i.to_u64();
  return i.digits();
}

const char* command_name(Command c) {
  switch (c) {
    case Command::orbits:
      return "orbits";
    case Command::evolve:
      return "evolve";
    case Command::converge:
      return "converge";
    case Command::paradox:
      return "paradox";
    case Command::macro_check:
      return "macro-check";
  }
  return "?";
}

json amplitude_json(cdouble z) { return json::array({z.real(), z.imag()}); }

json inputs_json(const RunConfig& c) {
  json j;
  j["a0"] = amplitude_json(c.a0);
  j["a1"] = amplitude_json(c.a1);
  j["budget_rule"] = c.budget.name();
  return j;
}

long quadrature_steps(const RunConfig& c, int n) {
  return c.steps > 0 ? c.steps : std::max(c.steps_per_n * n, 2L * n + 1);
}

// ---------------------------------------------------------------------------

Artifact run_orbits(const RunConfig& c) {
  const auto d = decompose(c.n);
  Artifact a;
  a.table.columns = {"kind", "representative", "length", "members"};
  a.table.comments = {"n=" + std::to_string(d.n), "q=" + std::to_string(d.q)};
  json orbits = json::array();
  for (const auto& o : d.orbits) {
    std::vector<std::string> members;
    json jm = json::array();
    for (const auto& m : o.members()) {
      members.push_back(m.to_string());
      jm.push_back(index_json(m));
    }
    a.table.rows.push_back({"orbit", o.representative().to_string(), std::to_string(o.length()),
                            join(members, ' ')});
    orbits.push_back({{"representative", index_json(o.representative())},
                      {"length", o.length()},
                      {"members", jm}});
  }
  json fixed = json::array();
  for (const auto& f : d.fixed_points) {
    a.table.rows.push_back({"fixed", f.to_string(), "1", f.to_string()});
    fixed.push_back(index_json(f));
  }
  a.document["n"] = d.n;
  a.document["q"] = d.q;
  a.document["fixed_points"] = fixed;
  a.document["orbits"] = orbits;
  return a;
}

Artifact run_evolve(const RunConfig& c) {
  Artifact a;
  const auto config = PointerConfig::with_rule(c.n, c.budget);
  const CockedSet cocked(config);
  const auto start = CombinedState::prepared(c.a0, c.a1, cocked.canonical_state());
  const DynamicsOptions options{c.idle_phase_rate};

  a.table.columns = {"t", "branch", "position", "index", "re", "im", "probability", "cocked",
                     "pointer_value"};
  a.document["n"] = c.n;
  a.document["inputs"] = inputs_json(c);
  a.document["defect_budget"] = config.defect_budget;
  json snapshots = json::array();

  for (double t : c.times) {
    const auto state = evolve_combined(start, t, options);
    const double norm = state.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
      a.failures.push_back("norm drifted to " + format_double(norm) + " at t=" + format_double(t));
    }
    const double f = pointer_value(state, cocked);
    json amps = json::array();
    for (int branch = 0; branch < 2; ++branch) {
      const BranchState& b = branch == 0 ? state.branch0 : state.branch1;
      const cdouble weight = branch == 0 ? state.a0 : state.a1;
      for (const auto& o : b.orbits) {
        const auto mask = cocked.mask(o.orbit);
        BasisIndex index = o.orbit.representative();
        for (std::size_t j = 0; j < o.amplitudes.size(); ++j) {
          const cdouble z = weight * o.amplitudes[j];
          a.table.rows.push_back({format_double(t), std::to_string(branch), std::to_string(j),
                                  index.to_string(), format_double(z.real()),
                                  format_double(z.imag()), format_double(std::norm(z)),
                                  mask[j] ? "1" : "0", format_double(f)});
          amps.push_back({{"branch", branch},
                          {"position", j},
                          {"index", index_json(index)},
                          {"re", z.real()},
                          {"im", z.imag()},
                          {"probability", std::norm(z)},
                          {"cocked", mask[j] != 0}});
          index = rotate(index);
        }
      }
    }
    snapshots.push_back({{"t", t}, {"norm", norm}, {"pointer_value", f}, {"amplitudes", amps}});
  }
  a.document["snapshots"] = snapshots;

  if (!c.plot_dir.empty()) {
    const long samples = quadrature_steps(c, c.n);
    std::vector<std::pair<double, double>> trajectory;
    for (long k = 0; k <= samples; ++k) {
      const double t = c.n * static_cast<double>(k) / static_cast<double>(samples);
      trajectory.emplace_back(t, pointer_value(evolve_combined(start, t, options), cocked));
    }
    a.plots.emplace_back("pointer_trajectory.dat", std::move(trajectory));
  }
  return a;
}

Artifact run_converge(const RunConfig& c) {
  Artifact a;
  SweepOptions options;
  options.steps_per_n = c.steps_per_n;
  options.steps = c.steps;
  options.quadrature_max_n = c.quadrature_max_n;
  options.jobs = c.jobs;
  options.dynamics.idle_phase_rate = c.idle_phase_rate;
  const SweepTable sweep = convergence_sweep(c.n_list, c.a0, c.a1, c.budget, options);

  const double p1 = std::norm(c.a1);
  a.table.columns = {"n", "s", "s_over_n", "avg_spectral", "avg_quadrature", "residual"};
  json rows = json::array();
  std::vector<std::pair<double, double>> plot;
  for (const auto& row : sweep.rows) {
    const auto& r = row.spectral;
    a.table.rows.push_back({std::to_string(r.n), std::to_string(r.s), format_double(r.s_over_n),
                            format_double(r.value),
                            row.quadrature ? format_double(*row.quadrature) : std::string(),
                            format_double(row.residual)});
    rows.push_back({{"n", r.n},
                    {"s", r.s},
                    {"s_over_n", r.s_over_n},
                    {"avg_spectral", r.value},
                    {"avg_quadrature", row.quadrature ? json(*row.quadrature) : json(nullptr)},
                    {"residual", row.residual},
                    {"defect_budget", r.config.defect_budget}});
    plot.emplace_back(r.n, r.value);

    if (row.quadrature && std::abs(*row.quadrature - r.value) > 1e-8) {
      a.failures.push_back("n=" + std::to_string(r.n) + ": quadrature and spectral averages differ by " +
                           format_double(std::abs(*row.quadrature - r.value)));
    }
    if (std::abs(row.residual - p1 * r.s_over_n) > 1e-12) {
      a.failures.push_back("n=" + std::to_string(r.n) + ": residual departs from |a1|^2 s/n");
    }
  }
  a.document["inputs"] = inputs_json(c);
  a.document["target"] = p1;
  a.document["residual_decreasing"] = sweep.residual_decreasing;
  a.document["rows"] = rows;
  a.table.comments = {"target=" + format_double(p1),
                      std::string("residual_decreasing=") + (sweep.residual_decreasing ? "true" : "false")};
  a.plots.emplace_back("converge.dat", std::move(plot));
  return a;
}

Artifact run_paradox(const RunConfig& c) {
  Artifact a;
  const auto rows = paradox_scan(c.eps);
  const bool smoothing = c.smoothing_width > 0.0;
  const SmoothingModel model{c.smoothing_width, c.smoothing_steepness};

  a.table.columns = {"eps", "num_outcomes", "outcome_probabilities", "expectation_r"};
  if (smoothing) {
    a.table.columns.push_back("smoothed_r");
    a.table.comments.push_back("smoothed_r: " + std::string(SmoothingModel::kDescription));
  }
  if (c.samples > 0) a.table.columns.push_back("sampled_r");

  const auto psi = paradox_state();
  const auto witness = witness_observable();
  json jrows = json::array();
  std::vector<std::pair<double, double>> step;
  for (const auto& row : rows) {
    std::vector<std::string> probs;
    json jout = json::array();
    double total = 0.0;
    for (const auto& o : row.outcomes) {
      probs.push_back(format_double(o.probability));
      jout.push_back({{"eigenvalue", o.eigenvalue}, {"probability", o.probability}});
      total += o.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      a.failures.push_back("eps=" + format_double(row.eps) + ": outcome probabilities sum to " +
                           format_double(total));
    }
    std::vector<std::string> cells = {format_double(row.eps), std::to_string(row.outcomes.size()),
                                      join(probs, ';'), format_double(row.expectation_r)};
    json jrow = {{"eps", row.eps}, {"outcomes", jout}, {"expectation_r", row.expectation_r}};
    if (smoothing) {
      const double v = model(row.eps);
      cells.push_back(format_double(v));
      jrow["smoothed_r"] = v;
    }
    if (c.samples > 0) {
      const double v = sampled_expectation_after(psi, first_spin_observable(row.eps), witness,
                                                 c.samples, c.seed);
      cells.push_back(format_double(v));
      jrow["sampled_r"] = v;
    }
    a.table.rows.push_back(std::move(cells));
    jrows.push_back(std::move(jrow));
    step.emplace_back(row.eps, row.expectation_r);
  }
  a.document["rows"] = jrows;
  if (smoothing) {
    a.document["smoothing"] = {{"width", model.width},
                               {"steepness", model.steepness},
                               {"model", SmoothingModel::kDescription}};
    a.plots.emplace_back("smoothing.dat", smoothing_scan(c.eps, model));
  }
  if (c.samples > 0) a.document["sampler"] = {{"samples", c.samples}, {"seed", c.seed}};
  a.plots.emplace_back("paradox.dat", std::move(step));
  return a;
}

Artifact run_macro_check(const RunConfig& c) {
  Artifact a;
  std::vector<ProductPrefix> prefixes;
  for (const auto& p : c.prefixes) {
    ProductPrefix prefix{p.empty() ? "tail-only" : p, c.a0, c.a1, {}};
    for (char ch : p) prefix.sites.push_back(site_from_char(ch));
    prefixes.push_back(std::move(prefix));
  }
  const SiteState tail = site_from_char(c.tail.front());
  const auto report = macroscopic_check(prefixes, tail, c.n_list, c.budget, c.pointer);
  const auto trend = born_trend(c.a0, c.a1, c.n_list, c.budget, c.pointer);
  const char* pointer = c.pointer == PointerKind::amplitude ? "amplitude" : "indicator";

  a.table.columns = {"kind", "label", "n", "value"};
  json product = json::array();
  for (const auto& row : report.rows) {
    a.table.rows.push_back({"product", row.label, std::to_string(row.n), format_double(row.value)});
    product.push_back({{"label", row.label}, {"n", row.n}, {"value", row.value}});
  }
  json averages = json::array();
  for (std::size_t k = 0; k < trend.averages.size(); ++k) {
    const auto& r = trend.averages[k];
    a.table.rows.push_back({"time_average", pointer, std::to_string(r.n), format_double(r.value)});
    averages.push_back({{"n", r.n}, {"value", r.value}, {"residual", trend.residuals[k]}});
  }
  const auto largest = std::to_string(report.largest_n);
  a.table.rows.push_back({"summary", "spread", largest, format_double(report.spread_at_largest)});
  a.table.rows.push_back({"summary", "macroscopic", largest, report.pass ? "1" : "0"});
  a.table.rows.push_back({"summary", "born_converges", largest, trend.converges ? "1" : "0"});

  a.document["pointer"] = pointer;
  a.document["inputs"] = inputs_json(c);
  a.document["tail"] = c.tail;
  a.document["product_values"] = product;
  a.document["spread_at_largest"] = report.spread_at_largest;
  a.document["tolerance"] = report.tolerance;
  a.document["macroscopic"] = report.pass;
  a.document["time_averages"] = averages;
  a.document["target"] = std::norm(c.a1);
  a.document["decay_exponent"] = trend.decay_exponent;
  a.document["born_converges"] = trend.converges;
  if (!report.pass) {
    a.failures.push_back("prefix spread " + format_double(report.spread_at_largest) +
                         " exceeds tolerance at n=" + largest);
  }
  return a;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& os, const Table& t, const std::string& stamp) {
  if (!stamp.empty()) os << "# generated: " << stamp << '\n';
  for (const auto& c : t.comments) os << "# " << c << '\n';
  os << join(t.columns, ',') << '\n';
  for (const auto& r : t.rows) os << join(r, ',') << '\n';
}

void write_json(std::ostream& os, const json& body, const std::string& stamp) {
  json doc;
  if (!stamp.empty()) doc["generated"] = stamp;
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  os << doc.dump(2) << '\n';
}

void write_plots(const std::string& dir, const Artifact& a) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create plot directory " + dir + ": " + ec.message());
  for (const auto& [name, points] : a.plots) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path.string());
    for (const auto& [x, y] : points) f << format_double(x) << ' ' << format_double(y) << '\n';
    if (!f) throw IoError("write failed for " + path.string());
  }
}

std::vector<int> dense_sizes(const RunConfig& c) {
  if (c.command == Command::converge) return c.n_list;
  if (c.command == Command::orbits || c.command == Command::evolve) return {c.n};
  return {};
}

void validate_sizes(const std::vector<int>& sizes, const char* flag) {
  if (sizes.empty()) throw UsageError(std::string(flag) + " must not be empty");
  for (int n : sizes) {
    if (!is_prime(n)) throw UsageError(std::string(flag) + ": " + std::to_string(n) + " is not prime");
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

SiteState site_from_char(char c) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (c) {
    case '0':
      return {1.0, 0.0};
    case '1':
      return {0.0, 1.0};
    case '+':
      return {r, r};
    case '-':
      return {r, -r};
    default:
      throw UsageError(std::string("site states are 0, 1, + or -; got '") + c + "'");
  }
}

bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out) {
  CLI::App app{"Simulator for the Ming amplifier measurement model"};
  app.require_subcommand(1);

  double p1 = 0.3;
  double phase = 0.0;
  std::vector<double> a0_pair;
  std::vector<double> a1_pair;
  std::string budget = "sqrt";
  double gamma = 0.5;
  std::string format = "csv";
  std::string pointer = "amplitude";
  bool no_timestamp = false;
  std::vector<int> n_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output,-o", config.output_path, "Output file, '-' for stdout")
        ->capture_default_str();
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp line");
    sub->add_option("--plot-dir", config.plot_dir, "Directory for two-column plot data files");
  };
  auto add_amplitudes = [&](CLI::App* sub) {
    sub->add_option("--p1", p1, "Detection probability |a1|^2")->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    sub->add_option("--phase", phase, "Relative phase of a1 (radians)")->capture_default_str();
    sub->add_option("--a0", a0_pair, "Explicit amplitude a0 as re,im")->delimiter(',')->expected(2);
    sub->add_option("--a1", a1_pair, "Explicit amplitude a1 as re,im")->delimiter(',')->expected(2);
  };
  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--budget", budget, "Defect budget rule")
        ->check(CLI::IsMember({"zero", "sqrt", "power"}))
        ->capture_default_str();
    sub->add_option("--gamma", gamma, "Exponent for --budget power, in (0,1)")->capture_default_str();
  };
  auto add_dynamics = [&](CLI::App* sub) {
    sub->add_option("--steps", config.steps, "Quadrature samples per period (overrides --steps-per-n)");
    sub->add_option("--steps-per-n", config.steps_per_n, "Quadrature samples per oscillator")
        ->capture_default_str();
    sub->add_option("--idle-phase-rate", config.idle_phase_rate,
                    "Constant phase rate on the undetected branch");
    sub->add_flag("--validate", config.validate, "Run dense cross-checks for n <= 12");
  };

  auto* orbits = app.add_subcommand("orbits", "List the rotation orbits of n-bit strings");
  orbits->add_option("--n", config.n, "Number of oscillators (prime)")->required();
  orbits->add_flag("--validate", config.validate, "Run dense cross-checks for n <= 12");
  add_common(orbits);

  auto* evolve = app.add_subcommand("evolve", "Evolve the cocked state and print amplitudes");
  evolve->add_option("--n", config.n, "Number of oscillators (prime)")->required();
  evolve->add_option("--t", config.times, "Times to report")->delimiter(',');
  add_amplitudes(evolve);
  add_budget(evolve);
  add_dynamics(evolve);
  add_common(evolve);

  auto* converge = app.add_subcommand("converge", "Time-averaged pointer values over a sweep of n");
  converge->add_option("--n-list", n_list, "Prime sizes")->delimiter(',')->required();
  converge->add_option("--quadrature-max-n", config.quadrature_max_n,
                       "Largest n for the quadrature column")
      ->capture_default_str();
  converge->add_option("--jobs,-j", config.jobs, "Rows evaluated in parallel")->capture_default_str();
  add_amplitudes(converge);
  add_budget(converge);
  add_dynamics(converge);
  add_common(converge);

  auto* paradox = app.add_subcommand("paradox", "Expectation of R after measuring Q_eps");
  paradox->add_option("--eps", config.eps, "Perturbation grid")->delimiter(',');
  paradox->add_option("--smoothing-width", config.smoothing_width,
                      "Width of the illustrative smoothing curve (0 disables)");
  paradox->add_option("--smoothing-steepness", config.smoothing_steepness)->capture_default_str();
  paradox->add_option("--samples", config.samples, "Monte Carlo samples per eps (0 disables)");
  paradox->add_option("--seed", config.seed, "Sampler seed")->capture_default_str();
  add_common(paradox);

  auto* macro = app.add_subcommand("macro-check", "Prefix independence of f_n on product states");
  macro->add_option("--n-list", n_list, "Sizes")->delimiter(',');
  macro->add_option("--prefix", config.prefixes, "Prefix site string over {0,1,+,-}; repeatable");
  macro->add_option("--tail", config.tail, "Tail site state")->capture_default_str();
  macro->add_option("--pointer", pointer, "Pointer variable")
      ->check(CLI::IsMember({"amplitude", "indicator"}))
      ->capture_default_str();
  add_amplitudes(macro);
  add_budget(macro);
  add_common(macro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, out);
    return false;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, out);
    return false;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (orbits->parsed()) config.command = Command::orbits;
  if (evolve->parsed()) config.command = Command::evolve;
  if (converge->parsed()) config.command = Command::converge;
  if (paradox->parsed()) config.command = Command::paradox;
  if (macro->parsed()) config.command = Command::macro_check;

  config.format = format == "json" ? Format::json : Format::csv;
  config.timestamp = !no_timestamp;
  config.pointer = pointer == "indicator" ? PointerKind::indicator : PointerKind::amplitude;

  if (budget == "zero") {
    config.budget = BudgetRule::zero();
  } else if (budget == "power") {
    if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("--gamma must lie in (0, 1)");
    config.budget = BudgetRule::power(gamma);
  } else {
    config.budget = BudgetRule::square_root();
  }

  if (!a0_pair.empty() || !a1_pair.empty()) {
    if (a0_pair.size() != 2 || a1_pair.size() != 2) throw UsageError("--a0 and --a1 go together");
    const cdouble a0{a0_pair[0], a0_pair[1]};
    const cdouble a1{a1_pair[0], a1_pair[1]};
    const double norm = std::sqrt(std::norm(a0) + std::norm(a1));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw UsageError("amplitudes must not both vanish");
    config.a0 = a0 / norm;
    config.a1 = a1 / norm;
  } else {
    config.a0 = std::sqrt(1.0 - p1);
    config.a1 = std::polar(std::sqrt(p1), phase);
  }

  switch (config.command) {
    case Command::orbits:
      validate_sizes({config.n}, "--n");
      if (config.n > kDecomposeCap) {
        throw UsageError("orbits lists every index and is limited to n <= " +
                         std::to_string(kDecomposeCap));
      }
      break;
    case Command::evolve:
      validate_sizes({config.n}, "--n");
      if (config.times.empty()) throw UsageError("--t must not be empty");
      break;
    case Command::converge:
      config.n_list = n_list;
      validate_sizes(config.n_list, "--n-list");
      if (config.steps_per_n < 1) throw UsageError("--steps-per-n must be positive");
      if (config.jobs < 1) throw UsageError("--jobs must be positive");
      break;
    case Command::paradox:
      for (double e : config.eps) {
        if (!(e >= 0.0)) throw UsageError("--eps values must be nonnegative");
      }
      if (std::find(config.eps.begin(), config.eps.end(), 0.0) == config.eps.end() ||
          std::count_if(config.eps.begin(), config.eps.end(), [](double e) { return e > 0.0; }) < 2) {
        throw UsageError("--eps must contain 0 and at least two positive values");
      }
      if (config.smoothing_width < 0.0) throw UsageError("--smoothing-width must be >= 0");
      break;
    case Command::macro_check:
      config.n_list = n_list.empty() ? std::vector<int>{101, 211, 401} : n_list;
      validate_sizes(config.n_list, "--n-list");
      if (config.n_list.size() < 2) throw UsageError("--n-list needs at least two sizes");
      if (config.tail.size() != 1) throw UsageError("--tail is a single site character");
      site_from_char(config.tail.front());
      for (const auto& p : config.prefixes) {
        for (char ch : p) site_from_char(ch);
        if (static_cast<int>(p.size()) > *std::min_element(config.n_list.begin(), config.n_list.end())) {
          throw UsageError("prefix '" + p + "' is longer than the smallest size");
        }
      }
      break;
  }
  return true;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Artifact artifact;
  try {
    if (config.validate) {
      const double times[] = {0.25, 0.5, 1.0, 1.7, 3.3};
      for (int n : dense_sizes(config)) {
        if (n > kDenseValidationCap) {
          err << "validate: skipping dense check for n=" << n << " (above " << kDenseValidationCap
              << ")\n";
          continue;
        }
        const auto report = dense_check(n, times);
        if (!report.pass) {
          artifact.failures.push_back(
              "dense check failed for n=" + std::to_string(n) + " (cycle error " +
              format_double(report.cycle_error) + ", evolve error " + format_double(report.evolve_error) + ")");
        }
      }
    }

    Artifact produced;
    switch (config.command) {
      case Command::orbits:
        produced = run_orbits(config);
        break;
      case Command::evolve:
        produced = run_evolve(config);
        break;
      case Command::converge:
        produced = run_converge(config);
        break;
      case Command::paradox:
        produced = run_paradox(config);
        break;
      case Command::macro_check:
        produced = run_macro_check(config);
        break;
    }
    produced.failures.insert(produced.failures.begin(), artifact.failures.begin(),
                             artifact.failures.end());
    artifact = std::move(produced);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInvariantFailure;
  }

  json body;
  body["command"] = command_name(config.command);
  for (auto it = artifact.document.begin(); it != artifact.document.end(); ++it) {
    body[it.key()] = it.value();
  }
  const std::string stamp = config.timestamp ? utc_timestamp() : std::string();

  try {
    std::ostringstream buffer;
    if (config.format == Format::json) {
      write_json(buffer, body, stamp);
    } else {
      write_csv(buffer, artifact.table, stamp);
    }
    if (config.output_path == "-") {
      out << buffer.str();
    } else {
      std::ofstream f(config.output_path);
      if (!f) throw IoError("cannot open " + config.output_path);
      f << buffer.str();
      if (!f) throw IoError("write failed for " + config.output_path);
    }
    if (!config.plot_dir.empty()) write_plots(config.plot_dir, artifact);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  }

  for (const auto& f : artifact.failures) err << "invariant failure: " << f << '\n';
  return artifact.failures.empty() ? kOk : kInvariantFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    if (!parse_args(argc, argv, config, out)) return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return run(config, out, err);
}

}  // namespace ming::cli
