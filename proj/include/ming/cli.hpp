#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ming/dynamics.hpp"
#include "ming/pointer.hpp"

namespace ming::cli {

/// Bad flags or flag values; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { orbits, evolve, converge, paradox, macro_check };
enum class Format { csv, json };

enum ExitCode : int {
  kOk = 0,
  kInvariantFailure = 1,
  kUsage = 2,
  kIoFailure = 3,
};

struct RunConfig {
  Command command = Command::converge;

  int n = 5;
  std::vector<int> n_list;

  // Normalized after parsing.
  cdouble a0{};
  cdouble a1{};
  BudgetRule budget = BudgetRule::square_root();

  // Quadrature: explicit steps override steps_per_n * n.
  long steps = 0;
  long steps_per_n = 10;
  int quadrature_max_n = 2003;
  double idle_phase_rate = 0.0;

  std::vector<double> times{1.0};

  std::vector<double> eps{0.0, 0.001, 0.01, 0.1};
  double smoothing_width = 0.0;
  double smoothing_steepness = 4.0;
  long samples = 0;
  std::uint64_t seed = 1;

  std::vector<std::string> prefixes{"", "10110", "10111"};
  std::string tail = "0";
  PointerKind pointer = PointerKind::amplitude;

  std::string output_path = "-";
  std::string plot_dir;
  Format format = Format::csv;
  bool timestamp = true;
  bool validate = false;
  unsigned jobs = 1;
};

/// Parses argv (argv[0] is the program name). Throws UsageError. Returns
/// false when help was printed to `out` and nothing should run.
bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out);

/// Runs one command and writes its artifacts. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with the exit-status mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal form that parses back to the same double; "nan" for NaN.
std::string format_double(double x);

/// Single-site state for a prefix or tail character: '0', '1', '+' or '-'.
SiteState site_from_char(char c);

}  // namespace ming::cli
