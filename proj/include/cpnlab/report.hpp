#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpnlab {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// How a record compares estimate with reference:
//   abs       |estimate - reference| <= tolerance
//   rel       |estimate - reference| <= tolerance |reference|
//   at_least  estimate >= reference - tolerance
//   at_most   estimate <= reference + tolerance
//   above     estimate >  reference + tolerance
enum class ToleranceKind { Absolute, Relative, AtLeast, AtMost, Above };

std::string to_string(ToleranceKind k);
ToleranceKind tolerance_kind_from_string(const std::string& s);

struct ExperimentInputs {
  std::vector<std::string> maps;
  std::vector<std::uint64_t> seeds;
  std::vector<int> resolutions;
  std::map<std::string, double> parameters;
};

// One verification record. An experiment produces several, named
// "<experiment>/<check>".
struct ExperimentReport {
  std::string name;
  ExperimentInputs inputs;
  double estimate = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  ToleranceKind kind = ToleranceKind::Relative;
  bool pass = false;
  double wall_time = 0.0;
  std::string note;

  std::string experiment() const { return name.substr(0, name.find('/')); }
};

// Fills abs_error, rel_error and pass from estimate, reference, tolerance
// and kind.
void finalize(ExperimentReport& r);

struct ExperimentConfig {
  std::uint64_t seed = 7;
  // Experiment-specific size: sample count, mesh level or nodes per angle.
  std::optional<int> resolution;
  std::optional<double> p;
  // Tolerance overrides keyed by check name (the part after '/').
  std::map<std::string, double> tolerances;
  // Free numeric parameters, e.g. "Bstar" for the RP^3 interval.
  std::map<std::string, double> parameters;
};

const std::vector<std::string>& experiment_names();

// Runs one named experiment. Unknown names raise UsageError; failures inside
// the experiment become a failed "<name>/error" record.
std::vector<ExperimentReport> run_experiment(const std::string& name, const ExperimentConfig& config = {});

struct SuiteEntry {
  std::string name;
  ExperimentConfig config;
};

// JSON object mapping experiment names to parameter records:
//   {"croke": {"seed": 7, "resolution": 1000, "tolerances": {"max-rel": 1e-6}}}
// Keys keep file order.
std::vector<SuiteEntry> parse_suite(std::istream& in);
// Sequential by default; `parallel` runs experiments concurrently.
std::vector<ExperimentReport> run_suite(const std::vector<SuiteEntry>& suite, bool parallel = false);
std::vector<ExperimentReport> run_suite_file(const std::string& path, bool parallel = false);

bool all_pass(const std::vector<ExperimentReport>& reports);

// JSON array of records; `with_timing` false drops wall_time so that runs
// can be compared byte for byte.
void write_reports_json(const std::vector<ExperimentReport>& reports, std::ostream& out, bool with_timing = true);
void write_reports_csv(const std::vector<ExperimentReport>& reports, std::ostream& out);
std::vector<ExperimentReport> read_reports_json(std::istream& in);

}  // namespace cpnlab
