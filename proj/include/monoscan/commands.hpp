#ifndef MONOSCAN_COMMANDS_HPP_
#define MONOSCAN_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monoscan/calibration.hpp"
#include "monoscan/experiments.hpp"
#include "monoscan/statistics.hpp"

namespace monoscan {

// Process exit codes. The test decision is reported in the output file, not
// through the exit status.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitIo = 4,
};

enum class ThresholdSource { table, analytic };

struct TestReport {
  Model model = Model::regression;
  std::size_t n = 0;       // sample size (regression) or coarse grid size (white)
  std::size_t grid_n = 0;  // number of coarse cells actually scanned
  double alpha = 0.0;
  double threshold = 0.0;
  ThresholdSource threshold_source = ThresholdSource::table;
  double statistic = 0.0;
  bool reject = false;
  std::vector<IntervalStat> violating;
  std::string input_digest;
};

struct CalibrateOptions {
  Model model = Model::white;
  std::size_t n = 0;
  std::size_t r = 1000;
  std::size_t reps = 5000;
  std::vector<double> alphas;
  std::uint64_t seed = 1;
  std::string out;
};

struct TestOptions {
  Model model = Model::regression;
  std::string data;
  double alpha = 0.05;
  std::optional<std::string> table;
  bool analytic = false;
  std::optional<double> sigma;
  std::optional<std::size_t> n;
  std::string out;
};

struct PowerOptions {
  std::string scenario;
  std::string table;
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

struct BoundOptions {
  double alpha = 0.05;
  std::size_t n = 0;
  std::optional<double> beta;
};

// One value per line, optional `value` header, blank lines ignored.
std::vector<double> read_values_csv(const std::string& path);
void write_values_csv(const std::string& path, const std::vector<double>& values);

// "sha256:<hex>" of the file contents.
std::string file_digest(const std::string& path);

QuantileTable read_quantile_table(const std::string& path);

std::string to_json(const TestReport& report);
std::string to_json(const std::vector<PowerReport>& reports);
std::string to_csv(const std::vector<PowerReport>& reports);

QuantileTable cmd_calibrate(const CalibrateOptions& options, std::ostream& out);
TestReport cmd_test(const TestOptions& options, std::ostream& out);
std::vector<PowerReport> cmd_power(const PowerOptions& options, std::ostream& out);
void cmd_bound(const BoundOptions& options, std::ostream& out);

// Entry point of the `monoscan` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monoscan

#endif  // MONOSCAN_COMMANDS_HPP_
