#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace toa::cli {

enum class Bound { Below, Above, Within, Info };

struct Check {
  std::string name;
  double value = 0.0;
  Bound bound = Bound::Below;
  double lo = 0.0;  // threshold for Below/Above, lower edge for Within
  double hi = 0.0;  // upper edge for Within
  bool pass = false;
  double runtime_s = 0.0;
  std::string note;

  std::string threshold_text() const;
};

/// Ordered list of checks for one command. Passing means every non-Info
/// check passed.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  Check& below(std::string name, double value, double limit, std::string note = {});
  Check& above(std::string name, double value, double limit, std::string note = {});
  Check& within(std::string name, double value, double lo, double hi, std::string note = {});
  Check& info(std::string name, double value, std::string note = {});
  /// Records a check that could not be evaluated (e.g. the library threw).
  Check& failed(std::string name, std::string note);
  /// Adds wall time to the most recently recorded check.
  void charge(double seconds);

  const std::string& command() const { return command_; }
  const std::vector<Check>& checks() const { return checks_; }
  bool pass() const;
  double total_runtime() const;

  /// Human-readable table including runtimes.
  void print(std::ostream& out) const;
  /// Deterministic JSON (no runtimes, so repeated runs are byte-identical).
  std::string to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  Check& push(Check check);

  std::string command_;
  std::vector<Check> checks_;
};

/// Measures wall time of the most recently added check.
class Stopwatch {
 public:
  Stopwatch();
  double seconds() const;
  void restart();

 private:
  long long start_ns_;
};

}  // namespace toa::cli
