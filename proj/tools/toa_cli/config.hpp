#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toa/clifford2.hpp"
#include "toa/conjugacy.hpp"
#include "toa/dynamics.hpp"
#include "toa/phys_params.hpp"

namespace toa::cli {

struct GridSpec {
  double extent = 0.0;
  std::size_t count = 0;
};

struct NonrelSpec {
  /// Gaussian centres in units of m0 c, checked in the given order.
  std::vector<double> centers{0.01, 0.005, 0.0025};
  double relative_width = 0.125;
  /// Centre (units of m0 c) where the limit must visibly fail.
  double relativistic_center = 1.0;
};

struct FaultInjection {
  bool flip_t0_sign = false;
};

/// Fully validated run configuration. Construct through load_config /
/// apply_overrides; commands assume every invariant below already holds.
struct RunConfig {
  std::vector<std::string> pairs{"standard", "rotated"};
  std::size_t sampled_pairs = 20;
  std::uint64_t seed = 0;
  PhysParams params{};
  GridSpec momentum{20.0, 4096};
  GridSpec position{15.0, 2048};
  std::size_t time_samples = 201;
  std::vector<double> taus{1.0};
  std::vector<Branch> branches{Branch::NonNodal, Branch::Nodal};
  int lambda = 1;
  /// Gaussian momentum window for the density runs; 0 means momentum.extent / 5.
  double window_sigma = 0.0;
  /// Samples with |p| below this are left out of the eigen-residual.
  double residual_p_exclude = 0.5;
  IndexWindow solver_window{};
  GridSpec verify_grid{5.0, 8192};
  std::size_t verify_spinors = 5;
  NonrelSpec nonrel{};
  std::map<std::string, double> tolerances;
  std::filesystem::path out = "toa-out";
  bool parallel = false;
  FaultInjection faults{};

  double effective_window_sigma() const {
    return window_sigma > 0.0 ? window_sigma : momentum.extent / 5.0;
  }
  /// Tolerance for `check`, overridable from the config file.
  double tolerance(const std::string& check) const;
};

/// Flag values collected by the command line; unset fields leave the file's
/// value alone.
struct Overrides {
  std::vector<std::string> pairs;
  std::vector<double> taus;
  std::optional<std::size_t> grid_n;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool parallel = false;
};

/// Default tolerances keyed by check name.
const std::map<std::string, double>& default_tolerances();

/// Parses a JSON config (empty path gives the defaults). Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text);

/// Applies flags over the file values and re-validates. Throws ConfigError.
void apply_overrides(RunConfig& config, const Overrides& overrides);

/// Throws ConfigError on the first violated invariant.
void validate(const RunConfig& config);

/// "standard", "rotated", "generic" (uses `seed`), "generic:<seed>", or an
/// explicit "a1,a2,a3;b1,b2,b3" with exact rational entries.
ExactDiracPair resolve_pair(const std::string& spec, std::uint64_t seed);

struct NamedPair {
  std::string label;
  ExactDiracPair pair;
};

/// The listed pairs followed by `sampled_pairs` seeded ones (seed, seed+1, ...).
std::vector<NamedPair> resolve_pairs(const RunConfig& config);

}  // namespace toa::cli
