#include "toa_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toa/errors.hpp"
#include "toa/exact.hpp"

namespace toa::cli {

using nlohmann::json;

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table{
      {"u_involution", 1e-12},
      {"diagonalization", 1e-12},
      {"du_inv_dp_fd", 1e-8},
      {"closed_form_conjugation", 1e-6},
      {"phi_conjugacy", 1e-6},
      {"t_hat_parity", 1e-6},
      {"t0_parity_closed_form", 1e-8},
      {"eigen_residual", 1e-6},
      {"origin_density_nodal", 1e-8},
      {"unitarity", 1e-6},
      {"localization_cells", 2.0},
      {"nonrel_small", 1e-3},
      {"nonrel_ratio_spread", 0.25},
      {"nonrel_relativistic", 0.1},
      {"leakage", 1e-10},
      {"conjugation_leakage", 1e-8},
  };
  return table;
}

double RunConfig::tolerance(const std::string& check) const {
  if (auto it = tolerances.find(check); it != tolerances.end()) return it->second;
  return default_tolerances().at(check);
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

void reject_unknown(const json& object, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!object.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : object.items()) {
    if (!allowed.contains(key)) fail("unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    fail("wrong type for " + where);
  }
}

GridSpec parse_grid(const json& j, const std::string& where, const char* extent_key,
                    GridSpec base) {
  reject_unknown(j, {extent_key, "count"}, where);
  if (j.contains(extent_key)) base.extent = get<double>(j[extent_key], where + "." + extent_key);
  if (j.contains("count")) base.count = get<std::size_t>(j["count"], where + ".count");
  return base;
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"pairs", "sampled_pairs", "seed", "params", "momentum_grid", "position_grid",
                  "time_samples", "taus", "branches", "lambda", "window_sigma",
                  "residual_p_exclude", "solver_window", "verify", "nonrel", "tolerances", "out",
                  "parallel", "fault_injection"},
                 "config");

  RunConfig c;
  if (root.contains("pairs")) c.pairs = get<std::vector<std::string>>(root["pairs"], "pairs");
  if (root.contains("sampled_pairs")) {
    c.sampled_pairs = get<std::size_t>(root["sampled_pairs"], "sampled_pairs");
  }
  if (root.contains("seed")) c.seed = get<std::uint64_t>(root["seed"], "seed");
  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown(p, {"natural_units", "hbar", "c", "m0"}, "params");
    const bool natural = p.value("natural_units", false);
    if (natural && (p.contains("hbar") || p.contains("c") || p.contains("m0"))) {
      fail("params: natural_units excludes explicit hbar, c, m0");
    }
    if (!natural) {
      if (p.contains("hbar")) c.params.hbar = get<double>(p["hbar"], "params.hbar");
      if (p.contains("c")) c.params.c = get<double>(p["c"], "params.c");
      if (p.contains("m0")) c.params.m0 = get<double>(p["m0"], "params.m0");
    }
  }
  if (root.contains("momentum_grid")) {
    c.momentum = parse_grid(root["momentum_grid"], "momentum_grid", "p_max", c.momentum);
  }
  if (root.contains("position_grid")) {
    c.position = parse_grid(root["position_grid"], "position_grid", "x_max", c.position);
  }
  if (root.contains("time_samples")) {
    c.time_samples = get<std::size_t>(root["time_samples"], "time_samples");
  }
  if (root.contains("taus")) c.taus = get<std::vector<double>>(root["taus"], "taus");
  if (root.contains("branches")) {
    c.branches.clear();
    for (const auto& b : get<std::vector<std::string>>(root["branches"], "branches")) {
      c.branches.push_back(parse_branch(b));
    }
  }
  if (root.contains("lambda")) c.lambda = get<int>(root["lambda"], "lambda");
  if (root.contains("window_sigma")) c.window_sigma = get<double>(root["window_sigma"], "window_sigma");
  if (root.contains("residual_p_exclude")) {
    c.residual_p_exclude = get<double>(root["residual_p_exclude"], "residual_p_exclude");
  }
  if (root.contains("solver_window")) {
    const json& w = root["solver_window"];
    reject_unknown(w, {"m_min", "m_max", "n_max"}, "solver_window");
    if (w.contains("m_min")) c.solver_window.m_min = get<int>(w["m_min"], "solver_window.m_min");
    if (w.contains("m_max")) c.solver_window.m_max = get<int>(w["m_max"], "solver_window.m_max");
    if (w.contains("n_max")) c.solver_window.n_max = get<int>(w["n_max"], "solver_window.n_max");
  }
  if (root.contains("verify")) {
    const json& v = root["verify"];
    reject_unknown(v, {"p_max", "count", "spinors"}, "verify");
    if (v.contains("p_max")) c.verify_grid.extent = get<double>(v["p_max"], "verify.p_max");
    if (v.contains("count")) c.verify_grid.count = get<std::size_t>(v["count"], "verify.count");
    if (v.contains("spinors")) c.verify_spinors = get<std::size_t>(v["spinors"], "verify.spinors");
  }
  if (root.contains("nonrel")) {
    const json& n = root["nonrel"];
    reject_unknown(n, {"centers", "relative_width", "relativistic_center"}, "nonrel");
    if (n.contains("centers")) c.nonrel.centers = get<std::vector<double>>(n["centers"], "nonrel.centers");
    if (n.contains("relative_width")) {
      c.nonrel.relative_width = get<double>(n["relative_width"], "nonrel.relative_width");
    }
    if (n.contains("relativistic_center")) {
      c.nonrel.relativistic_center =
          get<double>(n["relativistic_center"], "nonrel.relativistic_center");
    }
  }
  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) fail("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      if (!default_tolerances().contains(key)) fail("unknown tolerance '" + key + "'");
      c.tolerances[key] = get<double>(value, "tolerances." + key);
    }
  }
  if (root.contains("out")) c.out = get<std::string>(root["out"], "out");
  if (root.contains("parallel")) c.parallel = get<bool>(root["parallel"], "parallel");
  if (root.contains("fault_injection")) {
    const json& f = root["fault_injection"];
    reject_unknown(f, {"flip_t0_sign"}, "fault_injection");
    if (f.contains("flip_t0_sign")) {
      c.faults.flip_t0_sign = get<bool>(f["flip_t0_sign"], "fault_injection.flip_t0_sign");
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  if (path.empty()) {
    RunConfig c;
    validate(c);
    return c;
  }
  std::ifstream in(path);
  if (!in) fail("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void apply_overrides(RunConfig& config, const Overrides& overrides) {
  if (!overrides.pairs.empty()) {
    config.pairs = overrides.pairs;
    config.sampled_pairs = 0;
  }
  if (!overrides.taus.empty()) config.taus = overrides.taus;
  if (overrides.grid_n) config.momentum.count = *overrides.grid_n;
  if (overrides.out) config.out = *overrides.out;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.parallel) config.parallel = true;
  validate(config);
}

void validate(const RunConfig& c) {
  c.params.validate();
  require(!c.pairs.empty() || c.sampled_pairs > 0, "no pairs selected");
  for (const auto& spec : c.pairs) resolve_pair(spec, c.seed);

  auto check_grid = [](const GridSpec& g, const std::string& name) {
    require(positive_finite(g.extent), name + " extent must be positive");
    require(g.count >= 6 && g.count % 2 == 0, name + " count must be even and at least 6");
  };
  check_grid(c.momentum, "momentum_grid");
  check_grid(c.verify_grid, "verify grid");
  require(positive_finite(c.position.extent), "position_grid x_max must be positive");
  require(c.position.count >= 3, "position_grid count must be at least 3");
  require(c.time_samples >= 3, "time_samples must be at least 3");

  require(!c.taus.empty(), "taus must not be empty");
  for (double tau : c.taus) {
    require(std::isfinite(tau), "tau must be finite");
    require(tau != 0.0, "tau = 0 is rejected: the eigenvalue must be nonzero");
  }
  require(!c.branches.empty(), "branches must not be empty");
  require(c.lambda == 1 || c.lambda == -1, "lambda must be +1 or -1");
  require(std::isfinite(c.window_sigma) && c.window_sigma >= 0.0, "window_sigma must be >= 0");
  require(std::isfinite(c.residual_p_exclude) && c.residual_p_exclude >= 0.0,
          "residual_p_exclude must be >= 0");
  require(c.solver_window.m_min <= -2 && c.solver_window.m_max >= 2 &&
              c.solver_window.n_max >= 2,
          "solver_window must cover m in [-2, 2] and n in [0, 2]");
  require(c.verify_spinors >= 1, "verify.spinors must be at least 1");

  require(!c.nonrel.centers.empty(), "nonrel.centers must not be empty");
  for (double v : c.nonrel.centers) require(positive_finite(v), "nonrel centers must be positive");
  require(positive_finite(c.nonrel.relative_width) && c.nonrel.relative_width < 1.0 / 3.0,
          "nonrel.relative_width must lie in (0, 1/3)");
  require(positive_finite(c.nonrel.relativistic_center), "nonrel.relativistic_center must be positive");
  for (const auto& [key, value] : c.tolerances) {
    require(positive_finite(value), "tolerance '" + key + "' must be positive");
  }
  require(!c.out.empty(), "out must not be empty");
}

ExactDiracPair resolve_pair(const std::string& spec, std::uint64_t seed) {
  if (spec == "standard") return standard_pair();
  if (spec == "rotated") return rotated_pair();
  if (spec == "generic") return sample_dirac_pair(seed);
  if (spec.starts_with("generic:")) {
    const std::string digits = spec.substr(8);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      fail("bad generic seed in pair '" + spec + "'");
    }
    try {
      return sample_dirac_pair(std::stoull(digits));
    } catch (const std::out_of_range&) {
      fail("generic seed out of range in pair '" + spec + "'");
    }
  }
  const auto semi = spec.find(';');
  if (semi == std::string::npos) fail("unknown pair '" + spec + "'");
  auto vector = [&](std::string_view text) {
    std::array<Rational, 3> out;
    std::size_t k = 0;
    while (true) {
      const auto comma = text.find(',');
      if (k == 3) fail("pair '" + spec + "' needs exactly three entries per vector");
      try {
        out[k++] = parse_rational(text.substr(0, comma));
      } catch (const std::invalid_argument& e) {
        fail("pair '" + spec + "': " + e.what());
      }
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    if (k != 3) fail("pair '" + spec + "' needs exactly three entries per vector");
    return out;
  };
  const std::string_view view(spec);
  try {
    return make_dirac_pair(vector(view.substr(0, semi)), vector(view.substr(semi + 1)));
  } catch (const ConstraintViolation& e) {
    fail("pair '" + spec + "' is not a Dirac pair (" + e.what() + ")");
  }
}

std::vector<NamedPair> resolve_pairs(const RunConfig& config) {
  std::vector<NamedPair> out;
  for (const auto& spec : config.pairs) out.push_back({spec, resolve_pair(spec, config.seed)});
  for (std::size_t k = 0; k < config.sampled_pairs; ++k) {
    const std::uint64_t s = config.seed + k;
    out.push_back({"generic:" + std::to_string(s), sample_dirac_pair(s)});
  }
  return out;
}

}  // namespace toa::cli
