#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "toa/errors.hpp"
#include "toa_cli/commands.hpp"
#include "toa_cli/config.hpp"

namespace toa::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("toa-cli-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p;
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "toa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json check_named(const nlohmann::json& report, const std::string& prefix) {
  for (const auto& c : report["checks"]) {
    if (c["name"].get<std::string>().rfind(prefix, 0) == 0) return c;
  }
  ADD_FAILURE() << "no check named " << prefix;
  return {};
}

TEST(Config, DefaultsWithoutFile) {
  const RunConfig c = load_config("");
  EXPECT_EQ(c.pairs, (std::vector<std::string>{"standard", "rotated"}));
  EXPECT_EQ(c.sampled_pairs, 20u);
  EXPECT_EQ(c.momentum.count, 4096u);
  EXPECT_DOUBLE_EQ(c.effective_window_sigma(), 4.0);
  EXPECT_DOUBLE_EQ(c.tolerance("closed_form_conjugation"), 1e-6);
  EXPECT_DOUBLE_EQ(c.tolerance("leakage"), 1e-10);
  EXPECT_EQ(resolve_pairs(c).size(), 22u);
}

TEST(Config, ParsesFileValues) {
  const RunConfig c = parse_config(R"({
    "pairs": ["generic:4", "0,3/5,4/5;1,0,0"],
    "sampled_pairs": 0,
    "params": {"natural_units": false, "hbar": 2, "c": 3, "m0": 0.5},
    "momentum_grid": {"p_max": 10, "count": 1024},
    "taus": [0.5, 2],
    "branches": ["nodal"],
    "tolerances": {"closed_form_conjugation": 1e-7}
  })");
  EXPECT_DOUBLE_EQ(c.params.c, 3.0);
  EXPECT_EQ(c.branches, std::vector<Branch>{Branch::Nodal});
  EXPECT_DOUBLE_EQ(c.tolerance("closed_form_conjugation"), 1e-7);
  EXPECT_DOUBLE_EQ(c.tolerance("eigen_residual"), 1e-6);
  const auto pairs = resolve_pairs(c);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].pair, sample_dirac_pair(4));
  EXPECT_EQ(pairs[1].pair.alpha()[1], Rational(3, 5));
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW(parse_config(R"({"momentum": {}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"momentum_grid": {"p_max": 5, "size": 10}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"taus": [1.0, 0.0]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"momentum_grid": {"count": 1023}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"params": {"natural_units": false, "c": -1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"pairs": ["1,1,0;0,0,1"]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"pairs": ["diagonal"]})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"tolerances": {"made_up": 1}})"), ConfigError);
}

TEST(Config, OverridesReplaceFileValues) {
  RunConfig c = load_config("");
  Overrides o;
  o.pairs = {"rotated"};
  o.taus = {2.0};
  o.grid_n = 512;
  o.seed = 9;
  o.parallel = true;
  apply_overrides(c, o);
  EXPECT_EQ(c.pairs, std::vector<std::string>{"rotated"});
  EXPECT_EQ(c.sampled_pairs, 0u);
  EXPECT_EQ(c.taus, std::vector<double>{2.0});
  EXPECT_EQ(c.momentum.count, 512u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_TRUE(c.parallel);
  Overrides zero;
  zero.taus = {0.0};
  EXPECT_THROW(apply_overrides(c, zero), ConfigError);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"derive", "--config", "/nonexistent/file.json"}).code, 2);
  TempDir dir;
  const CliResult r = run({"nonrel", "--tau", "0", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("tau = 0"), std::string::npos);
  EXPECT_EQ(run({"derive", "--pair", "1,0,0;1,0,0", "--out", dir.path().string()}).code, 2);
  EXPECT_EQ(run({"derive", "--help"}).code, 0);
}

TEST(Cli, DeriveWritesOperators) {
  TempDir dir;
  const CliResult r = run({"derive", "--pair", "standard", "--pair", "0,1,0;0,0,1", "--out",
                           dir.path().string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const std::string ops = slurp(dir.path() / "derive-operators.txt");
  EXPECT_NE(ops.find("operator-poly v1"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "derive-report.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_EQ(report["command"], "derive");
}

TEST(Cli, ReportJsonIsDeterministic) {
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"pairs": ["rotated"], "sampled_pairs": 2,
      "momentum_grid": {"p_max": 10, "count": 1024}})");
  ASSERT_EQ(run({"parity", "--config", cfg.string(), "--out", dir.path().string()}).code, 0);
  const std::string first = slurp(dir.path() / "parity-report.json");
  ASSERT_EQ(run({"parity", "--config", cfg.string(), "--out", dir.path().string()}).code, 0);
  EXPECT_EQ(slurp(dir.path() / "parity-report.json"), first);
  const auto report = nlohmann::json::parse(first);
  EXPECT_FALSE(check_named(report, "t0_parity_closed_form").contains("runtime"));
}

TEST(Cli, FaultInjectionIsCaughtByClosedFormCheck) {
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"pairs": ["rotated"], "sampled_pairs": 0,
      "momentum_grid": {"p_max": 5, "count": 256},
      "verify": {"spinors": 1},
      "fault_injection": {"flip_t0_sign": true}})");
  const CliResult r = run({"verify", "--config", cfg.string(), "--out", dir.path().string()});
  EXPECT_EQ(r.code, 1);
  const auto report = nlohmann::json::parse(slurp(dir.path() / "verify-report.json"));
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_FALSE(check_named(report, "closed_form_conjugation")["pass"].get<bool>());
  for (const char* name : {"u_involution", "diagonalization", "du_inv_dp_fd", "phi_conjugacy",
                           "h_t0_commutator", "one_particle_leakage"}) {
    EXPECT_TRUE(check_named(report, name)["pass"].get<bool>()) << name;
  }

  // Same run without the fault passes.
  const auto clean = dir.write("clean.json", R"({"pairs": ["rotated"], "sampled_pairs": 0,
      "momentum_grid": {"p_max": 5, "count": 256}, "verify": {"spinors": 1}})");
  EXPECT_EQ(run({"verify", "--config", clean.string(), "--out", dir.path().string()}).code, 0);
}

TEST(Cli, NearSingularPointsAreReportedNotFatal) {
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"pairs": ["0,0,1;1,0,0"], "sampled_pairs": 0,
      "momentum_grid": {"p_max": 1000, "count": 2000},
      "verify": {"spinors": 1}})");
  const CliResult r = run({"verify", "--config", cfg.string(), "--out", dir.path().string()});
  EXPECT_EQ(r.code, 0) << r.out;
  const auto report = nlohmann::json::parse(slurp(dir.path() / "verify-report.json"));
  EXPECT_GT(std::stod(check_named(report, "near_singular_points")["value"].get<std::string>()), 0.0);
}

TEST(Cli, DynamicsWritesReproducibleCsv) {
  TempDir dir;
  const auto cfg = dir.write("c.json", R"({"momentum_grid": {"p_max": 10, "count": 1024},
      "position_grid": {"x_max": 15, "count": 301},
      "time_samples": 41, "window_sigma": 2})");
  const std::string out = (dir.path() / "run").string();
  const CliResult r = run({"dynamics", "--config", cfg.string(), "--out", out, "--tau", "1"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const fs::path nonnodal = fs::path(out) / "density_tau1_non-nodal.csv";
  const fs::path nodal = fs::path(out) / "density_tau1_nodal.csv";
  ASSERT_TRUE(fs::exists(nonnodal));
  ASSERT_TRUE(fs::exists(nodal));
  const std::string first = slurp(nonnodal);
  EXPECT_EQ(first.rfind("# ", 0), 0u);
  EXPECT_NE(first.find("\nx,t,rho\n"), std::string::npos);
  std::size_t rows = 0;
  for (char ch : first) rows += ch == '\n';
  EXPECT_GT(rows, 41u * 301u);

  // Re-run, in parallel this time: identical bytes.
  ASSERT_EQ(run({"dynamics", "--config", cfg.string(), "--out", out, "--tau", "1", "--parallel"})
                .code,
            0);
  EXPECT_EQ(slurp(nonnodal), first);
}

TEST(Cli, NonrelPassesOnDefaults) {
  TempDir dir;
  const CliResult r = run({"nonrel", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("ratio"), std::string::npos);
}

}  // namespace
}  // namespace toa::cli
