#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "msmm/cli.hpp"

namespace fs = std::filesystem;
using msmm::cli::run;

namespace {

const fs::path kSource = MSMM_SOURCE_DIR;

std::string fixture(const std::string& name) { return (kSource / "data" / name).string(); }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("msmm_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<std::string> fixture_args(const std::string& command, const fs::path& out) {
  return {command,
          "--tabulation", fixture("fixture/tabulation.csv"),
          "--adjacency", fixture("fixture/adjacency.csv"),
          "--population", fixture("fixture/population.csv"),
          "--out", out.string()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int lines(const fs::path& p) {
  const auto text = slurp(p);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

int call(std::vector<std::string> args, std::initializer_list<std::string> extra,
         std::string* err_text = nullptr) {
  args.insert(args.end(), extra);
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("fit msm on the bundled fixture") {
  const auto out = scratch("fit_msm");
  REQUIRE(call(fixture_args("fit", out),
               {"--model", "msm", "--iterations", "600", "--burn_in", "200"}) == 0);
  CHECK(lines(out / "predictions.csv") == 1 + 30);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["config"]["model"] == "msm");
  CHECK(manifest["inputs"].contains("tabulation"));
  CHECK(manifest["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("fit is reproducible byte for byte") {
  const auto a = scratch("fit_det_a"), b = scratch("fit_det_b");
  for (const auto& out : {a, b})
    REQUIRE(call(fixture_args("fit", out), {"--iterations", "300", "--burn_in", "100",
                                            "--chains", "2", "--seed", "9", "--write_draws",
                                            "true"}) == 0);
  for (const char* name : {"predictions.csv", "diagnostics.json", "draws_chain1.csv",
                           "draws_chain2.csv"})
    CHECK(slurp(a / name) == slurp(b / name));
}

TEST_CASE("msmm with two chains reports PSRF for alpha and sigma2_eta") {
  const auto out = scratch("fit_psrf");
  REQUIRE(call(fixture_args("fit", out), {"--model", "msmm", "--chains", "2", "--iterations",
                                          "600", "--burn_in", "200", "--gelman_rubin", "true",
                                          "--write_draws", "true"}) == 0);
  const auto diag = nlohmann::json::parse(slurp(out / "diagnostics.json"));
  int found = 0, entries = 0;
  for (const auto& p : diag["parameters"]) {
    const auto name = p["name"].get<std::string>();
    if (name == "alpha" || name == "sigma2_eta") {
      CHECK(p["psrf"].is_number());
      ++found;
    }
    if (name.rfind("y[", 0) == 0) ++entries;
  }
  CHECK(found == 2);
  CHECK(entries == 5);

  const auto again = scratch("diagnose");
  REQUIRE(call({"diagnose", "--draws", (out / "draws_chain1.csv").string(), "--draws",
                (out / "draws_chain2.csv").string(), "--out", again.string()},
               {}) == 0);
  const auto recomputed = nlohmann::json::parse(slurp(again / "diagnostics.json"));
  for (const auto& p : recomputed["parameters"])
    if (p["name"] == "alpha")
      for (const auto& q : diag["parameters"])
        if (q["name"] == "alpha")
          CHECK(p["psrf"].get<double>() == doctest::Approx(q["psrf"].get<double>()));
}

TEST_CASE("configuration errors exit with the config status") {
  const auto out = scratch("errors");
  std::string err;
  auto args = fixture_args("fit", out);
  args[4] = fixture("fixture/missing.csv");
  CHECK(call(args, {}, &err) == msmm::cli::kConfigExit);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(call(fixture_args("fit", out), {"--chains", "1", "--gelman_rubin", "true"}) ==
        msmm::cli::kConfigExit);
  CHECK(call(fixture_args("fit", out), {"--model", "glm"}) == msmm::cli::kConfigExit);
  CHECK(call({"fit", "--no-such-flag"}, {}) == msmm::cli::kConfigExit);
  CHECK(call(fixture_args("simulate", out), {"--replicates", "0"}) == msmm::cli::kConfigExit);
}

TEST_CASE("basis report and cache determinism") {
  const auto a = scratch("basis_a"), b = scratch("basis_b");
  REQUIRE(call(fixture_args("basis", a), {}) == 0);
  REQUIRE(call(fixture_args("basis", b), {}) == 0);
  const auto ra = nlohmann::json::parse(slurp(a / "basis_report.json"));
  const auto rb = nlohmann::json::parse(slurp(b / "basis_report.json"));
  CHECK(ra["rank"].get<int>() == std::max(1, ra["positive_count"].get<int>() / 2));
  CHECK(ra["cache_fnv1a"] == rb["cache_fnv1a"]);
  CHECK(ra["max_abs_psi_t_x"].get<double>() < 1e-8);
  CHECK(slurp(a / "basis.bin") == slurp(b / "basis.bin"));
}

TEST_CASE("intercept-free ring design surfaces a definiteness error") {
  const auto out = scratch("ring");
  std::string err;
  const int code = call({"basis", "--config", fixture("ring/run.cfg"), "--tabulation",
                         fixture("ring/tabulation.csv"), "--adjacency",
                         fixture("ring/adjacency.csv"), "--out", out.string()},
                        {}, &err);
  CHECK(code == msmm::cli::kNumericalExit);
  CHECK(err.find("intercept") != std::string::npos);
}

TEST_CASE("simulate smoke run") {
  const auto a = scratch("sim_a"), b = scratch("sim_b");
  for (const auto& out : {a, b})
    REQUIRE(call(fixture_args("simulate", out), {"--replicates", "2", "--iterations", "300",
                                                 "--burn_in", "100", "--seed", "4"}) == 0);
  CHECK(lines(a / "study.csv") == 1 + 4);
  CHECK(slurp(a / "study.csv") == slurp(b / "study.csv"));
  CHECK(slurp(a / "study_summary.csv") == slurp(b / "study_summary.csv"));
}

TEST_CASE("config file values apply and flags override them") {
  const auto out = scratch("config");
  const auto cfg = out.string() + ".cfg";
  {
    std::ofstream f(cfg);
    f << "tabulation = " << fixture("fixture/tabulation.csv") << "\n"
      << "adjacency = " << fixture("fixture/adjacency.csv") << "\n"
      << "population = " << fixture("fixture/population.csv") << "\n"
      << "model = fh\niterations = 300\nburn_in = 100\nseed = 3\n";
  }
  REQUIRE(call({"fit", "--config", cfg, "--seed", "11", "--out", out.string()}, {}) == 0);
  const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["config"]["model"] == "fh");
  CHECK(manifest["config"]["iterations"] == "300");
  CHECK(manifest["seed"] == 11);
  fs::remove(cfg);
}
