#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

std::string cli_path() {
#ifdef SUMMAKIT_CLI_PATH
  return SUMMAKIT_CLI_PATH;
#else
  const char* p = std::getenv("SUMMAKIT_CLI_PATH");
  REQUIRE(p != nullptr);
  return p;
#endif
}

fs::path scratch_root() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("summakit_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the tool through the shell with stdout/stderr captured. The
// default-N environment variable is cleared unless the caller sets it.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out_file = scratch_root() / ("stdout_" + std::to_string(counter) + ".txt");
  const fs::path err_file = scratch_root() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string env = env_prefix.empty() ? "env -u SUMMAKIT_DEFAULT_N " : env_prefix + " ";
  const std::string cmd = env + cli_path() + " " + args + " >" + out_file.string() + " 2>" +
                          err_file.string();
  const int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string fresh_dir(const std::string& name) {
  const fs::path p = scratch_root() / name;
  fs::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(contains(run_cli("--help").out, "finite-prefix experiments"));
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("summability --bogus 1").exit_code == 1);
  CHECK(run_cli("check-class --N 64 --out " + fresh_dir("noscen")).exit_code == 1);
  CHECK(run_cli("summability --matrix frob --N 16 --out " + fresh_dir("badmat")).exit_code == 1);
  CHECK(run_cli("summability --seed zz --N 16 --out " + fresh_dir("badseed")).exit_code == 1);
  CHECK(run_cli("check-class --scenario lemma9 --out " + fresh_dir("badscen")).exit_code == 1);
  CHECK(run_cli("summability --preset nope --N 16").exit_code == 1);
  CHECK(run_cli("validate").exit_code == 1);
}

TEST_CASE("scenario run writes certificates and reports the verdict") {
  const std::string dir = fresh_dir("thmA_rhaly");
  const auto r = run_cli("check-class --scenario thmA --matrix rhaly --t 0.5 --N 64 --M 256 "
                         "--out " + dir);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.out, "scenario thmA: violated"));
  CHECK(contains(r.out, "TA_ii: violated"));
  CHECK(fs::exists(fs::path(dir) / "scenario_thmA.json"));
  for (const char* id : {"TA_i", "TA_ii", "TA_vii", "TA_viii"}) {
    CHECK(fs::exists(fs::path(dir) / ("cert_" + std::string(id) + ".json")));
  }

  const auto v = run_cli("validate " + dir + "/scenario_thmA.json " + dir +
                         "/cert_TA_ii.json");
  CHECK(v.exit_code == 0);
  CHECK(contains(v.out, "scenario_thmA.json: ok"));
  CHECK(contains(v.out, "cert_TA_ii.json: ok"));
}

TEST_CASE("a certified bundle exits zero") {
  const std::string dir = fresh_dir("lemma1");
  const auto r = run_cli("check-class --scenario lemma1 --matrix cesaro --alpha 1 "
                         "--N 128 --M 512 --out " + dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "scenario lemma1: supported"));
}

TEST_CASE("an undersized run is honestly inconclusive and a longer one settles") {
  const std::string dir = fresh_dir("lemma4");
  const auto small = run_cli("check-class --scenario lemma4 --matrix riesz --pn ones "
                             "--N 64 --M 256 --out " + dir);
  CHECK(small.exit_code == 3);
  const auto large = run_cli("check-class --scenario lemma4 --matrix riesz --pn ones "
                             "--N 512 --M 2048 --out " + dir);
  CHECK(large.exit_code == 0);
  CHECK(contains(large.out, "scenario lemma4: supported"));
}

TEST_CASE("summability prints a one-line json summary") {
  const std::string dir = fresh_dir("alt");
  const auto r = run_cli("summability --terms alternating --matrix cesaro --alpha 1 "
                         "--lambda one --X one --N 512 --out " + dir);
  CHECK(r.exit_code == 3);
  REQUIRE(!r.out.empty());
  const std::string line = r.out.substr(0, r.out.find('\n'));
  CHECK(line.front() == '{');
  CHECK(line.back() == '}');
  CHECK(contains(line, "\"type\": \"summability-report\""));
  CHECK(contains(line, "\"terms\": \"alternating\""));
  CHECK(contains(line, "\"prefix\": 512"));
  CHECK(contains(line, "\"total\": 1.5689910293510445"));
  CHECK(contains(line, "\"verdict\": \"inconclusive\""));

  const auto v = run_cli("validate " + dir + "/summability.json " + dir + "/summability.csv");
  CHECK(v.exit_code == 0);

  // A tampered row turns validation into a nonzero exit.
  const fs::path broken = fs::path(dir) / "broken.csv";
  std::string csv = slurp(fs::path(dir) / "summability.csv");
  csv += "99,0,0,0,0,0,0,0,0,0\n";
  std::ofstream(broken, std::ios::binary) << csv;
  CHECK(run_cli("validate " + broken.string()).exit_code == 2);
}

TEST_CASE("default prefix comes from the environment unless overridden") {
  const std::string base = "summability --terms ones --lambda one --X one --out ";

  const auto env_only = run_cli(base + fresh_dir("env1"), "SUMMAKIT_DEFAULT_N=96");
  CHECK(contains(env_only.out, "\"prefix\": 96"));

  const fs::path cfg = scratch_root() / "n48.cfg";
  std::ofstream(cfg) << "# comment line\nN = 48\n";
  const auto with_cfg = run_cli(base + fresh_dir("env2") + " --config " + cfg.string(),
                                "SUMMAKIT_DEFAULT_N=96");
  CHECK(contains(with_cfg.out, "\"prefix\": 48"));

  const auto with_flag = run_cli(base + fresh_dir("env3") + " --config " + cfg.string() +
                                     " --N 24",
                                 "SUMMAKIT_DEFAULT_N=96");
  CHECK(contains(with_flag.out, "\"prefix\": 24"));

  const auto bad_env = run_cli(base + fresh_dir("env4"), "SUMMAKIT_DEFAULT_N=abc");
  CHECK(bad_env.exit_code == 1);
  CHECK(contains(bad_env.err, "malformed SUMMAKIT_DEFAULT_N"));
}

TEST_CASE("config files reject unknown keys and bad values") {
  const fs::path bad_key = scratch_root() / "bad_key.cfg";
  std::ofstream(bad_key) << "bogus = 1\n";
  const auto r1 = run_cli("summability --config " + bad_key.string());
  CHECK(r1.exit_code == 1);
  CHECK(contains(r1.err, "unknown config key 'bogus'"));

  const fs::path bad_num = scratch_root() / "bad_num.cfg";
  std::ofstream(bad_num) << "N = soon\n";
  CHECK(run_cli("summability --config " + bad_num.string()).exit_code == 1);

  CHECK(run_cli("summability --config " + (scratch_root() / "absent.cfg").string())
            .exit_code == 1);
}

TEST_CASE("seeded runs are reproducible byte for byte") {
  const std::string dir1 = fresh_dir("seed_a");
  const std::string dir2 = fresh_dir("seed_b");
  const std::string args = "summability --terms seeded --seed 0x2A --lambda one --X one "
                           "--N 32 --out ";
  const auto r1 = run_cli(args + dir1);
  const auto r2 = run_cli(args + dir2);
  CHECK(r1.exit_code == r2.exit_code);
  CHECK(r1.out == r2.out);
  const std::string csv1 = slurp(fs::path(dir1) / "summability.csv");
  const std::string csv2 = slurp(fs::path(dir2) / "summability.csv");
  REQUIRE(!csv1.empty());
  CHECK(csv1 == csv2);
  CHECK(slurp(fs::path(dir1) / "summability.json") == slurp(fs::path(dir2) / "summability.json"));

  // A different seed changes the data.
  const std::string dir3 = fresh_dir("seed_c");
  run_cli("summability --terms seeded --seed 7 --lambda one --X one --N 32 --out " + dir3);
  CHECK(slurp(fs::path(dir3) / "summability.csv") != csv1);
}

TEST_CASE("the demo preset runs the localized comparison to a flat verdict") {
  const std::string dir = fresh_dir("demo");
  const auto r = run_cli("local-experiment --preset mohanty-demo --out " + dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "local-experiment: flat"));
  CHECK(fs::exists(fs::path(dir) / "experiment.json"));
  const auto v = run_cli("validate " + dir + "/experiment.json " + dir + "/base.csv " + dir +
                         "/modified.csv " + dir + "/difference.csv");
  CHECK(v.exit_code == 0);
}

TEST_CASE("an oscillating factor sequence fails the precondition gate") {
  const std::string dir = fresh_dir("altlambda");
  const auto r = run_cli("local-experiment --function square --lambda alt --N 64 "
                         "--quad-samples 1024 --out " + dir);
  CHECK(r.exit_code == 4);
  CHECK(contains(r.err, "bounded-variation check"));
  CHECK(!fs::exists(fs::path(dir) / "experiment.json"));
}
