// End-to-end checks of the command line tool: exit codes, artifact layout,
// cache behavior, and determinism of the emitted files. Each case runs the
// real binary (path injected at configure time) in a scratch directory.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(JTFU_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer;
  while (std::size_t got = std::fread(buffer.data(), 1, buffer.size(), pipe))
    result.output.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path find_output(const fs::path& dir, const std::string& prefix,
                     const std::string& suffix) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) != 0 || name.size() < prefix.size() + suffix.size())
      continue;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
      continue;
    // the middle is a bare run tag; a dot there means a different artifact
    // kind sharing the prefix (a .manifest.json next to a .json, say)
    const std::string middle =
        name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (middle.find('.') == std::string::npos) return entry.path();
  }
  FAIL("no output matching " << prefix << "*" << suffix << " in "
                             << dir.string());
  return {};
}

// run tag shared by every artifact of one command invocation, recovered from
// the summary filename "<command>-summary-<tag>.json"
std::string tag_of(const fs::path& summary_path, const std::string& head) {
  const std::string name = summary_path.filename().string();
  return name.substr(head.size(), name.size() - head.size() - 5);
}

// fresh scratch directory per test case
class Scratch {
 public:
  explicit Scratch(const char* tag)
      : dir_(fs::temp_directory_path() /
             (std::string("jtfu-cli-") + tag + "-" + std::to_string(getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }
  const fs::path& dir() const { return dir_; }
  std::string out() const { return (dir_ / "out").string(); }

 private:
  fs::path dir_;
};

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("min-uncertainty writes artifacts and replays them byte for byte") {
  Scratch scratch("minu");
  const std::string base = "--output-dir " + scratch.out() +
                           " min-uncertainty --photons 2 --modes 4";

  const RunResult cold = run_cli(base);
  CHECK(cold.exit_code == 0);
  CHECK(cold.output.find("n,m,xi,delta_tau2,delta_omega2,product") !=
        std::string::npos);

  const fs::path csv = find_output(scratch.out(), "min-uncertainty-", ".csv");
  const fs::path detail = find_output(scratch.out(), "min-uncertainty-", ".json");
  const fs::path manifest =
      find_output(scratch.out(), "min-uncertainty-", ".manifest.json");
  const std::string first_csv = read_file(csv);

  const auto doc = nlohmann::json::parse(read_file(detail));
  CHECK(doc.at("photons") == 2);
  CHECK(doc.at("modes") == 4);
  CHECK(doc.at("cached") == false);
  CHECK(doc.at("product").get<double>() > 0.0);
  CHECK(doc.at("product").get<double>() < 1.0);

  const auto mf = nlohmann::json::parse(read_file(manifest));
  CHECK(mf.at("command") == "min-uncertainty");
  CHECK(mf.at("cache").at("misses") == 1);

  // warm rerun: same bytes, served from cache
  const RunResult warm = run_cli(base);
  CHECK(warm.exit_code == 0);
  CHECK(read_file(csv) == first_csv);
  CHECK(nlohmann::json::parse(read_file(detail)).at("cached") == true);
  CHECK(nlohmann::json::parse(read_file(manifest)).at("cache").at("hits") == 1);

  // --refresh forces a recompute that still reproduces the same bytes
  const RunResult refreshed = run_cli("--refresh " + base);
  CHECK(refreshed.exit_code == 0);
  CHECK(read_file(csv) == first_csv);
  CHECK(nlohmann::json::parse(read_file(detail)).at("cached") == false);
}

TEST_CASE("sweep shares the cell cache and reruns without solving") {
  Scratch scratch("sweep");
  const std::string base = "--output-dir " + scratch.out() + " --threads 2 " +
                           "sweep --photons-min 2 --photons-max 2 " +
                           "--modes-min 2 --modes-max 6";

  const RunResult cold = run_cli(base);
  CHECK(cold.exit_code == 0);

  const fs::path summary_path =
      find_output(scratch.out(), "sweep-summary-", ".json");
  const auto cold_summary = nlohmann::json::parse(read_file(summary_path));
  CHECK(cold_summary.at("cells") == 5);
  CHECK(cold_summary.at("failed") == 0);
  CHECK(cold_summary.at("cache_hits") == 0);

  const RunResult warm = run_cli(base);
  CHECK(warm.exit_code == 0);
  const auto warm_summary = nlohmann::json::parse(read_file(summary_path));
  CHECK(warm_summary.at("cache_hits") == 5);
  CHECK(warm_summary.at("fresh_matvecs") == 0);

  // a single-cell command hits the exact same cache entries
  const RunResult single = run_cli("--output-dir " + scratch.out() +
                                   " min-uncertainty --photons 2 --modes 5");
  CHECK(single.exit_code == 0);
  const auto mf = nlohmann::json::parse(
      read_file(find_output(scratch.out(), "min-uncertainty-", ".manifest.json")));
  CHECK(mf.at("cache").at("hits") == 1);

  // per-photon series and combined CSV both exist
  (void)find_output(scratch.out(), "sweep-n2-", ".csv");
  const std::string tag = tag_of(summary_path, "sweep-summary-");
  const fs::path combined = fs::path(scratch.out()) / ("sweep-" + tag + ".csv");
  CHECK(read_file(combined).find("2,6,") != std::string::npos);
}

TEST_CASE("extrapolate and plot consume sweep output") {
  Scratch scratch("chain");
  CHECK(run_cli("--output-dir " + scratch.out() +
                " sweep --photons-min 2 --photons-max 2 --modes-min 2 "
                "--modes-max 7")
            .exit_code == 0);
  const fs::path series = find_output(scratch.out(), "sweep-n2-", ".csv");

  const RunResult fit = run_cli("--output-dir " + scratch.out() +
                                " extrapolate --input " + series.string() +
                                " --order 3 --photons 2");
  CHECK(fit.exit_code == 0);
  CHECK(fit.output.find("intercept=") != std::string::npos);
  const auto doc = nlohmann::json::parse(
      read_file(find_output(scratch.out(), "extrapolate-", ".json")));
  // two-photon series extrapolates toward the unbounded-entanglement limit 0
  CHECK(std::abs(doc.at("intercept").get<double>()) < 0.05);

  const RunResult plot = run_cli("--output-dir " + scratch.out() +
                                 " plot --input " + series.string() +
                                 " --x m --y product --output series.svg");
  CHECK(plot.exit_code == 0);
  const std::string svg = read_file(fs::path(scratch.out()) / "series.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("gaussian and mixture-bound commands") {
  Scratch scratch("gm");
  const RunResult gauss = run_cli("--output-dir " + scratch.out() +
                                  " gaussian --photons 2 --gamma 0.25 --delta 1");
  CHECK(gauss.exit_code == 0);
  CHECK(gauss.output.find("closed_form=0.0625") != std::string::npos);

  // the quadrature oracle cannot do n > 3: usage error, not a crash
  const RunResult unsupported = run_cli(
      "--output-dir " + scratch.out() + " gaussian --photons 5 --gamma 0.5");
  CHECK(unsupported.exit_code == 1);

  const RunResult no_oracle =
      run_cli("--output-dir " + scratch.out() +
              " gaussian --photons 5 --gamma 0 --no-oracle");
  CHECK(no_oracle.exit_code == 0);
  CHECK(no_oracle.output.find("closed_form=0.6") != std::string::npos);

  const RunResult poisson = run_cli("--output-dir " + scratch.out() +
                                    " mixture-bound --dist poisson:4");
  CHECK(poisson.exit_code == 0);
  CHECK(poisson.output.find("chain_all_hold=1") != std::string::npos);

  // distribution from a file
  const fs::path dist_file = scratch.dir() / "dist.csv";
  std::ofstream(dist_file) << "0,0.25\n2,0.5\n4,0.25\n";
  const RunResult from_file = run_cli("--output-dir " + scratch.out() +
                                      " mixture-bound --dist file:" +
                                      dist_file.string());
  CHECK(from_file.exit_code == 0);

  const RunResult bad_kind = run_cli("--output-dir " + scratch.out() +
                                     " mixture-bound --dist weibull:2");
  CHECK(bad_kind.exit_code == 1);
}

TEST_CASE("bsv-scan emits minima, traces, and the scaling fit") {
  Scratch scratch("bsv");
  const RunResult scan = run_cli("--output-dir " + scratch.out() +
                                 " bsv-scan --targets 10,30,100,300,1000");
  CHECK(scan.exit_code == 0);
  CHECK(scan.output.find("scaling fit:") != std::string::npos);

  const auto summary = nlohmann::json::parse(
      read_file(find_output(scratch.out(), "bsv-scan-summary-", ".json")));
  CHECK(summary.at("failed") == 0);
  CHECK(summary.at("minima").size() == 5);
  const double k = summary.at("scaling_fit").at("exponent").get<double>();
  CHECK(k > 0.5);
  CHECK(k < 1.5);
  (void)find_output(scratch.out(), "bsv-scan-trace-10-", ".csv");

  // warm rerun with different target order reuses the per-target cache
  const RunResult warm = run_cli("--output-dir " + scratch.out() +
                                 " bsv-scan --targets 1000,10,30,100,300");
  CHECK(warm.exit_code == 0);
  CHECK(warm.output.find("5 cache hits") != std::string::npos);
}

TEST_CASE("verify reports failures through exit code 3") {
  Scratch scratch("verify");
  const RunResult clean =
      run_cli("--output-dir " + scratch.out() + " verify --quick");
  CHECK(clean.exit_code == 0);
  CHECK(clean.output.find("0 failed") != std::string::npos);

  const auto doc = nlohmann::json::parse(
      read_file(find_output(scratch.out(), "verify-", ".json")));
  CHECK(doc.at("passed") == true);
  CHECK(doc.at("checks").size() >= 30);

  // fault injection: a biased t^2 matrix must trip the quadrature oracle
  const RunResult injected = run_cli("--output-dir " + scratch.out() +
                                     " verify --quick --perturb-t2 1e-6");
  CHECK(injected.exit_code == 3);
  CHECK(injected.output.find("FAIL") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("min-uncertainty --photons 1 --modes 4").exit_code == 1);
  CHECK(run_cli("min-uncertainty --modes 4").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // a subcommand is required
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("--version").exit_code == 0);
}

TEST_CASE("config file supplies defaults that flags override") {
  Scratch scratch("config");
  const fs::path config = scratch.dir() / "run.conf";
  std::ofstream(config) << "output-dir=" << (scratch.dir() / "from-config").string()
                        << "\n";

  const RunResult from_config = run_cli("--config " + config.string() +
                                        " mixture-bound --dist thermal:2.5");
  CHECK(from_config.exit_code == 0);
  CHECK(fs::exists(scratch.dir() / "from-config"));

  const RunResult overridden =
      run_cli("--config " + config.string() + " --output-dir " +
              (scratch.dir() / "flag-wins").string() +
              " mixture-bound --dist thermal:2.5");
  CHECK(overridden.exit_code == 0);
  CHECK(fs::exists(scratch.dir() / "flag-wins"));
}

TEST_SUITE_END();
