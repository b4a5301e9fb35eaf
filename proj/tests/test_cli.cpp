// Runs the pdwave executable end to end on small configs.
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "pdwave_cli_test";

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" PDWAVE_CLI "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const Json& cfg) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << cfg.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json fput(const fs::path& out) {
  Json c = Json::parse(slurp(fs::path(PDWAVE_CONFIGS) / "fput_harmonic.json"));
  c["output_dir"] = out.string();
  return c;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("dispersion output matches the FPUT symbol") {
  const fs::path out = kRoot / "disp";
  fs::remove_all(out);
  const fs::path cfg = write_config("disp.json", fput(out));
  REQUIRE(run("dispersion " + quoted(cfg)) == 0);
  std::istringstream csv(slurp(out / "dispersion.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,theta2,omega2");
  int rows = 0;
  double worst = 0.0;
  while (std::getline(csv, line)) {
    double k = 0, t = 0, w = 0;
    char c1 = 0, c2 = 0;
    std::istringstream(line) >> k >> c1 >> t >> c2 >> w;
    const double s = k == 0.0 ? 1.0 : std::sin(k / 2.0) / (k / 2.0);
    worst = std::max(worst, std::abs(t - s * s));
    ++rows;
  }
  CHECK(rows == 601);
  CHECK(worst < 1e-12);
  CHECK(fs::exists(out / "metadata.json"));
}

TEST_CASE("check reports a zero gap for the harmonic chain") {
  const fs::path out = kRoot / "check";
  fs::remove_all(out);
  REQUIRE(run("check " + quoted(write_config("check.json", fput(out)))) == 0);
  const Json j = Json::parse(slurp(out / "check.json"));
  CHECK(std::abs(j.at("energy").at("superquadratic_gap").get<double>()) < 1e-10);
}

TEST_CASE("runs are deterministic") {
  Json c = fput(kRoot / "det_a");
  const fs::path cfg = write_config("det.json", c);
  REQUIRE(run("solve " + quoted(cfg)) == 0);
  REQUIRE(run("solve " + quoted(cfg) + " -o " + quoted(kRoot / "det_b")) == 0);
  std::string a = slurp(kRoot / "det_a" / "solution.json");
  std::string b = slurp(kRoot / "det_b" / "solution.json");
  // the embedded output directory is the only permitted difference
  const auto strip = [](std::string s, const std::string& dir) {
    for (auto p = s.find(dir); p != std::string::npos; p = s.find(dir)) s.erase(p, dir.size());
    return s;
  };
  CHECK(strip(a, "det_a") == strip(b, "det_b"));
  CHECK(slurp(kRoot / "det_a" / "profile.csv") == slurp(kRoot / "det_b" / "profile.csv"));
}

TEST_CASE("output directory precedence") {
  const fs::path cfg = write_config("env.json", fput(kRoot / "from_config"));
  const fs::path env_dir = kRoot / "from_env";
  fs::remove_all(env_dir);
  REQUIRE(run("check " + quoted(cfg), "PDWAVE_OUTPUT_DIR=" + quoted(env_dir)) == 0);
  CHECK(fs::exists(env_dir / "check.json"));
  const fs::path flag_dir = kRoot / "from_flag";
  fs::remove_all(flag_dir);
  REQUIRE(run("check " + quoted(cfg) + " -o " + quoted(flag_dir), "PDWAVE_OUTPUT_DIR=" + quoted(env_dir)) == 0);
  CHECK(fs::exists(flag_dir / "check.json"));
}

TEST_CASE("exit codes") {
  Json bad = fput(kRoot / "bad");
  bad["grid"]["bogus"] = 1;
  CHECK(run("solve " + quoted(write_config("bad.json", bad))) == 1);
  CHECK(run("solve " + quoted(kRoot / "missing.json")) == 1);
  CHECK(run("solve") == 1);

  Json ver = fput(kRoot / "ver");
  ver["schema_version"] = 2;
  CHECK(run("solve " + quoted(write_config("ver.json", ver))) == 1);

  Json slow = Json::parse(slurp(fs::path(PDWAVE_CONFIGS) / "poly26.json"));
  slow["output_dir"] = (kRoot / "slow").string();
  slow["solver"]["max_iterations"] = 3;
  slow["solve"] = {{"K", 0.5}};
  CHECK(run("solve " + quoted(write_config("slow.json", slow))) == 2);
  CHECK(fs::exists(kRoot / "slow" / "solution.json"));

  // the exponential medium overflows at this energy on a coarse grid
  Json hot = Json::parse(slurp(fs::path(PDWAVE_CONFIGS) / "cosh.json"));
  hot["output_dir"] = (kRoot / "hot").string();
  hot["grid"] = {{"L", 2}, {"N", 16}};
  hot["solve"] = {{"K", 1e6}};
  CHECK(run("solve " + quoted(write_config("hot.json", hot))) == 3);
}

TEST_CASE("figure preset") {
  const fs::path out = kRoot / "figs";
  fs::remove_all(out);
  REQUIRE(run("reproduce fig5 -o " + quoted(out)) == 0);
  CHECK(fs::exists(out / "fig5" / "dispersion_fput.csv"));
  CHECK(fs::exists(out / "fig5" / "metadata.json"));
  CHECK(run("reproduce fig9 -o " + quoted(out)) == 1);
}
