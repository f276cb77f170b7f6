#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the CLI through the shell; stderr is dropped so failure-path cases
// only assert on the exit code.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + POLYBERG_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, k);
  const int status = pclose(pipe);
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), out};
}

std::string temp_points_file(const std::string& name, const std::string& body) {
  const std::string path = std::string("/tmp/") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("documented anchor values come out of the pipe") {
  auto r = run_cli("eval rpoly --m 1 --alpha 0 --beta 0 --t 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "4\n");

  r = run_cli("eval kernel-ball --n 1 --m 1 --alpha 0 --z 0 --w 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "1\n");

  r = run_cli("eval distance --domain siegel --n 1 --xi i --eta 2i");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(std::stod(r.out) - 1.0 / 3.0) < 1e-12);

  // P_1^{(0,0)}(t) = t.
  r = run_cli("eval jacobi --m 1 --alpha 0 --beta 0 --t 0.5");
  CHECK(r.exit_code == 0);
  CHECK(std::abs(std::stod(r.out) - 0.5) < 1e-14);
}

TEST_CASE("json and csv formats carry the same values") {
  auto r = run_cli("eval kernel-ball --n 2 --m 1 --alpha 0 --z 0.1,0.2i --w 0,0 --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "kernel-ball");
  CHECK(j["n"] == 2);
  CHECK(j["results"].size() == 1);
  CHECK(j["results"][0]["value"][0] == doctest::Approx(1.0));
  CHECK(j["results"][0]["value"][1] == doctest::Approx(0.0));
  CHECK(j["results"][0]["z"][1][1] == doctest::Approx(0.2));

  r = run_cli("eval kernel-ball --n 2 --m 1 --alpha 0 --z 0.1,0.2i --w 0,0 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("index,value_re,value_im\n0,1,0", 0) == 0);
}

TEST_CASE("usage problems exit with 2") {
  CHECK(run_cli("eval bogus").exit_code == 2);
  CHECK(run_cli("eval rpoly --m 1 --alpha 0 --beta 0").exit_code == 2);
  CHECK(run_cli("eval kernel-ball --n 1 --m 1 --alpha 0 --z 0").exit_code == 2);
  CHECK(run_cli("eval kernel-ball --n 1 --m 1 --alpha 0 --z zebra --w 0").exit_code == 2);
  CHECK(run_cli("eval kernel-ball --n 1 --m 1 --alpha 0 --z 0,0 --w 0").exit_code == 2);
  CHECK(run_cli("eval rpoly --m 1 --alpha -2 --beta 0 --t 0").exit_code == 2);
  CHECK(run_cli("eval berezin --n 1 --m 1 --alpha 0 --z 0").exit_code == 2);
  CHECK(run_cli("verify mvp --n 1 --m 2 --alpha 0 --format yaml").exit_code == 2);
  CHECK(run_cli("verify mvp --n 0 --m 2 --alpha 0").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("domain problems exit with 3") {
  CHECK(run_cli("eval kernel-ball --n 1 --m 1 --alpha 0 --z 0.9999999999999 --w 0").exit_code == 3);
  CHECK(run_cli("eval kernel-siegel --n 1 --m 1 --alpha 0 --xi 0 --eta i").exit_code == 3);
  CHECK(run_cli("eval distance --domain siegel --n 1 --xi -3i --eta i").exit_code == 3);
}

TEST_CASE("points files drive batch evaluation") {
  const std::string path = temp_points_file(
      "polyberg_cli_pts.json", "[[[0.0,0.0]],[[0.1,0.2]],[[0.0,0.0]],[[0.0,0.0]]]");
  const auto r = run_cli("eval kernel-ball --n 1 --m 2 --alpha 0 --points-file " + path +
                         " --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"].size() == 2);
  // K_0(w) = 4 - 6|w|^2 for (n,m,alpha) = (1,2,0); |w|^2 = 0.05 here.
  CHECK(j["results"][0]["value"][0] == doctest::Approx(3.7).epsilon(1e-12));
  CHECK(j["results"][1]["value"][0] == doctest::Approx(4.0).epsilon(1e-12));

  const std::string odd = temp_points_file("polyberg_cli_odd.json", "[[[0.0,0.0]]]");
  CHECK(run_cli("eval kernel-ball --n 1 --m 2 --alpha 0 --points-file " + odd).exit_code == 2);
  const std::string junk = temp_points_file("polyberg_cli_junk.json", "{\"not\": \"points\"}");
  CHECK(run_cli("eval kernel-ball --n 1 --m 2 --alpha 0 --points-file " + junk).exit_code == 2);
}

TEST_CASE("berezin witness collapses while its pairing stays visible") {
  const auto r = run_cli("eval berezin --n 1 --m 2 --alpha 0 --z 0.3+0.1i --format json");
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["witness_pairing"] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(j["results"][0]["value"][0].get<double>()) < 1e-14);
  CHECK(std::abs(j["results"][0]["value"][1].get<double>()) < 1e-14);
}

TEST_CASE("verify reruns are byte-identical and env seeds are honored") {
  const std::string args = "verify identities --n 1 --m 2 --alpha 0.5 --seed 3";
  const auto r1 = run_cli(args);
  const auto r2 = run_cli(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(!r1.out.empty());

  const auto j = nlohmann::json::parse(r1.out);
  CHECK(j["suite"] == "identities");
  CHECK(j["pass"] == true);
  CHECK(j["checks"].size() > 5);

  const auto renv = run_cli("verify identities --n 1 --m 2 --alpha 0.5", "POLYBERG_SEED=3 ");
  CHECK(renv.exit_code == 0);
  CHECK(renv.out == r1.out);

  const auto rother = run_cli("verify identities --n 1 --m 2 --alpha 0.5 --seed 4");
  CHECK(rother.out != r1.out);
}

TEST_CASE("thread count changes nothing and tolerance scaling flips failures") {
  const std::string args = "verify rk --n 1 --m 2 --alpha 0 --samples 30000 --seed 12";
  const auto r1 = run_cli(args);
  const auto r4 = run_cli(args, "POLYBERG_THREADS=4 ");
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r4.out);

  const auto forced = run_cli("verify identities --n 1 --m 2 --alpha 0 --tol-scale 1e-300");
  CHECK(forced.exit_code == 1);
  const auto j = nlohmann::json::parse(forced.out);
  CHECK(j["pass"] == false);

  CHECK(run_cli("verify identities --n 1 --m 2 --alpha 0 --tol-scale 0").exit_code == 2);
  CHECK(run_cli("verify rk --n 1 --m 2 --alpha 0", "POLYBERG_THREADS=frog ").exit_code == 2);
}

TEST_CASE("verify plain output ends with the suite verdict") {
  const auto r = run_cli("verify mvp --n 1 --m 2 --alpha 0 --format plain");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS mvp\n") != std::string::npos);
  CHECK(r.out.rfind("PASS mvp/") != std::string::npos);
}
