#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(NOMA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "noma_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("alloc, limits, thresholds, analytic") {
  CHECK(run("alloc --users 4 --rate 1").out == "0.533333, 0.266667, 0.133333, 0.066667\n");
  CHECK(run("limits --users 4 --rate 1").out == "0.5, 0.25, 0.125, 0.0625\n");
  CHECK(run("thresholds --users 4 --rate 1 --snr 3").out == "5, 5, 5, 5\n");
  CHECK(run("thresholds --users 2 --rate 1 --snr 1 --alloc 0.5,0.5").out == "inf, 2\n");
  CHECK(run("analytic --users 4 -N 4 --rate 1 --snr 3 --rank 4").out == "0.291802\n");
}

TEST_CASE("config file with flag overrides") {
  const auto cfg = scratch() / "run.cfg";
  std::ofstream(cfg) << "K = 3\nR0 = 2\nxi = 3\n";
  CHECK(run("alloc --config " + cfg.string()).out == run("alloc --users 3 --rate 2").out);
  CHECK(run("alloc --config " + cfg.string() + " --users 4 --rate 1").out ==
        "0.533333, 0.266667, 0.133333, 0.066667\n");
}

TEST_CASE("exit codes") {
  CHECK(run("alloc --users 0 --rate 1").code == 1);
  CHECK(run("alloc --rate -1").code == 1);
  CHECK(run("alloc --bogus").code == 1);
  CHECK(run("").code == 1);
  CHECK(run("interference-sweep --users 4 --target-user 4 --trials 10").code == 1);
  CHECK(run("alloc --config /nonexistent/x.cfg").code == 2);
  CHECK(run("plot /nonexistent/x.csv").code == 2);
  CHECK(run("a1-sweep --trials 10 --grid-step 0.5 --out /nonexistent/dir/x.csv").code == 2);
  CHECK(run("alloc --users 4 --rate 1").code == 0);
}

TEST_CASE("sweeps write CSV and plot script, independent of workers") {
  const auto dir = scratch();
  const std::string common = " --users 4 -M 1 -N 4 --rate 1 --snr 3 --trials 5000 --seed 8 --grid-step 0.1";
  REQUIRE(run("a1-sweep" + common + " --workers 1 --out " + (dir / "a1_w1.csv").string()).code == 0);
  REQUIRE(run("a1-sweep" + common + " --workers 8 --out " + (dir / "a1_w8.csv").string()).code == 0);
  CHECK(slurp(dir / "a1_w1.csv") == slurp(dir / "a1_w8.csv"));
  CHECK(slurp(dir / "a1_w1.csv").rfind("a1,user,noma_outage,oma_outage,ci,K,M,N,R0,xi,beta,seed,trials\n", 0) == 0);
  CHECK(std::filesystem::exists(dir / "a1_w1.plot"));
  CHECK(run("a1-sweep" + common).out == slurp(dir / "a1_w1.csv"));

  REQUIRE(run("interference-sweep" + common + " --target-user 2 --out " + (dir / "int.csv").string()).code == 0);
  CHECK(slurp(dir / "int.csv")
            .rfind("A_n,target_user,own_outage,sic_K_to_n_outage,boundary,K,M,N,R0,xi,beta,seed,trials\n", 0) == 0);
  std::filesystem::remove(dir / "int.plot");
  const auto plotted = run("plot " + (dir / "int.csv").string());
  CHECK(plotted.code == 0);
  CHECK(std::filesystem::exists(dir / "int.plot"));
}

TEST_CASE("estimate subcommand") {
  const auto r = run("estimate --users 4 -N 4 --rate 1 --snr 3 --trials 20000 --seed 4 --cross-check");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("user,noma_outage,oma_outage,ci\n", 0) == 0);
}
