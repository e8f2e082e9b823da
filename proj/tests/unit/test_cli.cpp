#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string &args) {
  const std::string cmd = std::string(SPDE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) {
    out.append(buf, n);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

} // namespace

TEST(Cli, EstimateRow) {
  const auto r = run("estimate --route endpoints --n-modes 20 --seed 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "seed,route,N,theta_hat,theta_hat_mle,fisher,pivot");
  EXPECT_NE(r.out.find("\n1,endpoints,20,"), std::string::npos);
}

TEST(Cli, BvmAndBayes) {
  const auto bvm = run("bvm --theta-hat 0.3 --n-modes 2");
  EXPECT_EQ(bvm.code, 0);
  EXPECT_NE(bvm.out.find("2,0.2161"), std::string::npos);
  const auto bayes = run("bayes --theta-hat 0.3 --fisher 17 --loss quadratic");
  EXPECT_EQ(bayes.code, 0);
  EXPECT_NE(bayes.out.find("\n0.3504"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("estimate --route euler").code, 2);
  EXPECT_EQ(run("experiment --set III").code, 2);
  EXPECT_EQ(run("experiment --config /nonexistent.cfg").code, 2);
  EXPECT_EQ(run("bayes --loss exp-power:3").code, 2);
  EXPECT_EQ(run("nonsense").code, 2);
  EXPECT_EQ(run("mc --suite pivot --replicates 10").code, 2);
  EXPECT_EQ(run("posterior --prior uniform --points 3 --out-of-range").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, IoErrorExitCode) {
  EXPECT_EQ(run("mc --suite consistency --replicates 2 --out /proc/none/x.csv").code, 4);
}
