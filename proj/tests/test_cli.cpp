// End-to-end checks of the command-line driver; invokes the built binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const char* kCli = BTBS_CLI_PATH;

int run(const std::string& args) {
  std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return std::string("/tmp/btbslab_test_") + name;
}

double report_value(const std::string& text) {
  auto pos = text.find("\"value\": [");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + 10));
}

}  // namespace

TEST_CASE("estimate writes a report with the expected value") {
  auto out = tmp_path("est.json");
  std::remove(out.c_str());
  int rc = run("estimate --family btbs --n 1 --d 1 --f cosine:1 --p 0 --t 1 --x 0 "
               "--method quad --order 80 --out " + out);
  CHECK(rc == 0);
  auto text = slurp(out);
  CHECK(text.find("\"value\": [0.69923766944") != std::string::npos);
  CHECK(text.find("\"version\"") != std::string::npos);
  CHECK(text.find("\"family\": \"btbs\"") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("estimate with constant data is exact") {
  auto out = tmp_path("const.json");
  int rc = run("estimate --family btbs --n 2 --d 1 --f const:1 --p 0 --t 1,1 --x 0 "
               "--method quad --out " + out);
  CHECK(rc == 0);
  auto text = slurp(out);
  CHECK(report_value(text) == doctest::Approx(1.0).epsilon(1e-10));
  std::remove(out.c_str());
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("estimate --no-such-flag 1") == 2);
  CHECK(run("verify --tol 1e-6") == 2);                       // missing --system
  CHECK(run("estimate --f cosine:1,2,3 --n 1 --d 1") == 2);   // bad arity
  CHECK(run("") == 2);                                        // subcommand required
}

TEST_CASE("verify exits 0 under a realistic tolerance and 4 under an impossible one") {
  CHECK(run("verify --system bs-lin --n 2 --d 1 --f cosine:1 --tol 1e-6") == 0);
  CHECK(run("verify --system btbs-lin --n 1 --d 1 --f cosine:1 --tol 1e-3 "
            "--grid \"t=1;x=0,0.3\"") == 0);
  CHECK(run("verify --system ks --n 1 --d 1 --f cosine:1 --tol 1e-12 "
            "--grid \"t=1;x=0.2\"") == 4);
}

TEST_CASE("verify writes the residual table") {
  auto out = tmp_path("verify.csv");
  int rc = run("verify --system bs-lin --n 2 --d 1 --f cosine:1 --tol 1e-6 --out " + out);
  CHECK(rc == 0);
  auto text = slurp(out);
  CHECK(text.find("system,j,t1,t2,x1,lhs_re") != std::string::npos);
  CHECK(text.find("bs-lin,1,") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("export sheet-sample runs are byte-identical") {
  auto a = tmp_path("sheet_a.csv"), b = tmp_path("sheet_b.csv");
  std::string cmd = "export --what sheet-sample --n 2 --d 1 --seed 7 "
                    "--grid \"t=0,0.5,1\" --out ";
  CHECK(run(cmd + a) == 0);
  CHECK(run(cmd + b) == 0);
  auto ta = slurp(a), tb = slurp(b);
  CHECK(!ta.empty());
  CHECK(ta == tb);
  // boundary rows are exactly zero
  CHECK(ta.find("0,0,0\n") != std::string::npos);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("export field-grid includes boundary rows equal to the initial data") {
  auto out = tmp_path("grid.csv");
  int rc = run("export --what field-grid --family btbs --n 1 --d 1 --f cosine:1 --p 0 "
               "--grid \"t=0,1;x=0\" --out " + out);
  CHECK(rc == 0);
  auto text = slurp(out);
  CHECK(text.find("t1,x1,re,im,stderr") != std::string::npos);
  // at t = 0 the field equals f(0) = 1
  CHECK(text.find("0,0,1,0,0") != std::string::npos);
  std::remove(out.c_str());
}

TEST_CASE("export martingale-profile is flat within 3 standard errors") {
  auto out = tmp_path("prof.csv");
  int rc = run("export --what martingale-profile --family bs --n 2 --d 1 --f cosine:1 --j 1 "
               "--t 1,0.8 --x 0.2 --samples 20000 --seed 3 --out " + out);
  CHECK(rc == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);  // config comment
  std::getline(in, line);  // header
  CHECK(line == "s,value,stderr");
  double base = 0.0;
  bool first = true;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string sv, vv, ev;
    std::getline(ss, sv, ',');
    std::getline(ss, vv, ',');
    std::getline(ss, ev, ',');
    double value = std::stod(vv), err = std::stod(ev);
    if (first) {
      base = value;
      first = false;
    } else {
      CHECK(std::abs(value - base) < 3.0 * err);
    }
  }
  CHECK(!first);
  std::remove(out.c_str());
}

TEST_CASE("config file provides defaults and flags override") {
  auto cfg = tmp_path("cfg.ini");
  {
    std::ofstream f(cfg);
    f << "family=btbs\nn=1\nd=1\nf=cosine:1\np=0\nt=1\nx=0\nmethod=quad\n";
  }
  auto out = tmp_path("cfg_out.json");
  int rc = run("estimate --config " + cfg + " --out " + out);
  CHECK(rc == 0);
  CHECK(slurp(out).find("0.69923766944") != std::string::npos);
  // flag overrides the file value
  rc = run("estimate --config " + cfg + " --f const:1 --out " + out);
  CHECK(rc == 0);
  CHECK(report_value(slurp(out)) == doctest::Approx(1.0).epsilon(1e-10));
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("seed comes from BTBS_SEED when the flag is absent") {
  auto a = tmp_path("seed_a.csv"), b = tmp_path("seed_b.csv");
  std::string base = std::string(kCli) +
                     " export --what sheet-sample --n 1 --d 1 --grid \"t=0,1\" --out ";
  CHECK(WEXITSTATUS(std::system(("BTBS_SEED=99 " + base + a + " > /dev/null 2>&1").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((std::string(kCli) +
                                 " export --what sheet-sample --n 1 --d 1 --seed 99 "
                                 "--grid \"t=0,1\" --out " + b + " > /dev/null 2>&1")
                                    .c_str())) == 0);
  CHECK(slurp(a) == slurp(b));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("no partial file is left behind on failure") {
  auto out = tmp_path("partial.json");
  std::remove(out.c_str());
  std::remove((out + ".part").c_str());
  int rc = run("estimate --family btbs --n 2 --d 1 --f cosine:1 --p 0 --t 1 --x 0 "
               "--method quad --out " + out);  // t arity mismatch
  CHECK(rc == 2);
  std::ifstream full(out), part(out + ".part");
  CHECK(!full.good());
  CHECK(!part.good());
}
