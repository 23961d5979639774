#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "floorgcd/cli.hpp"
#include "test_util.hpp"

using namespace floorgcd;
using testutil::slurp;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/floorgcd_test_") + name;
}

ExperimentConfig density_config(const std::string& out) {
  ExperimentConfig c;
  c.subcommand = "density";
  c.poly = "sqrt(2)*x";
  c.xmax = 20000;
  c.checkpoints = 4;
  c.out = out;
  return c;
}

}  // namespace

TEST_CASE("run: density report and manifest") {
  const std::string out = tmp_path("density.csv");
  ExperimentConfig c = density_config(out);
  REQUIRE(run(c) == 0);
  std::string report = slurp(out);
  CHECK(report.rfind("X,count,ratio,abs_error\n", 0) == 0);
  CHECK(report.find("20000,") != std::string::npos);
  std::string manifest = slurp(manifest_path_for(out));
  CHECK(manifest.find("\"subcommand\": \"density\"") != std::string::npos);
  CHECK(manifest.find("\"poly\": \"sqrt(2)*x\"") != std::string::npos);
}

TEST_CASE("run: reruns are byte-identical; thread count does not matter") {
  const std::string out1 = tmp_path("d1.csv"), out2 = tmp_path("d2.csv"),
                    out4 = tmp_path("d4.csv");
  ExperimentConfig c = density_config(out1);
  c.threads = 1;
  REQUIRE(run(c) == 0);
  c.out = out2;
  REQUIRE(run(c) == 0);
  CHECK(slurp(out1) == slurp(out2));
  c.out = out4;
  c.threads = 4;
  REQUIRE(run(c) == 0);
  CHECK(slurp(out1) == slurp(out4));
  CHECK(!slurp(out1).empty());
}

TEST_CASE("run: manifest round-trips to an identical report") {
  const std::string out = tmp_path("roundtrip.csv");
  ExperimentConfig c = density_config(out);
  REQUIRE(run(c) == 0);
  const std::string replay = tmp_path("replay.csv");
  REQUIRE(rerun_from_manifest(manifest_path_for(out), replay) == 0);
  CHECK(slurp(out) == slurp(replay));
}

TEST_CASE("run: exit codes") {
  ExperimentConfig bad = density_config(tmp_path("bad.csv"));
  bad.poly = "sqrt(2)*y";
  CHECK(run(bad) == 1);

  ExperimentConfig badfmt = density_config(tmp_path("badfmt.csv"));
  badfmt.format = "xml";
  CHECK(run(badfmt) == 1);

  // exact-integer constant polynomial that cannot collapse symbolically
  ExperimentConfig undecided = density_config(tmp_path("und.csv"));
  undecided.poly = "sqrt(2)*sqrt(2)";
  undecided.xmax = 3;
  undecided.precision_ceiling = 512;
  CHECK(run(undecided) == 2);

  // divisor explosion in the Legendre expansion
  ExperimentConfig guard;
  guard.subcommand = "sieve";
  guard.poly = "x";
  guard.xmax = 100;
  guard.z = 80.0;
  guard.out = tmp_path("guard.csv");
  CHECK(run(guard) == 3);

  ExperimentConfig unknown = density_config(tmp_path("unk.csv"));
  unknown.subcommand = "nope";
  CHECK(run(unknown) == 1);
}

TEST_CASE("run: sieve, weyl and witness reports") {
  ExperimentConfig s;
  s.subcommand = "sieve";
  s.poly = "sqrt(2)*x";
  s.xmax = 1000;
  s.z = 7.0;
  s.format = "json";
  s.out = tmp_path("sieve.json");
  REQUIRE(run(s) == 0);
  std::string j = slurp(s.out);
  CHECK(j.find("\"legendre_value\"") != std::string::npos);
  CHECK(j.find("\"sifted_count\"") != std::string::npos);

  ExperimentConfig w;
  w.subcommand = "weyl";
  w.poly = "sqrt(2)*x^2";
  w.xmax = 500;
  w.d = 1;
  w.m_max = 3;
  w.out = tmp_path("weyl.csv");
  REQUIRE(run(w) == 0);
  CHECK(slurp(w.out).rfind("m,d,X,re,im,magnitude,exponent\n", 0) == 0);

  ExperimentConfig wit;
  wit.subcommand = "witness";
  wit.alpha = "sqrt(2)";
  wit.n = 3;
  wit.qmax = 1000;
  wit.out = tmp_path("wit.json");
  REQUIRE(run(wit) == 0);
  std::string wj = slurp(wit.out);
  CHECK(wj.find("\"found\": true") != std::string::npos);
  CHECK(wj.find("\"q\": \"2\"") != std::string::npos);
}

TEST_CASE("run: cf, omega, approx and discrepancy reports") {
  ExperimentConfig cf;
  cf.subcommand = "cf";
  cf.alpha = "sqrt(2)";
  cf.terms = 4;
  cf.out = tmp_path("cf.json");
  REQUIRE(run(cf) == 0);
  std::string cj = slurp(cf.out);
  CHECK(cj.find("\"a0\": \"1\"") != std::string::npos);
  CHECK(cj.find("\"q\": \"12\"") != std::string::npos);

  ExperimentConfig om;
  om.subcommand = "omega";
  om.xmax = 6;
  om.nmin = 3;
  om.out = tmp_path("omega.csv");
  REQUIRE(run(om) == 0);
  CHECK(slurp(om.out) == "X,n_min,count,fraction\n6,3,3,0.75\n");

  ExperimentConfig ap;
  ap.subcommand = "approx";
  ap.alphas = {"1/2", "1/3"};
  ap.xmax = 100;
  ap.delta = 0.5;
  ap.out = tmp_path("approx.json");
  REQUIRE(run(ap) == 0);
  std::string aj = slurp(ap.out);
  CHECK(aj.find("\"q\": 6") != std::string::npos);

  ExperimentConfig di;
  di.subcommand = "discrepancy";
  di.poly = "sqrt(2)*x";
  di.d = 2;
  di.xmax = 10;
  di.T = 10;
  di.out = tmp_path("disc.csv");
  REQUIRE(run(di) == 0);
  CHECK(slurp(di.out).rfind("N,T,d_star,et_bound,weyl_term_sum\n5,10,", 0) == 0);
}

TEST_CASE("run: density with explicit xlist (convergence table)") {
  ExperimentConfig c;
  c.subcommand = "density";
  c.poly = "sqrt(2)*x";
  c.xlist = {100, 1000, 10000};
  c.out = tmp_path("table.csv");
  REQUIRE(run(c) == 0);
  std::string report = slurp(c.out);
  CHECK(report.find("\n100,") != std::string::npos);
  CHECK(report.find("\n1000,") != std::string::npos);
  CHECK(report.find("\n10000,") != std::string::npos);
  // single-element list: one data row
  ExperimentConfig single = c;
  single.xlist = {500};
  single.out = tmp_path("single.csv");
  REQUIRE(run(single) == 0);
  std::string srep = slurp(single.out);
  int rows = 0;
  for (char ch : srep)
    if (ch == '\n') ++rows;
  CHECK(rows == 2);  // header + one row
}
