#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "runsdist/cli.hpp"

using namespace runsdist;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(RUNSDIST_GOLDEN_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Value column of the simulate statistic row `name`.
std::vector<double> stat_row(const std::string& out, const std::string& name) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(name + ",", 0) != 0) continue;
    std::vector<double> vals;
    std::istringstream cells(line.substr(name.size() + 1));
    std::string cell;
    while (std::getline(cells, cell, ',')) vals.push_back(std::stod(cell));
    return vals;
  }
  return {};
}

}  // namespace

TEST(CliGolden, PmfExact) {
  const auto r = run({"pmf", "--k", "2", "--r", "1", "--p", "1/2", "--n-min", "2", "--n-max", "5",
                      "--engine", "recurrence-pg", "--scheme", "full", "--exact"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("pmf_k2_exact.csv"));
}

TEST(CliGolden, PmfTypeTwoGeometric) {
  const auto r = run({"pmf", "--k", "1", "--r", "1", "--p", "0.5", "--n-min", "1", "--n-max", "1",
                      "--engine", "muselli-alt", "--variant", "type2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("pmf_type2_geometric.csv"));
}

TEST(CliGolden, CentralMomentsExact) {
  const auto r = run({"moments", "--k", "2", "--r", "1", "--p", "1/2", "--exact", "--kind", "central",
                      "--order-max", "2", "--route", "partition"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("moments_central_exact.csv"));
}

TEST(CliGolden, FactorialMomentsCutJson) {
  const auto r = run({"moments", "--k", "2", "--r", "1", "--p", "1/2", "--exact", "--kind", "factorial",
                      "--order-max", "3", "--route", "recurrence", "--scheme", "cut", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("moments_factorial_cut.json"));
}

TEST(CliGolden, GapJson) {
  const auto r = run({"pmf", "--k", "2", "--r", "2", "--p", "1/2", "--n-min", "6", "--n-max", "6", "--variant",
                      "gap=2", "--engine", "nested-sum", "--exact", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("pmf_gap_exact.json"));
}

TEST(CliGolden, CompareExact) {
  const auto r = run({"compare", "--k", "2", "--r", "1", "--p", "1/2", "--n-min", "2", "--n-max", "5",
                      "--engines", "recurrence-pg,nested-sum,dp-oracle", "--exact", "--tolerance", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, golden("compare_exact.csv"));
}

TEST(Cli, MomentRoutesAgreeOnDeskCheck) {
  for (const char* route : {"recurrence", "partition", "pgf", "root", "summation"}) {
    const auto r = run({"moments", "--k", "2", "--r", "1", "--p", "0.5", "--kind", "central", "--order-max", "2",
                        "--route", route});
    EXPECT_EQ(r.code, 0) << route << r.err;
    const auto pos = r.out.find(",central,2,");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(r.out.substr(pos + 11)), 22.0, 1e-9) << route;
  }
}

TEST(Cli, TypeThreeRootMoments) {
  const auto r = run({"moments", "--k", "2", "--r", "2", "--p", "0.5", "--variant", "overlap=1", "--route", "root",
                      "--order-max", "2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("overlap=1,root,factorial,1,10"), std::string::npos) << r.out;
}

TEST(Cli, AllTypeOneEnginesPass) {
  const auto r = run({"compare", "--k", "3", "--r", "2", "--p", "0.4", "--n-min", "1", "--n-max", "100", "--engines",
                      "recurrence-pg,recurrence-ch,fullsum-ch,nested-sum,hyp-sum,pgf-expansion,root-based",
                      "--tolerance", "1e-11"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, UnconvertedSchemesFail) {
  const auto r = run({"compare", "--k", "3", "--r", "2", "--p", "0.4", "--n-min", "6", "--n-max", "30", "--engines",
                      "recurrence-pg,recurrence-ch", "--no-convert"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  auto unknown = run({"pmf", "--k", "1", "--p", "0.5", "--n-min", "1", "--n-max", "2", "--engine", "bogus"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("recurrence-pg"), std::string::npos) << "lists valid engines";
  EXPECT_NE(unknown.err.find("--engine"), std::string::npos);

  auto single = run({"compare", "--k", "2", "--p", "0.5", "--n-min", "1", "--n-max", "5", "--engines",
                     "recurrence-pg"});
  EXPECT_EQ(single.code, 2);
  EXPECT_NE(single.err.find("need at least two engines"), std::string::npos);

  auto bad_p = run({"pmf", "--k", "2", "--p", "1.5", "--n-min", "1", "--n-max", "2"});
  EXPECT_EQ(bad_p.code, 2);
  EXPECT_NE(bad_p.err.find("--p"), std::string::npos);

  auto bad_ell = run({"pmf", "--k", "2", "--p", "0.5", "--n-min", "1", "--n-max", "2", "--variant", "overlap=2",
                      "--engine", "root-based"});
  EXPECT_EQ(bad_ell.code, 2);
  EXPECT_NE(bad_ell.err.find("--variant"), std::string::npos);

  auto mismatch = run({"pmf", "--k", "2", "--p", "0.5", "--n-min", "1", "--n-max", "2", "--variant", "type2",
                       "--engine", "nested-sum"});
  EXPECT_EQ(mismatch.code, 2);

  auto decimal_exact = run({"pmf", "--k", "2", "--p", "0.5", "--n-min", "1", "--n-max", "2", "--exact"});
  EXPECT_EQ(decimal_exact.code, 2);

  auto route_kind = run({"moments", "--k", "2", "--p", "1/2", "--exact", "--route", "pgf"});
  EXPECT_EQ(route_kind.code, 2);

  auto samples = run({"simulate", "--k", "2", "--p", "0.5", "--samples", "0"});
  EXPECT_EQ(samples.code, 2);

  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"pmf", "--k", "2"}).code, 2);
}

TEST(Cli, SimulateDeterministicAndCentred) {
  const std::vector<std::string> args = {"simulate", "--k", "2", "--r", "2", "--p", "0.5", "--samples", "200000",
                                         "--seed", "11", "--variant", "gap=1"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto mean = stat_row(a.out, "mean");
  ASSERT_EQ(mean.size(), 3U);
  EXPECT_EQ(mean[1], 13.0);  // two runs of mean 6 plus one ignored trial
  EXPECT_LT(std::abs(mean[0] - mean[1]), 5 * mean[2]);
}
