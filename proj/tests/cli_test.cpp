// Copyright 2026 The nlspectra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "nlspectra/spectra.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(NLSPECTRA_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

using Row = std::vector<std::string>;

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    Row row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(f);
    rows.push_back(row);
  }
  return rows;
}

std::size_t column(const Row& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  ADD_FAILURE() << "missing column " << name;
  return 0;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nlspectra_cli_test";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const char* kTable1 = "--alpha-steps 1 --kdelta-steps 1";

TEST(CliEval, ZeroWavenumber) {
  const auto r = run("eval --d 3 --alpha 2 --delta 1 --k 0");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Row{"d", "alpha", "delta", "m", "k_mod", "lambda", "method", "terms",
                          "est_rel_err"}));
  EXPECT_EQ(rows[1][column(rows[0], "lambda")], "0");
  EXPECT_EQ(rows[1][column(rows[0], "method")], "zero");
}

TEST(CliEval, ClosedFormOneDimension) {
  const auto r = run("eval --d 1 --alpha 0 --delta 1 --k 10");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  EXPECT_EQ(rows[1][column(rows[0], "method")], "asymptotic");
  const double lambda = std::stod(rows[1][column(rows[0], "lambda")]);
  EXPECT_LE(rel(lambda, 0.6 * std::sin(10.0) - 6), 1e-13);
}

TEST(CliEval, SeventeenDigits) {
  const auto r = run("eval --d 3 --alpha 1 --delta 1 --k 2 --no-header");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  const double expected = nlspectra::lambda_hybrid({3, 1.0, 1.0}, 2.0).lambda;
  EXPECT_EQ(std::stod(rows[0][5]), expected);
}

TEST(CliEval, JsonRecord) {
  const auto r = run("eval --d 2 --alpha 1.5 --delta 0.5 --k 20 --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("method"), "asymptotic");
  EXPECT_EQ(j.at("lambda").get<double>(), nlspectra::lambda_hybrid({2, 1.5, 0.5}, 20.0).lambda);
  for (const char* key : {"d", "alpha", "delta", "m", "k_mod", "terms", "est_rel_err"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(CliEval, InvalidParametersExitTwo) {
  EXPECT_EQ(run("eval --d 3 --alpha 5.1 --delta 1 --k 1").status, 2);
  EXPECT_EQ(run("eval --d 0 --alpha 0 --delta 1 --k 1").status, 2);
  EXPECT_EQ(run("eval --d 3 --alpha 1 --delta -1 --k 1").status, 2);
  EXPECT_EQ(run("eval --d 3 --alpha 1 --delta 1 --k -1").status, 2);
  EXPECT_EQ(run("eval --d 3 --alpha 1 --delta 1 --k 1 --tol 1e-20").status, 2);
  EXPECT_EQ(run("eval --d 3 --alpha 1 --delta 1 --k abc").status, 2);
  EXPECT_EQ(run("eval --bogus").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(CliTable, GridShape) {
  const auto r = run("table --d 2 --alpha-min 0 --alpha-max 3 --alpha-steps 3 "
                     "--kdelta-min 1 --kdelta-max 20 --kdelta-steps 3");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 10u);
  const auto a = column(rows[0], "alpha");
  const auto kd = column(rows[0], "kdelta");
  // alpha-major order
  EXPECT_EQ(rows[1][a], rows[3][a]);
  EXPECT_NE(rows[3][a], rows[4][a]);
  EXPECT_EQ(rows[1][kd], rows[4][kd]);
}

TEST(CliTable, BothMethodsAgreeAtSwitch) {
  const auto r = run(std::string("table --d 3 --alpha-min 2 --alpha-max 2 --kdelta-min 6 "
                                 "--kdelta-max 6 --method both ") + kTable1);
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  const double mac = std::stod(rows[1][column(rows[0], "lambda_mac")]);
  const double asy = std::stod(rows[1][column(rows[0], "lambda_asy")]);
  EXPECT_LE(rel(mac, asy), 1e-9);
}

TEST(CliTable, OracleColumns) {
  const auto r = run("table --d 2 --alpha-min 0.5 --alpha-max 3 --alpha-steps 2 "
                     "--kdelta-min 3 --kdelta-max 12 --kdelta-steps 2 --with-oracle");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  const auto err = column(rows[0], "rel_err");
  const auto oracle = column(rows[0], "lambda_oracle");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_LE(std::stod(rows[i][err]), 1e-11) << i;
    EXPECT_LT(std::stod(rows[i][oracle]), 0.0);
  }
}

TEST(CliTable, LogSpacedGrid) {
  const auto r = run("table --d 1 --alpha-min 0 --alpha-max 0 --alpha-steps 1 "
                     "--kdelta-min 0.01 --kdelta-max 100 --kdelta-steps 5 --kdelta-log");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const auto kd = column(rows[0], "kdelta");
  EXPECT_NEAR(std::stod(rows[3][kd]), 1.0, 1e-14);
  EXPECT_NEAR(std::stod(rows[5][kd]), 100.0, 1e-12);
}

TEST(CliTable, FailureLeavesNoFile) {
  const auto out = scratch("fail.csv");
  const auto r = run("table --d 3 --alpha-min 2 --alpha-max 2 --alpha-steps 1 --kdelta-min 1 "
                     "--kdelta-max 5000 --kdelta-steps 2 --method mac --out " + out.string());
  EXPECT_EQ(r.status, 3);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out.string() + ".partial"));
}

TEST(CliTable, BadFlagsExitTwo) {
  EXPECT_EQ(run("table --d 3 --method nope").status, 2);
  EXPECT_EQ(run("table --d 3 --alpha-min 0 --alpha-max 6").status, 2);
  EXPECT_EQ(run(std::string("table --d 3 --kdelta-min 300 --kdelta-max 300 --with-oracle ") +
                kTable1).status, 2);
}

TEST(CliSpectrum, DedupCount) {
  const auto r = run("spectrum --d 2 --alpha 1 --delta 1 --kmax 1");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const auto m = column(rows[0], "m");
  EXPECT_EQ(rows[1][m], "0");
  EXPECT_EQ(rows[2][m], "1");
  EXPECT_EQ(rows[3][m], "2");
}

TEST(CliSpectrum, ClosedFormRows) {
  const auto r = run("spectrum --d 1 --alpha 0 --delta 1 --kmax 3");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  const auto kc = column(rows[0], "k_mod");
  const auto lc = column(rows[0], "lambda");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const double k = std::stod(rows[i][kc]);
    EXPECT_LE(rel(std::stod(rows[i][lc]), 6 * std::sin(k) / k - 6), 1e-12) << k;
  }
}

TEST(CliSpectrum, JobsGiveIdenticalFiles) {
  const auto one = scratch("jobs1.csv");
  const auto many = scratch("jobs8.csv");
  const std::string base = "spectrum --d 3 --alpha 1.25 --delta 0.3 --kmax 12 --out ";
  ASSERT_EQ(run(base + one.string() + " --jobs 1").status, 0);
  ASSERT_EQ(run(base + many.string() + " --jobs 8").status, 0);
  const auto a = slurp(one);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(many));
}

TEST(CliSpectrum, JsonLines) {
  const auto r = run("spectrum --d 2 --alpha 1 --delta 1 --kmax 2 --format json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 6u);  // 0 1 2 4 5 8
  EXPECT_EQ(j.back().at("m"), 8);
}

TEST(CliSpectrum, GuardExitTwo) {
  EXPECT_EQ(run("spectrum --d 2 --alpha 1 --delta 1 --kmax 5000").status, 2);
}

TEST(CliPhase, PointOnRealAxis) {
  const auto r = run("phase --alpha 1 --beta 1 --order 100 --re-min 8 --re-max 8 --im-min 0 "
                     "--im-max 0 --nx 1 --ny 1");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Row{"re_z", "im_z", "re_T", "im_T", "finite"}));
  // T_0^(100)(8) - 1 from the 1280-bit finite-difference quotient.
  constexpr double kFrozen = 0.90915842125395797566 - 1;
  EXPECT_NEAR(std::stod(rows[1][2]), kFrozen, 1e-10);
  EXPECT_EQ(std::stod(rows[1][3]), 0.0);
}

TEST(CliPhase, PositiveAxisIsFinite) {
  const auto r = run("phase --alpha 1 --beta 1 --order 60 --re-min 0.5 --re-max 40 --im-min 0 "
                     "--im-max 0 --nx 4 --ny 1");
  ASSERT_EQ(r.status, 0);
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][4], "1") << i;
}

TEST(CliPhase, GridShapeAndMarkers) {
  const auto r = run("phase --alpha 1 --beta 1 --order 40 --re-min -10 --re-max 10 --im-min -10 "
                     "--im-max 10 --nx 10 --ny 10");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(parse_csv(r.out).size(), 101u);
  const auto origin = run("phase --alpha 1 --beta 1 --order 40 --re-min -1 --re-max 1 "
                          "--im-min 0 --im-max 0 --nx 3 --ny 1");
  const auto rows = parse_csv(origin.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[2][4], "0");
  EXPECT_TRUE(std::isnan(std::stod(rows[2][2])));
}

TEST(CliPhase, BadFlagsExitTwo) {
  EXPECT_EQ(run("phase --alpha 1 --beta 1 --order 40 --nx 0 --ny 3").status, 2);
  EXPECT_EQ(run("phase --alpha 1 --beta 1 --order 40 --nx 4000 --ny 4000").status, 2);
}

TEST(CliBench, SingleRep) {
  const auto r = run("bench --d 3 --alpha 2 --delta 1 --k 6 --reps 1");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("reps"), 1);
  EXPECT_EQ(j.at("method"), "asymptotic");
  EXPECT_GT(j.at("mean_ns").get<double>(), 0.0);
  EXPECT_LE(j.at("min_ns").get<double>(), j.at("mean_ns").get<double>());
}

TEST(CliBench, ZeroIsCheapest) {
  const auto zero = nlohmann::json::parse(run("bench --d 3 --alpha 2 --delta 1 --k 0 --reps 20000").out);
  const auto mac = nlohmann::json::parse(
      run("bench --d 3 --alpha 2 --delta 1 --k 5.9 --reps 20000").out);
  EXPECT_EQ(zero.at("method"), "zero");
  EXPECT_EQ(mac.at("method"), "maclaurin");
  EXPECT_LT(zero.at("mean_ns").get<double>(), mac.at("mean_ns").get<double>());
}

TEST(CliBench, BadRepsExitTwo) {
  EXPECT_EQ(run("bench --d 3 --alpha 2 --delta 1 --k 6 --reps 0").status, 2);
}

}  // namespace
