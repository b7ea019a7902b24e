// Copyright 2026 The Spinshape Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spinshape/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spinshape/manifest.hpp"

namespace spinshape::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Json read_json(const fs::path& path) { return Json::parse(read_file(path)); }

Json without_manifest(Json doc) {
  doc.erase("manifest");
  return doc;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("spinshape_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void design_ring(const std::string& file, int count, const std::string& jobs = "1") {
    const Result r = invoke({"design", "--ring", "4", "--in", "1", "--out", "2", "--T-opt", "1:8",
                             "--count", std::to_string(count), "--restarts", "2", "--max-iter", "80",
                             "--bias-box", "6", "--seed", "7", "--jobs", jobs, "-o", path(file)});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  void sample(const std::string& file, int dim, int count, const std::string& jobs = "1") {
    const Result r = invoke({"sample", "--dim", std::to_string(dim), "--count", std::to_string(count),
                             "--seed", "42", "--jobs", jobs, "-o", path(file)});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, TwoSpinDesignIsPerfect) {
  const Result r = invoke({"design", "--ring", "2", "--T", "1.5707963267948966", "--bias-box", "0.5",
                           "--count", "1", "--seed", "1", "-o", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = read_json(path("c.json"));
  ASSERT_EQ(doc.at("controllers").size(), 1u);
  EXPECT_GT(doc.at("controllers")[0].at("fidelity").get<double>(), 1.0 - 1e-9);
  EXPECT_TRUE(verify_document(doc).ok);
}

TEST_F(CliTest, DesignIsReproducibleAndJobInvariant) {
  design_ring("a.json", 4);
  design_ring("b.json", 4);
  design_ring("c.json", 4, "3");
  const Json a = read_json(path("a.json"));
  const Json b = read_json(path("b.json"));
  EXPECT_EQ(without_manifest(a).dump(), without_manifest(b).dump());
  EXPECT_EQ(without_manifest(a).dump(), without_manifest(read_json(path("c.json"))).dump());
  EXPECT_EQ(a.at("manifest").at("payload_sha256"), b.at("manifest").at("payload_sha256"));
  EXPECT_EQ(a.at("manifest").at("config_sha256"), b.at("manifest").at("config_sha256"));
  EXPECT_EQ(a.at("manifest").at("seed"), 7u);
  EXPECT_EQ(a.at("controllers").size(), 4u);
}

TEST_F(CliTest, SeedDefaultsToEnvironment) {
  ::setenv("SPINSHAPE_SEED", "7", 1);
  const Result r = invoke({"design", "--ring", "4", "--in", "1", "--out", "2", "--T-opt", "1:8",
                           "--count", "4", "--restarts", "2", "--max-iter", "80", "--bias-box", "6",
                           "-o", path("env.json")});
  ::unsetenv("SPINSHAPE_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  design_ring("flag.json", 4);
  EXPECT_EQ(without_manifest(read_json(path("env.json"))), without_manifest(read_json(path("flag.json"))));
}

TEST_F(CliTest, SampleCommand) {
  sample("d2.json", 2, 5);
  const Json doc = read_json(path("d2.json"));
  EXPECT_EQ(doc.at("acceptance_rate"), 1.0);
  EXPECT_EQ(doc.at("processes").size(), 5u);

  sample("a.json", 5, 100);
  sample("b.json", 5, 100, "4");
  EXPECT_EQ(without_manifest(read_json(path("a.json"))), without_manifest(read_json(path("b.json"))));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(invoke({"sample", "--dim", "1", "--count", "5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"design", "--ring", "3"}).code, kExitUsage);
  EXPECT_EQ(invoke({"design", "--ring", "3", "--T", "1", "--T-opt", "1:2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
  EXPECT_EQ(invoke({"design", "--ring", "3", "--T", "1", "--in", "5"}).code, kExitData);
  EXPECT_EQ(invoke({"sweep", "--ctrl", path("missing.json"), "--deph", path("missing.json")}).code,
            kExitData);
  EXPECT_EQ(invoke({"sample", "--dim", "8", "--count", "50", "--budget", "100"}).code, kExitNumerical);
}

TEST_F(CliTest, SweepCsvWithSidecar) {
  design_ring("ctrl.json", 3);
  sample("deph.json", 4, 40);
  const Result r = invoke({"sweep", "--ctrl", path("ctrl.json"), "--deph", path("deph.json"), "--top",
                           "2", "--grid", "5", "-o", path("sweep.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(read_file(path("sweep.csv")));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header,
            "controller_rank,delta,eps_min,eps_max,eps_mean,eps_median,eps_std,"
            "fid_min,fid_max,fid_mean,fid_median,fid_std");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 10);
  EXPECT_TRUE(fs::exists(path("sweep.csv.manifest.json")));
  EXPECT_EQ(invoke({"verify", path("sweep.csv"), path("ctrl.json"), path("deph.json")}).code, kExitOk);

  std::ofstream(path("sweep.csv"), std::ios::app) << "9,9,9,9,9,9,9,9,9,9,9,9\n";
  const Result v = invoke({"verify", path("sweep.csv")});
  EXPECT_EQ(v.code, kExitData);
  EXPECT_NE(v.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SweepJsonAndDimensionMismatch) {
  design_ring("ctrl.json", 2);
  sample("deph.json", 4, 30);
  sample("deph3.json", 3, 10);
  const Result r = invoke({"sweep", "--ctrl", path("ctrl.json"), "--deph", path("deph.json"), "--grid",
                           "3", "--hist-bins", "5", "-o", path("sweep.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = read_json(path("sweep.json"));
  ASSERT_EQ(doc.at("reports").size(), 1u);
  EXPECT_EQ(doc.at("reports")[0].at("error_stats").size(), 3u);
  EXPECT_EQ(doc.at("reports")[0].at("error_histogram").at("counts").size(), 5u);
  EXPECT_EQ(invoke({"sweep", "--ctrl", path("ctrl.json"), "--deph", path("deph3.json")}).code, kExitData);
}

TEST_F(CliTest, TamperedInputIsRejected) {
  sample("deph.json", 4, 10);
  design_ring("ctrl.json", 1);
  Json doc = read_json(path("deph.json"));
  doc["processes"][0]["rates"][0] = 0.5;
  std::ofstream(path("deph.json"), std::ios::trunc) << doc.dump(2);
  EXPECT_EQ(invoke({"sweep", "--ctrl", path("ctrl.json"), "--deph", path("deph.json")}).code, kExitData);
  EXPECT_EQ(invoke({"verify", path("deph.json")}).code, kExitData);
}

TEST_F(CliTest, VerifyDetectsChangedInputs) {
  design_ring("ctrl.json", 2);
  sample("deph.json", 4, 20);
  ASSERT_EQ(invoke({"sensitivity", "--ctrl", path("ctrl.json"), "--deph", path("deph.json"), "-o",
                    path("s.json")}).code,
            0);
  EXPECT_EQ(invoke({"verify", path("s.json")}).code, kExitOk);
  sample("deph.json", 4, 21);
  EXPECT_EQ(invoke({"verify", path("s.json")}).code, kExitData);
}

TEST_F(CliTest, SensitivityAndCorrelate) {
  design_ring("ctrl.json", 5);
  sample("deph.json", 4, 30);
  ASSERT_EQ(invoke({"sensitivity", "--ctrl", path("ctrl.json"), "--deph", path("deph.json"), "--top",
                    "2", "-o", path("s1.json")}).code,
            0);
  ASSERT_EQ(invoke({"sensitivity", "--ctrl", path("ctrl.json"), "--deph", path("deph.json"), "-o",
                    path("s2.json")}).code,
            0);
  const Json s2 = read_json(path("s2.json"));
  EXPECT_FALSE(s2.at("summary").is_null());
  for (const Json& p : s2.at("points")) EXPECT_GT(p.at("eta").get<double>(), 0.0);

  const Result r = invoke({"correlate", "--reports", path("s1.json"), path("s2.json"), "-o", path("c.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json c = read_json(path("c.json"));
  EXPECT_EQ(c.at("reports"), 2);
  EXPECT_EQ(c.at("pairs").size(), s2.at("points").size() + 2);
  EXPECT_LE(std::abs(c.at("pearson_r").get<double>()), 1.0);
  EXPECT_TRUE(c.contains("slope"));
  EXPECT_EQ(c.at("manifest").at("inputs").size(), 2u);
}

TEST_F(CliTest, Logsens) {
  design_ring("ctrl.json", 2);
  Result r = invoke({"logsens", "--ctrl", path("ctrl.json"), "--struct", "coupling:1-2", "--struct",
                     "identity"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "controller_rank,structure,p_inf,log_sensitivity,status");
  std::vector<std::string> rows;
  while (std::getline(csv, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NE(rows[0].find(",coupling-12,"), std::string::npos);
  EXPECT_NE(rows[1].find(",identity,"), std::string::npos);
  EXPECT_NE(rows[1].find(",0,ok"), std::string::npos);

  r = invoke({"logsens", "--ctrl", path("ctrl.json"), "--top", "1", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json doc = Json::parse(r.out);
  // 4 biases, 4 ring couplings and the maximum.
  ASSERT_EQ(doc.at("rows").size(), 9u);
  EXPECT_EQ(doc.at("rows").back().at("structure"), "max");
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < doc.at("rows").size(); ++i) {
    worst = std::max(worst, doc.at("rows")[i].at("log_sensitivity").get<double>());
  }
  EXPECT_EQ(doc.at("rows").back().at("log_sensitivity").get<double>(), worst);
  EXPECT_EQ(invoke({"logsens", "--ctrl", path("ctrl.json"), "--struct", "bias:9"}).code, kExitData);
}

TEST(Manifest, DigestsAndSealing) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const Json sealed = seal(Json{{"x", 1}}, RunManifest{});
  EXPECT_TRUE(verify_document(sealed).ok);
  Json tampered = sealed;
  tampered["x"] = 2;
  EXPECT_FALSE(verify_document(tampered).ok);
  EXPECT_FALSE(verify_document(Json{{"x", 1}}).ok);
}

}  // namespace
}  // namespace spinshape::cli
