// Copyright 2026 The QCM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

#include "qcm/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string("cd '") + dir.string() + "' && '" QCM_CLI_PATH "' " + args +
                          " > '" + log.string() + "' 2>&1";
  const int raw = std::system(cmd.c_str());
  CliRun r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = qcm::io::read_file(log.string());
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qcm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

std::string slurp(const fs::path& p) { return qcm::io::read_file(p.string()); }

}  // namespace

TEST_F(CliTest, oracle_two_qubit_chain) {
  const CliRun r = run("oracle --lattice chain --q 2", dir_);
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("-1.5"), std::string::npos) << r.out;
}

TEST_F(CliTest, usage_errors_exit_two) {
  EXPECT_EQ(run("expand --lattice square --nmax 2", dir_).status, 2);
  EXPECT_EQ(run("nonsense", dir_).status, 2);
  EXPECT_EQ(run("sweep --lattice chain --q 2 --backend bogus", dir_).status, 2);
}

TEST_F(CliTest, expand_writes_powers_and_groups) {
  const CliRun r = run("expand --lattice chain --q 2 --nmax 2 --out ex", dir_);
  ASSERT_EQ(r.status, 0) << r.out;
  const auto h2 = qcm::io::read_json((dir_ / "ex" / "power_2.json").string());
  EXPECT_EQ(h2.at("terms").size(), 4u);
  const auto g2 = qcm::io::read_json((dir_ / "ex" / "groups_2.json").string());
  EXPECT_EQ(g2.at("groups").size(), 3u);
  EXPECT_TRUE(fs::exists(dir_ / "ex" / "lattice.json"));
}

TEST_F(CliTest, sweep_from_expansion_matches_direct) {
  ASSERT_EQ(run("expand --lattice square --rows 2 --cols 3 --nmax 4 --out ex", dir_).status, 0);
  const CliRun a = run("sweep --from ex --theta 1:1:1 --out a.csv", dir_);
  ASSERT_EQ(a.status, 0) << a.out;
  const CliRun b = run("sweep --lattice square --rows 2 --cols 3 --theta 1:1:1 --out b.csv", dir_);
  ASSERT_EQ(b.status, 0) << b.out;
  const std::string csv = slurp(dir_ / "a.csv");
  EXPECT_EQ(csv, slurp(dir_ / "b.csv"));
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header.rfind("theta,theta_over_pi,m1,", 0), 0u) << header;
  EXPECT_NE(row.find("-1.1666666666666"), std::string::npos) << row;
}

TEST_F(CliTest, sweep_shots_writes_stores) {
  const CliRun r = run(
      "sweep --lattice chain --q 4 --theta 0.9:1.1:2 --backend shots --shots 64 --seed 3 "
      "--bootstrap 5 --out s.csv --store-dir stores",
      dir_);
  ASSERT_EQ(r.status, 0) << r.out;
  std::size_t stores = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "stores")) {
    const auto j = qcm::io::read_json(e.path().string());
    EXPECT_EQ(j.at("shots_per_group"), 64);
    ++stores;
  }
  EXPECT_EQ(stores, 2u);
}

TEST_F(CliTest, ensemble_reruns_are_byte_identical) {
  const std::string args =
      "ensemble --lattice square --rows 2 --cols 3 --instances 15 --seed 4 --store-out store.json ";
  ASSERT_EQ(run(args + "--out a.csv --hist a.json", dir_).status, 0);
  ASSERT_EQ(run(args + "--out b.csv --hist b.json", dir_).status, 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
  // Reusing the saved store gives the same rows.
  ASSERT_EQ(run("ensemble --lattice square --rows 2 --cols 3 --instances 15 --seed 4 "
                "--store store.json --out c.csv --hist c.json",
                dir_).status,
            0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "c.csv"));
  const auto hist = qcm::io::read_json((dir_ / "a.json").string());
  EXPECT_EQ(hist.at("edges").size(), 101u);
}

TEST_F(CliTest, scaling_small) {
  const CliRun r = run("scaling --family chain --q 2 --n 2 --out sc.csv", dir_);
  ASSERT_EQ(r.status, 0) << r.out;
  const std::string csv = slurp(dir_ / "sc.csv");
  EXPECT_NE(csv.find("2,4,3"), std::string::npos) << csv;
}
