// Copyright 2026 The FFQRAM Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = ffqram::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string sample(const std::string& name) { return std::string(FFQRAM_SAMPLES_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ffqram_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, EncodeTwoRecordExample) {
  const auto r = run({"encode", "--data", sample("two_records.csv"), "--mode", "angle", "--simulate", "--out",
                      path("c.txt"), "--no-timestamp", "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["p1_simulated"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(rep["p1_analytic"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(rep["fidelity"].get<double>(), 1.0, 1e-10);
  EXPECT_EQ(rep["bus_qubits"], 2);
  EXPECT_EQ(rep["gates_CNRY"], 2);
  EXPECT_EQ(rep["tau"], ffqram::count_tau(2, 2, ffqram::NoiseModel::kFull));
  EXPECT_FALSE(rep.contains("timestamp"));
  const auto c = ffqram::parse(read(path("c.txt")));
  EXPECT_EQ(c.gate_counts()["CNRY"], 2);
}

TEST_F(CliTest, EncodePrintsCircuitByDefault) {
  const auto r = run({"encode", "--data", sample("two_records.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("QUBITS 3 ANCILLA", 0), 0u);
}

TEST_F(CliTest, EncodeIsDeterministic) {
  const std::vector<std::string> args{"encode", "--data", sample("amplitudes.csv"), "--mode", "amplitude",
                                      "--simulate", "--decompose", "toffoli", "--seed", "7", "--no-timestamp"};
  const auto a = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, run(args).out);
  const json rep = json::parse(a.out);
  EXPECT_NEAR(rep["fidelity"].get<double>(), 1.0, 1e-10);
  EXPECT_EQ(rep["seed"], 7);
  EXPECT_EQ(rep["tau_circuit"], rep["tau"]);
  EXPECT_GT(rep["ancilla_qubits"].get<int>(), 0);
}

TEST_F(CliTest, EncodeComplexAmplitudes) {
  const auto r = run({"encode", "--data", sample("complex_amplitudes.csv"), "--mode", "amplitude", "--simulate",
                      "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["fidelity"].get<double>(), 1.0, 1e-10);
  EXPECT_EQ(json::parse(r.out)["gates_CNR"], 3);
}

TEST_F(CliTest, EncodeBinaryHasNoRotations) {
  const auto r = run({"encode", "--data", sample("binary.csv"), "--mode", "binary", "--simulate", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_FALSE(rep.contains("gates_CNRY"));
  EXPECT_EQ(rep["gates_CNNOT"], 3);
  EXPECT_NEAR(rep["fidelity"].get<double>(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(rep["norm"].get<double>(), 1.0);
}

TEST_F(CliTest, EncodeWithBusFileAndLabels) {
  const auto r = run({"encode", "--data", sample("labelled_angles.csv"), "--simulate", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["bus_qubits"], 4);
  const auto bus = write("bus.csv", "bits,amp\n00,1\n11,1\n");
  const auto data = write("d.csv", "11,1.2\n01,0.4\n");
  const auto b = run({"encode", "--data", data, "--bus", bus, "--simulate", "--no-timestamp"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_NE(b.err.find("zero bus amplitude"), std::string::npos);
  EXPECT_NEAR(json::parse(b.out)["fidelity"].get<double>(), 1.0, 1e-10);
}

TEST_F(CliTest, EncodeWarnsOnDuplicates) {
  const auto data = write("d.csv", "1,0.2\n1,0.3\n");
  const auto r = run({"encode", "--data", data, "--simulate", "--no-timestamp"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("duplicate"), std::string::npos);
}

TEST_F(CliTest, EncodeInputErrors) {
  const auto missing = run({"encode", "--data", path("nope.csv")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("nope.csv"), std::string::npos);
  const auto bad = run({"encode", "--data", write("bad.csv", "01,0.1\n011,0.2\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("row 2"), std::string::npos);
  EXPECT_EQ(run({"encode", "--data", sample("two_records.csv"), "--mode", "nope"}).code, 2);
  EXPECT_EQ(run({"encode"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, EncodeImpossiblePostSelection) {
  const auto data = write("zero.csv", "0,0\n1,0\n");
  EXPECT_EQ(run({"encode", "--data", data, "--simulate"}).code, 3);
  const auto amp = write("amp.csv", "0,0\n1,0\n");
  EXPECT_EQ(run({"encode", "--data", amp, "--mode", "amplitude"}).code, 3);
}

TEST_F(CliTest, EmittedCircuitReplays) {
  const auto r = run({"encode", "--data", sample("amplitudes.csv"), "--mode", "amplitude", "--out", path("c.txt"),
                      "--report", path("r.json"), "--simulate", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(read(path("r.json")));
  const auto c = ffqram::parse(read(path("c.txt")));
  const auto bus = ffqram::bus_state(ffqram::BusSpec::uniform(), 3);
  const auto out = ffqram::simulate(c, bus.tensor(ffqram::StateVector(1)));
  EXPECT_NEAR(ffqram::probability_of(out, 3, 1), rep["p1_simulated"].get<double>(), 1e-12);
}

TEST_F(CliTest, NoiseTable) {
  const auto r = run({"noise", "--M", "4", "--ps", "0.5", "--model", "full"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "M,p_s,epsilon,model,tau\n4,0.5,0.0163680675558,full,42\n");
}

TEST_F(CliTest, NoiseBothModels) {
  const auto r = run({"noise", "--M", "2,4,8,16", "--ps", "0.5,0.7,0.9,1", "--model", "both", "--out", path("n.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(read(path("n.csv")));
  std::string line;
  std::getline(in, line);
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> eps;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    eps[{f[0], f[1]}][f[3]] = std::stod(f[2]);
    ++rows;
  }
  EXPECT_EQ(rows, 32);
  for (const auto& [key, m] : eps) {
    if (key.second == "1") {
      EXPECT_EQ(m.at("full"), 0.0);
      EXPECT_EQ(m.at("mild"), 0.0);
    } else {
      EXPECT_GT(m.at("mild"), m.at("full"));
    }
  }
}

TEST_F(CliTest, NoiseErrors) {
  EXPECT_EQ(run({"noise", "--M", "3", "--ps", "0.5"}).code, 2);
  EXPECT_EQ(run({"noise", "--M", "3", "--ps", "0.5", "--n-rule", "fixed:2"}).code, 0);
  EXPECT_EQ(run({"noise", "--M", "4", "--ps", "0.5", "--n-rule", "what"}).code, 2);
  EXPECT_EQ(run({"noise", "--M", "4", "--ps", "2"}).code, 2);
}

TEST_F(CliTest, ForkRealSign) {
  const auto r = run({"fork", "--phi", "plus:2", "--u1", "I", "--u2", "minusI", "--part", "real", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["p0"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(rep["estimate"].get<double>(), -1.0, 1e-12);
  EXPECT_NEAR(rep["oracle"].get<double>(), -1.0, 1e-12);
  EXPECT_EQ(rep["qdb_preparations"], 1);
}

TEST_F(CliTest, ForkIdentityAndShots) {
  const auto r = run({"fork", "--phi", "basis:01", "--u1", "I", "--u2", "I", "--shots", "1000", "--seed", "3",
                      "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["p0"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(rep["p0_sampled"], 1.0);
  EXPECT_EQ(rep["seed"], 3);
}

TEST_F(CliTest, ForkImagAndSum) {
  const auto im =
      run({"fork", "--phi", "plus:1", "--u1", "I", "--u2", "Phase(1.5707963267948966)", "--part", "imag",
           "--ancilla", "random", "--seed", "9", "--no-timestamp"});
  ASSERT_EQ(im.code, 0) << im.err;
  EXPECT_NEAR(json::parse(im.out)["p0"].get<double>(), 0.75, 1e-12);
  const auto sum = run({"fork", "--phi", "basis:0", "--u1", "I", "--u2", "X", "--u3", "Z", "--part", "sum",
                        "--no-timestamp"});
  ASSERT_EQ(sum.code, 0) << sum.err;
  const json rep = json::parse(sum.out);
  EXPECT_NEAR(rep["estimate"].get<double>(), 5.0, 1e-12);
  EXPECT_NEAR(rep["p0"].get<double>(), 5.0 / 9.0, 1e-12);
}

TEST_F(CliTest, ForkFromFiles) {
  const auto r = run({"fork", "--phi", sample("two_records.csv"), "--u1", "I", "--u2", "X", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["estimate"].get<double>(), rep["oracle"].get<double>(), 1e-10);
  const auto c = run({"fork", "--phi", sample("bell.circuit"), "--u1", "H", "--u2", "Z", "--no-timestamp"});
  ASSERT_EQ(c.code, 0) << c.err;
}

TEST_F(CliTest, ForkWidthMismatch) {
  const auto u = write("u.txt", "QUBITS 3 ANCILLA\nH 0\n");
  EXPECT_EQ(run({"fork", "--phi", "plus:2", "--u1", "I", "--u2", u}).code, 2);
  EXPECT_EQ(run({"fork", "--phi", "plus:2", "--u1", "bogus", "--u2", "I"}).code, 2);
  EXPECT_EQ(run({"fork", "--phi", "plus:2", "--u1", "I", "--u2", "I", "--u3", "I", "--part", "real"}).code, 2);
}

TEST_F(CliTest, QsvmIdentity) {
  const auto r = run({"qsvm", "--train", sample("identity2.csv"), "--simulate", "--no-timestamp", "--out",
                      path("q.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_NEAR(rep["p_success"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(rep["fidelity"].get<double>(), 1.0, 1e-10);
  EXPECT_EQ(rep["blocks"], 4);
  EXPECT_EQ(ffqram::parse(read(path("q.txt"))).gate_counts()["CNRY"], 4);
}

TEST_F(CliTest, QsvmBasisStateAndSigns) {
  const auto one = write("one.csv", "0,0\n0,-3\n");
  const auto r = run({"qsvm", "--train", one, "--simulate", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["basis_state"], "11");
  const auto m = run({"qsvm", "--train", sample("train4x4.csv"), "--simulate", "--no-timestamp"});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_NEAR(json::parse(m.out)["overlap_real"].get<double>(), 1.0, 1e-10);
}

TEST_F(CliTest, QsvmErrors) {
  EXPECT_EQ(run({"qsvm", "--train", write("ragged.csv", "1,2\n3\n")}).code, 2);
  EXPECT_EQ(run({"qsvm", "--train", write("zero.csv", "0,0\n")}).code, 3);
}
