// Copyright 2026 The VBQ Authors. All Rights Reserved.
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

#include <doctest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vbq/baselines.hpp"
#include "vbq/cli.hpp"
#include "vbq/container.hpp"
#include "vbq/csv_io.hpp"
#include "vbq/error.hpp"
#include "vbq/sweep.hpp"

namespace vbq {
namespace {

namespace fs = std::filesystem;

const std::string kData = VBQ_TEST_DATA_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("vbq_cli_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string operator/(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// "K=3 total_bits=..." -> {K: "3", ...}
std::map<std::string, std::string> summary(const std::string& line) {
  std::map<std::string, std::string> out;
  std::istringstream ss(line);
  std::string item;
  while (ss >> item) {
    const auto eq = item.find('=');
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

TEST_CASE("three prior-matched posteriors encode to three medians") {
  TempDir tmp;
  spit(tmp / "in.csv", "mu,sigma2\n0,1\n0,1\n0,1\n");
  const Run enc = run({"encode", tmp / "in.csv", "-o", tmp / "out.vbq",
                       "--lambda", "10"});
  REQUIRE(enc.code == 0);
  const auto s = summary(enc.out);
  CHECK(s.at("K") == "3");
  CHECK(s.at("rate_bits") == "3");
  CHECK(s.at("mse_z") == "0");
  const Run dec = run({"decode", tmp / "out.vbq"});
  REQUIRE(dec.code == 0);
  CHECK(dec.out ==
        "# prior: std-normal\nnumerator,rate,z_hat\n1,1,0\n1,1,0\n1,1,0\n");
  const auto bytes = slurp(tmp / "out.vbq");
  CHECK(std::stoull(s.at("total_bits")) ==
        container_size(read_container(std::vector<std::uint8_t>(
                           bytes.begin(), bytes.end())))
            .total_bits());
}

TEST_CASE("input errors name the file, line and column") {
  TempDir tmp;
  spit(tmp / "bad.csv", "mu,variance\n0,1\n");
  const Run r = run({"encode", tmp / "bad.csv", "-o", tmp / "x.vbq"});
  CHECK(r.code == static_cast<int>(ErrorCategory::kParse));
  CHECK(r.err.find("error: parse: ") == 0);
  CHECK(r.err.find("bad.csv:1: missing column sigma2") != std::string::npos);

  spit(tmp / "short.csv", "mu,sigma2\n0,1\n0.5\n");
  const Run s = run({"encode", tmp / "short.csv", "-o", tmp / "x.vbq"});
  CHECK(s.code == static_cast<int>(ErrorCategory::kParse));
  CHECK(s.err.find("short.csv:3:") != std::string::npos);

  spit(tmp / "nan.csv", "mu,sigma2\n0,1\nabc,1\n");
  const Run n = run({"encode", tmp / "nan.csv", "-o", tmp / "x.vbq"});
  CHECK(n.code == static_cast<int>(ErrorCategory::kParse));
  CHECK(n.err.find("nan.csv:3: bad number \"abc\" in column mu") !=
        std::string::npos);

  spit(tmp / "neg.csv", "mu,sigma2\n0,1\n0,-1\n");
  const Run d = run({"encode", tmp / "neg.csv", "-o", tmp / "x.vbq"});
  CHECK(d.code == static_cast<int>(ErrorCategory::kInvalidArgument));
  CHECK(d.err.find("dimension 1") != std::string::npos);
}

TEST_CASE("exit codes follow the error category") {
  TempDir tmp;
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"encode", tmp / "missing.csv", "-o", tmp / "x.vbq"}).code == 14);
  spit(tmp / "in.csv", "mu,sigma2\n0.3,0.2\n");
  CHECK(run({"encode", tmp / "in.csv", "-o", tmp / "x.vbq", "--lambda", "0"})
            .code == 2);
  CHECK(run({"encode", tmp / "in.csv", "-o", tmp / "x.vbq", "--lambda", "1",
             "--rate-cap", "0"})
            .code == 0);
  spit(tmp / "flat.csv", "mu,sigma2\n0,1\n0,1\n0,1\n");
  CHECK(run({"encode", tmp / "flat.csv", "-o", tmp / "x.vbq", "--prior",
             "fit-gaussian"})
            .code == static_cast<int>(ErrorCategory::kDegeneratePrior));
  CHECK(run({"encode", tmp / "in.csv", "-o", tmp / "x.vbq", "--prior",
             "gaussian:0,0"})
            .code == static_cast<int>(ErrorCategory::kInvalidArgument));

  spit(tmp / "junk.vbq", "JUNKJUNKJUNK");
  CHECK(run({"decode", tmp / "junk.vbq"}).code == 10);
  REQUIRE(run({"encode", tmp / "in.csv", "-o", tmp / "ok.vbq"}).code == 0);
  std::string bytes = slurp(tmp / "ok.vbq");
  bytes[4] = 9;
  spit(tmp / "v9.vbq", bytes);
  CHECK(run({"decode", tmp / "v9.vbq"}).code == 11);
  spit(tmp / "cut.vbq", slurp(tmp / "ok.vbq").substr(0, 12));
  CHECK(run({"decode", tmp / "cut.vbq"}).code == 13);
}

TEST_CASE("external table mode") {
  TempDir tmp;
  const std::string in = kData + "/posteriors_256.csv";
  const Run enc = run({"encode", in, "-o", tmp / "e.vbq", "--lambda", "0.1",
                       "--mode", "external-table", "--emit-table",
                       tmp / "t.csv"});
  REQUIRE(enc.code == 0);
  const Run header = run({"encode", in, "-o", tmp / "h.vbq", "--lambda",
                          "0.1"});
  CHECK(std::stoull(summary(enc.out).at("total_bits")) <
        std::stoull(summary(header.out).at("total_bits")));
  const Run dec = run({"decode", tmp / "e.vbq", "--table", tmp / "t.csv"});
  REQUIRE(dec.code == 0);
  CHECK(dec.out == run({"decode", tmp / "h.vbq"}).out);
  CHECK(run({"decode", tmp / "e.vbq"}).code == 2);

  // A second table built from different data fails the checksum.
  spit(tmp / "other.csv", "rate,numerator,count\n1,1,5\n2,3,1\n");
  CHECK(run({"decode", tmp / "e.vbq", "--table", tmp / "other.csv"}).code ==
        12);
  // Encoding with a stored table reproduces the same container.
  REQUIRE(run({"encode", in, "-o", tmp / "e2.vbq", "--lambda", "0.1",
               "--mode", "external-table", "--table", tmp / "t.csv"})
              .code == 0);
  CHECK(slurp(tmp / "e2.vbq") == slurp(tmp / "e.vbq"));
  CHECK(run({"encode", in, "-o", tmp / "x.vbq", "--mode", "external-table"})
            .code == 2);
}

TEST_CASE("golden container, reconstruction and sweep") {
  TempDir tmp;
  const std::string in = kData + "/posteriors_256.csv";
  REQUIRE(run({"encode", in, "-o", tmp / "g.vbq", "--lambda", "0.1"}).code ==
          0);
  CHECK(slurp(tmp / "g.vbq") == slurp(kData + "/golden_256_lambda0.1.vbq"));

  const Run dec = run({"decode", kData + "/golden_256_lambda0.1.vbq"});
  REQUIRE(dec.code == 0);
  CHECK(dec.out == slurp(kData + "/golden_256_lambda0.1_decoded.csv"));

  const Run sw = run({"sweep", in, "--lambdas",
                      "0.015625,0.03125,0.0625,0.125,0.25,0.5,1.0,2.0,4.0,"
                      "8.0,16.0"});
  REQUIRE(sw.code == 0);
  CHECK(sw.out == slurp(kData + "/golden_sweep_256.csv"));
}

TEST_CASE("a one-point sweep reproduces the encode summary") {
  TempDir tmp;
  const std::string in = kData + "/posteriors_256.csv";
  for (const char* lambda : {"0.1", "2.5"}) {
    const Run enc = run({"encode", in, "-o", tmp / "x.vbq", "--lambda", lambda});
    const Run sw = run({"sweep", in, "--lambdas", lambda, "-o", tmp / "s.csv"});
    REQUIRE(enc.code == 0);
    REQUIRE(sw.code == 0);
    const auto s = summary(enc.out);
    std::ifstream f(tmp / "s.csv");
    static const std::vector<std::string> cols = {
        "total_rate_bits", "entropy_coded_bits", "mse_z", "log_q"};
    const CsvRecords rec = read_csv_columns(f, "s.csv", cols);
    REQUIRE(rec.rows.size() == 1);
    CHECK(rec.rows[0].fields[0] == s.at("rate_bits"));
    CHECK(rec.rows[0].fields[1] == s.at("total_bits"));
    CHECK(rec.rows[0].fields[2] == s.at("mse_z"));
    CHECK(rec.rows[0].fields[3] == s.at("log_q"));
  }
}

TEST_CASE("baseline output equals the library call") {
  TempDir tmp;
  const std::string in = kData + "/posteriors_256.csv";
  const Run r = run({"baseline", "uniform", in, "--delta", "0.5", "-o",
                     tmp / "cb.csv"});
  REQUIRE(r.code == 0);
  std::ifstream f(tmp / "cb.csv");
  const ScalarCodebook cb = read_codebook(f, "cb.csv");
  std::vector<double> means;
  for (const auto& p : read_posteriors_file(in)) means.push_back(p.mu);
  const UniformQuantization lib = uniform_quantize(means, 0.5);
  CHECK(cb.grid == lib.codebook.grid);
  CHECK(cb.probabilities == lib.codebook.probabilities);
  CHECK(cb.origin.kind == CodebookOrigin::Kind::kUniform);
  CHECK(cb.origin.parameter == 0.5);

  const Run k = run({"baseline", "kmeans", in, "--k", "6"});
  REQUIRE(k.code == 0);
  std::istringstream ks(k.out);
  const ScalarCodebook kcb = read_codebook(ks, "stdout");
  CHECK(kcb.grid == kmeans_codebook(means, 6, 0).grid);
  const std::string mse =
      "# mse: " + format_real(codebook_quantize(means, kcb).mse) + "\n";
  CHECK(k.out.find(mse) != std::string::npos);

  CHECK(run({"baseline", "lloyd", in, "--lambda", "0.05"}).code == 0);
  CHECK(run({"baseline", "gzip", in}).code == 2);
  CHECK(run({"baseline", "uniform", in, "--delta", "0"}).code == 2);
}

TEST_CASE("analysis reports") {
  const Run co = run({"analyze", "collapse", "--seed", "3"});
  REQUIRE(co.code == 0);
  std::istringstream cs(co.out);
  static const std::vector<std::string> cols = {"channel", "vbq_rate_bits",
                                                "mean_kl"};
  const CsvRecords rec = read_csv_columns(cs, "collapse", cols);
  REQUIRE(rec.rows.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    const bool collapsed = i == 1 || i == 2 || i == 4;
    if (collapsed) {
      CHECK(rec.real(i, 2) == 0.0);
      CHECK(rec.real(i, 1) <= 1.0);
    } else {
      CHECK(rec.real(i, 1) > 1.0);
    }
  }
  CHECK(co.out == run({"analyze", "--seed", "3", "collapse"}).out);

  const Run toy = run({"analyze", "toy"});
  REQUIRE(toy.code == 0);
  CHECK(toy.out.find("quantity,value\n") != std::string::npos);

  TempDir tmp;
  REQUIRE(run({"analyze", "synth", "--seed", "7", "--dims", "256", "-o",
               tmp / "p.csv"})
              .code == 0);
  CHECK(slurp(tmp / "p.csv") == slurp(kData + "/posteriors_256.csv"));

  const Run cr = run({"analyze", "compare-rd", tmp / "p.csv", "--lambdas",
                      "1,inf", "--deltas", "0.5", "--ks", "2",
                      "--lloyd-lambdas", "0.1"});
  REQUIRE(cr.code == 0);
  CHECK(cr.out.find("\nvbq,inf,0,") != std::string::npos);

  const Run sc = run({"analyze", "scatter", tmp / "p.csv", "--lambda", "0.1"});
  REQUIRE(sc.code == 0);
  CHECK(sc.out.find("# rank_correlation: ") != std::string::npos);
}

TEST_CASE("prior specifications") {
  const std::vector<GaussianPosterior> post = {{1.0, 0.1}, {2.0, 0.1},
                                               {3.0, 0.1}};
  CHECK(resolve_prior("std-normal", post) == PriorModel());
  CHECK(resolve_prior("gaussian:1,4", post) ==
        PriorModel::scaled_gaussian(1, 4));
  CHECK(resolve_prior("fit-gaussian", post) ==
        PriorModel::scaled_gaussian(0.0, 2.0 / 3.0));
  CHECK(resolve_prior("fit-piecewise:2", post).kind() ==
        PriorModel::Kind::kEmpiricalPiecewise);
  CHECK_THROWS_AS(resolve_prior("gaussian:1", post), InvalidArgumentError);
  CHECK_THROWS_AS(resolve_prior("fit-piecewise:1", post), InvalidArgumentError);
  CHECK_THROWS_AS(resolve_prior("laplace", post), InvalidArgumentError);
  CHECK_THROWS_AS(resolve_prior("empirical:/nonexistent/k.csv", post),
                  IoError);
  CHECK(parse_real_list("1,2.5,inf") ==
        std::vector<double>{1, 2.5, std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(parse_real_list("1,x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_real_list(""), InvalidArgumentError);

  TempDir tmp;
  spit(tmp / "k.csv", "z,cumprob\n-1,0.2\n0,0.5\n1,0.8\n");
  const PriorModel p = resolve_prior("empirical:" + (tmp / "k.csv"), post);
  CHECK(p.kind() == PriorModel::Kind::kEmpiricalPiecewise);
  spit(tmp / "in.csv", "mu,sigma2\n0.1,0.01\n-0.4,0.2\n");
  const Run enc = run({"encode", tmp / "in.csv", "-o", tmp / "x.vbq",
                       "--prior", "empirical:" + (tmp / "k.csv")});
  REQUIRE(enc.code == 0);
  const Run dec = run({"decode", tmp / "x.vbq"});
  REQUIRE(dec.code == 0);
  CHECK(dec.out.find("# prior: " + p.describe()) == 0);
}

}  // namespace
}  // namespace vbq
