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

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "vbq/csv_io.hpp"
#include "vbq/error.hpp"
#include "vbq/random.hpp"

namespace vbq {
namespace {

TEST_CASE("reals print with enough digits to read back exactly") {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.normal() * std::exp2(rng.uniform(-60, 60));
    CHECK(std::stod(format_real(x)) == x);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("posteriors round trip and tolerate layout variations") {
  const std::vector<GaussianPosterior> p = {{0.1, 0.01}, {-2.5, 1e-9},
                                            {1e300, 3.0}};
  std::stringstream ss;
  write_posteriors(ss, p);
  const auto back = read_posteriors(ss, "mem");
  REQUIRE(back.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(back[i].mu == p[i].mu);
    CHECK(back[i].sigma2 == p[i].sigma2);
  }

  std::istringstream messy(
      "# generated by hand\r\n\nid, sigma2 ,mu\r\n7,0.5,1\n\n# mid\n8, 2 ,-1\n");
  const auto m = read_posteriors(messy, "messy.csv");
  REQUIRE(m.size() == 2);
  CHECK(m[0].mu == 1.0);
  CHECK(m[0].sigma2 == 0.5);
  CHECK(m[1].mu == -1.0);
  CHECK(m[1].sigma2 == 2.0);

  std::istringstream header_only("mu,sigma2\n");
  CHECK(read_posteriors(header_only, "h").empty());
}

TEST_CASE("parse errors carry source and line") {
  const auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_posteriors(in, "f.csv");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("") == "f.csv:0: missing header row");
  CHECK(message("# only\n") == "f.csv:1: missing header row");
  CHECK(message("mu\n1\n") == "f.csv:1: missing column sigma2");
  CHECK(message("mu,sigma2\n1,2,3\n") == "f.csv:2: expected 2 fields, found 3");
  CHECK(message("mu,sigma2\n1,2\n1,\n") ==
        "f.csv:3: bad number \"\" in column sigma2");
  CHECK(message("mu,sigma2\n1x,2\n") ==
        "f.csv:2: bad number \"1x\" in column mu");
  CHECK_THROWS_AS(read_posteriors_file("/nonexistent/p.csv"), IoError);
}

TEST_CASE("frequency tables round trip and are validated") {
  FrequencyTable::Map m;
  m[CodePoint()] = 10;
  m[CodePoint::make(3, 2)] = 4;
  m[CodePoint::make(5, 3)] = 1;
  const FrequencyTable t(m);
  std::stringstream ss;
  write_table(ss, t);
  CHECK(ss.str() == "rate,numerator,count\n1,1,10\n2,3,4\n3,5,1\n");
  CHECK(read_table(ss, "t") == t);

  const auto fails = [](const std::string& text) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_table(in, "t.csv"), ParseError);
  };
  fails("rate,numerator,count\n2,2,1\n");   // even numerator
  fails("rate,numerator,count\n2,5,1\n");   // numerator too large
  fails("rate,numerator,count\n0,1,1\n");   // rate zero
  fails("rate,numerator,count\n61,1,1\n");  // rate too large
  fails("rate,numerator,count\n1,1,0\n");   // zero count
  fails("rate,numerator,count\n1,1,1\n1,1,2\n");  // duplicate
  fails("rate,numerator,count\n1,1,-3\n");
}

TEST_CASE("knots and codebooks") {
  std::istringstream k("z,cumprob\n-1,0.25\n1,0.75\n");
  const auto knots = read_knots(k, "k");
  REQUIRE(knots.size() == 2);
  CHECK(knots[1].z == 1.0);
  CHECK(knots[1].cumprob == 0.75);

  ScalarCodebook cb;
  cb.grid = {-0.75, 0.0, 1.0 / 3.0};
  cb.probabilities = {0.25, 0.5, 0.25};
  cb.origin = {CodebookOrigin::Kind::kLloyd, 0.1};
  std::stringstream ss;
  write_codebook(ss, cb);
  const ScalarCodebook back = read_codebook(ss, "cb");
  CHECK(back.grid == cb.grid);
  CHECK(back.probabilities == cb.probabilities);
  CHECK(back.origin.kind == cb.origin.kind);
  CHECK(back.origin.parameter == cb.origin.parameter);

  std::istringstream no_origin("grid_point,probability\n0,1\n");
  CHECK_THROWS_AS(read_codebook(no_origin, "cb"), ParseError);
  std::istringstream unsorted(
      "# origin: kmeans\ngrid_point,probability\n1,0.5\n0,0.5\n");
  CHECK_THROWS_AS(read_codebook(unsorted, "cb"), ParseError);
}

TEST_CASE("report writers use fixed headers") {
  std::ostringstream rd;
  const std::vector<RdRow> rows = {{"vbq", 0.5, 1.25, 0.1}};
  write_rd_rows(rd, rows);
  CHECK(rd.str() ==
        "method,parameter,bitrate_per_dim,mse_z\nvbq,0.5,1.25,"
        "0.10000000000000001\n");

  std::ostringstream rec;
  const std::vector<CodePoint> cps = {CodePoint::make(3, 2)};
  const std::vector<double> z = {0.5};
  write_reconstruction(rec, cps, z);
  CHECK(rec.str() == "numerator,rate,z_hat\n3,2,0.5\n");

  std::ostringstream c;
  const std::vector<std::string> lines = {"seed: 1", "lambda: 2"};
  write_comments(c, lines);
  CHECK(c.str() == "# seed: 1\n# lambda: 2\n");

  std::istringstream with_comments("# a: 1\nx\n# b\n3\n");
  const std::vector<std::string> cols = {"x"};
  const CsvRecords r = read_csv_columns(with_comments, "c", cols);
  CHECK(r.comments == std::vector<std::string>{"a: 1", "b"});
  CHECK(r.integer(0, 0) == 3);
  CHECK(r.rows[0].line == 4);
}

}  // namespace
}  // namespace vbq
