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

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "vbq/baselines.hpp"
#include "vbq/entropy_codec.hpp"
#include "vbq/error.hpp"
#include "vbq/random.hpp"

namespace vbq {
namespace {

std::vector<double> normal_sample(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

std::vector<double> mixture_sample(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  const double centers[] = {-4.0, -1.5, 0.0, 2.0, 5.0};
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal(centers[rng.below(5)], 0.6);
  return x;
}

double lagrangian(std::span<const double> x, const ScalarCodebook& cb,
                  double lambda) {
  ScalarCodebook plain = cb;
  plain.origin = {CodebookOrigin::Kind::kLloyd, lambda};
  const CodebookQuantization q = codebook_quantize(x, plain);
  return q.mse + lambda * q.rate_bits / static_cast<double>(x.size());
}

TEST_CASE("uniform quantization examples") {
  const std::vector<double> a = {0.4, -0.4};
  const UniformQuantization qa = uniform_quantize(a, 1.0);
  CHECK(qa.values == std::vector<double>{0.0, 0.0});
  REQUIRE(qa.codebook.grid.size() == 1);
  CHECK(qa.codebook.probabilities[0] == 1.0);
  CHECK(qa.codebook.origin.kind == CodebookOrigin::Kind::kUniform);
  CHECK(qa.codebook.origin.parameter == 1.0);

  const std::vector<double> half = {0.5, 1.5, -0.5, 2.5};
  CHECK(uniform_quantize(half, 1.0).values ==
        std::vector<double>{0.0, 2.0, -0.0, 2.0});

  CHECK_THROWS_AS(uniform_quantize(a, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(uniform_quantize(a, -1.0), InvalidArgumentError);
}

TEST_CASE("uniform quantization error is at most half a cell") {
  for (double delta : {0.01, 0.3, 1.0, 7.0}) {
    const std::vector<double> x = normal_sample(3, 5000);
    const UniformQuantization q = uniform_quantize(x, delta);
    std::map<double, std::size_t> used;
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::fabs(x[i] - q.values[i]) <= delta / 2 + 1e-12);
      CHECK(q.codebook.grid[q.indices[i]] == q.values[i]);
      ++used[q.values[i]];
    }
    CHECK(std::is_sorted(q.codebook.grid.begin(), q.codebook.grid.end()));
    REQUIRE(used.size() == q.codebook.grid.size());
    double sum = 0.0;
    std::size_t j = 0;
    for (const auto& [value, count] : used) {
      CHECK(q.codebook.grid[j] == value);
      CHECK(q.codebook.probabilities[j] ==
            doctest::Approx(static_cast<double>(count) / 5000.0));
      sum += q.codebook.probabilities[j++];
    }
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("k-means examples") {
  const std::vector<double> two = {-1.0, 1.0};
  const ScalarCodebook c = kmeans_codebook(two, 2, 0);
  CHECK(c.grid == std::vector<double>{-1.0, 1.0});
  CHECK(c.probabilities == std::vector<double>{0.5, 0.5});
  CHECK(c.origin.kind == CodebookOrigin::Kind::kKmeans);

  const std::vector<double> same(10, 3.25);
  const ScalarCodebook s = kmeans_codebook(same, 1, 0);
  CHECK(s.grid == std::vector<double>{3.25});
  CHECK(s.probabilities == std::vector<double>{1.0});

  CHECK_THROWS_AS(kmeans_codebook(two, 0, 0), InvalidArgumentError);
  CHECK_THROWS_AS(kmeans_codebook(two, 3, 0), InvalidArgumentError);
  CHECK_THROWS_AS(kmeans_codebook(same, 2, 0), InvalidArgumentError);
}

TEST_CASE("k-means agrees with an independent implementation") {
  const std::vector<double> x = mixture_sample(11, 3000);
  FitTrace trace;
  const ScalarCodebook c = kmeans_codebook(x, 8, 0, &trace);
  CHECK(trace.converged);
  const std::vector<double> ref = oracle::kmeans_reference(x, 8, 2000);
  REQUIRE(c.grid.size() == ref.size());
  for (std::size_t j = 0; j < ref.size(); ++j) {
    CHECK(std::fabs(c.grid[j] - ref[j]) < 1e-6);
  }
  for (std::size_t i = 1; i < trace.objective.size(); ++i) {
    CHECK(trace.objective[i] <= trace.objective[i - 1] * (1 + 1e-12));
  }
}

TEST_CASE("entropy-constrained Lloyd limits and monotonicity") {
  const std::vector<double> x = normal_sample(5, 4000);
  const ScalarCodebook km = kmeans_codebook(x, 16, 0);

  const ScalarCodebook zero = lloyd_ec_codebook(x, 16, 0.0, 0);
  REQUIRE(zero.grid.size() == km.grid.size());
  for (std::size_t j = 0; j < km.grid.size(); ++j) {
    CHECK(zero.grid[j] == doctest::Approx(km.grid[j]).epsilon(1e-9));
  }

  const ScalarCodebook big = lloyd_ec_codebook(x, 16, 1e6, 0);
  CHECK(big.grid.size() == 1);
  CHECK(codebook_entropy(big) == 0.0);

  const double lambda = 0.1;
  FitTrace trace;
  const ScalarCodebook ec = lloyd_ec_codebook(x, 16, lambda, 0, &trace);
  CHECK(trace.converged);
  for (std::size_t i = 1; i < trace.objective.size(); ++i) {
    CHECK(trace.objective[i] <= trace.objective[i - 1] * (1 + 1e-12));
  }
  const CodebookQuantization kq = codebook_quantize(x, km);
  const double km_j = kq.mse + lambda * codebook_entropy(km);
  CHECK(trace.objective.back() <= km_j + 1e-12);
  CHECK(lagrangian(x, ec, lambda) <= km_j + 1e-12);
  CHECK(codebook_entropy(ec) < codebook_entropy(km));
  double sum = 0.0;
  for (double p : ec.probabilities) sum += p;
  CHECK(std::fabs(sum - 1.0) < 1e-12);
  CHECK(std::is_sorted(ec.grid.begin(), ec.grid.end()));

  CHECK_THROWS_AS(lloyd_ec_codebook(x, 16, -1.0, 0), InvalidArgumentError);
}

TEST_CASE("codebook quantization examples") {
  ScalarCodebook cb;
  cb.grid = {-1.0, 0.5, 2.0};
  cb.probabilities = {0.25, 0.5, 0.25};
  cb.origin = {CodebookOrigin::Kind::kKmeans, 0.0};
  const std::vector<double> on_grid = {-1.0, 2.0, 0.5, 0.5};
  const CodebookQuantization q = codebook_quantize(on_grid, cb);
  CHECK(q.mse == 0.0);
  CHECK(q.indices == std::vector<std::size_t>{0, 2, 1, 1});
  CHECK(q.rate_bits == 6.0);

  ScalarCodebook one;
  one.grid = {0.0};
  one.probabilities = {1.0};
  const std::vector<double> x = normal_sample(1, 100);
  CHECK(codebook_quantize(x, one).rate_bits == 0.0);

  CHECK_THROWS_AS(codebook_quantize(x, ScalarCodebook{}), InvalidArgumentError);
}

TEST_CASE("codebook rate matches the arithmetic coder") {
  const std::vector<double> x = mixture_sample(21, 20000);
  for (const ScalarCodebook& cb :
       {kmeans_codebook(x, 12, 0), lloyd_ec_codebook(x, 24, 0.05, 0)}) {
    const CodebookQuantization q = codebook_quantize(x, cb);
    std::vector<std::uint32_t> counts(cb.grid.size(), 0);
    std::vector<std::uint32_t> idx;
    for (std::size_t j : q.indices) {
      ++counts[j];
      idx.push_back(static_cast<std::uint32_t>(j));
    }
    // The fit data are the quantized data, so the stored probabilities are
    // exactly the occupancy fractions.
    for (std::size_t j = 0; j < counts.size(); ++j) {
      CHECK(cb.probabilities[j] ==
            doctest::Approx(counts[j] / 20000.0).epsilon(1e-12));
    }
    const BitString bits = encode_indices(idx, counts);
    CHECK(std::fabs(static_cast<double>(bits.bit_length()) - q.rate_bits) <=
          32.0);
    CHECK(decode_indices(bits, counts, idx.size()) == idx);
  }
}

TEST_CASE("codebook origin tags round trip") {
  for (const CodebookOrigin& o :
       {CodebookOrigin{CodebookOrigin::Kind::kUniform, 0.25},
        CodebookOrigin{CodebookOrigin::Kind::kKmeans, 0.0},
        CodebookOrigin{CodebookOrigin::Kind::kLloyd, 0.1}}) {
    const CodebookOrigin back = CodebookOrigin::parse(o.describe());
    CHECK(back.kind == o.kind);
    CHECK(back.parameter == o.parameter);
  }
  CHECK(CodebookOrigin{CodebookOrigin::Kind::kUniform, 0.5}.describe() ==
        "uniform(delta=0.5)");
  CHECK_THROWS_AS(CodebookOrigin::parse("lloyd(lambda=abc)"), ParseError);
  CHECK_THROWS_AS(CodebookOrigin::parse("gzip"), ParseError);
}

TEST_CASE("restricted grid quantization stays inside the grid cell") {
  const PriorModel prior;
  const std::vector<double> x = normal_sample(8, 500);
  for (double delta : {0.1, 0.5, 2.0}) {
    const RestrictedQuantization q = restricted_grid_quantize(x, prior, delta);
    REQUIRE(q.code_points.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double cell = std::nearbyint(x[i] / delta);
      CHECK(q.reconstruction[i] >= (cell - 0.5) * delta - 1e-9);
      CHECK(q.reconstruction[i] <= (cell + 0.5) * delta + 1e-9);
    }
  }
  const std::vector<double> zero = {0.0};
  const RestrictedQuantization z = restricted_grid_quantize(zero, prior, 1.0);
  CHECK(z.code_points[0] == CodePoint());
  CHECK(z.reconstruction[0] == 0.0);
  CHECK_THROWS_AS(restricted_grid_quantize(x, prior, 0.0),
                  InvalidArgumentError);
}

}  // namespace
}  // namespace vbq
