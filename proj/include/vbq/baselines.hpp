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

// Posterior-blind scalar quantizers applied to posterior means: a uniform
// grid, a k-means codebook and an entropy-constrained Lloyd codebook. All of
// them account their rate with the empirical codeword probabilities.

#ifndef VBQ_BASELINES_HPP_
#define VBQ_BASELINES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbq/dyadic.hpp"
#include "vbq/prior.hpp"

namespace vbq {

struct CodebookOrigin {
  enum class Kind { kUniform, kKmeans, kLloyd };
  Kind kind = Kind::kUniform;
  double parameter = 0.0;  // grid spacing for uniform, lambda for lloyd

  std::string describe() const;
  // Inverse of describe(); throws ParseError.
  static CodebookOrigin parse(std::string_view text);
};

struct ScalarCodebook {
  std::vector<double> grid;           // strictly increasing
  std::vector<double> probabilities;  // sums to 1
  CodebookOrigin origin;
};

struct UniformQuantization {
  std::vector<std::size_t> indices;  // positions in codebook.grid
  std::vector<double> values;        // round(mu / delta) * delta
  ScalarCodebook codebook;
};

// Rounds each mean to the nearest multiple of delta (half to even). The
// codebook holds the grid points actually used with their frequencies.
UniformQuantization uniform_quantize(std::span<const double> means,
                                     double delta);

// Objective after every assignment step of a codebook fit.
struct FitTrace {
  std::vector<double> objective;
  bool converged = false;
};

// One-dimensional k-means, initialized at the sample quantiles
// i / (k + 1). An empty cluster is re-seeded at the sample farthest from its
// centroid; `seed` breaks ties between equally far samples. Throws
// InvalidArgumentError when there are fewer than k distinct samples.
ScalarCodebook kmeans_codebook(std::span<const double> samples, std::size_t k,
                               std::uint64_t seed, FitTrace* trace = nullptr);

// Entropy-constrained Lloyd iteration minimizing
//   J = mean (x - c_j)^2 + lambda * mean(-log2 p_j),
// started from the k-means codebook with k_init codewords. Codewords that
// lose all their samples are pruned.
ScalarCodebook lloyd_ec_codebook(std::span<const double> samples,
                                 std::size_t k_init, double lambda,
                                 std::uint64_t seed, FitTrace* trace = nullptr);

struct CodebookQuantization {
  std::vector<std::size_t> indices;
  double rate_bits = 0.0;  // sum of -log2 p over the assigned codewords
  double mse = 0.0;
};

// Nearest-codeword assignment; Lloyd codebooks use their penalized rule.
CodebookQuantization codebook_quantize(std::span<const double> means,
                                       const ScalarCodebook& codebook);

// Grid-restricted quantization on the dyadic grid: each mean is rounded to
// the cell [(n - 1/2) delta, (n + 1/2) delta) and that cell is represented by
// the shortest code point inside its prior-CDF image.
struct RestrictedQuantization {
  std::vector<CodePoint> code_points;
  std::vector<double> reconstruction;
};
RestrictedQuantization restricted_grid_quantize(std::span<const double> means,
                                                const PriorModel& prior,
                                                double delta);

// -sum p log2 p
double codebook_entropy(const ScalarCodebook& codebook);

}  // namespace vbq

#endif  // VBQ_BASELINES_HPP_
