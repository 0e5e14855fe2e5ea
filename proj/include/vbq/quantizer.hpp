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

// Posterior-aware quantization of mean-field Gaussian latents onto the dyadic
// quantile grid of a prior.
//
// Each dimension is quantized independently by minimizing
//
//   l(xi) = (F^-1(xi) - mu)^2 + 2 * lambda * sigma^2 * R(xi)
//
// over code points xi, where F is the prior CDF and R the code point's
// bitlength. The search visits the two rate-r grid neighbors of F(mu) for
// r = 1, 2, ... and stops once no longer code point can beat the incumbent.

#ifndef VBQ_QUANTIZER_HPP_
#define VBQ_QUANTIZER_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vbq/dyadic.hpp"
#include "vbq/prior.hpp"

namespace vbq {

struct GaussianPosterior {
  double mu = 0.0;
  double sigma2 = 1.0;
};

struct RdConfig {
  // Rate penalty. +infinity selects the all-median limit.
  double lambda = 1.0;
  // Hard stop for the rate search. Without a cap, lambda must be positive
  // and the search is bounded by kMaxRate.
  std::optional<unsigned> rate_cap = 32;
  double sigma2_floor = 1e-12;

  bool infinite() const noexcept {
    return lambda == std::numeric_limits<double>::infinity();
  }
};

struct DimensionResult {
  CodePoint code_point;
  double objective = 0.0;
  double distortion = 0.0;      // (F^-1(xi) - mu)^2
  double reconstruction = 0.0;  // F^-1(xi)
  unsigned final_rate = 0;      // last r visited by the search
  unsigned candidates = 0;      // objective evaluations
  bool hit_rate_cap = false;
};

struct QuantizedVector {
  std::vector<CodePoint> code_points;
  std::vector<unsigned> rates;
  std::vector<double> objectives;
  std::vector<double> reconstruction;
  std::vector<DimensionResult> diagnostics;
  std::uint64_t total_rate = 0;
  double total_objective = 0.0;

  std::size_t size() const noexcept { return code_points.size(); }
};

// The per-dimension objective above. No validation, no sigma^2 floor.
double objective(const CodePoint& xi_hat, const GaussianPosterior& post,
                 const PriorModel& prior, double lambda);

// Returns the objective-minimizing code point. Ties go to the lower rate,
// then to the smaller code point. Throws InvalidArgumentError for a
// non-finite or negative posterior or lambda < 0, and UnboundedSearchError
// for lambda == 0 without a rate cap.
DimensionResult optimize_dimension(const GaussianPosterior& post,
                                   const PriorModel& prior,
                                   const RdConfig& cfg);

// Quantizes every dimension independently. Large inputs are split across
// threads; the result is identical to a sequential run. Errors are rethrown
// as the same category with the failing dimension index in the message.
QuantizedVector quantize_vector(std::span<const GaussianPosterior> posteriors,
                                const PriorModel& prior, const RdConfig& cfg);

// Constant-free log q(z_hat | x) = -sum (z_hat - mu)^2 / (2 sigma^2).
double log_posterior(std::span<const GaussianPosterior> posteriors,
                     std::span<const double> reconstruction,
                     double sigma2_floor = 1e-12);

}  // namespace vbq

#endif  // VBQ_QUANTIZER_HPP_
