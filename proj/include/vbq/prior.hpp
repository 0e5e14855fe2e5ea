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

#ifndef VBQ_PRIOR_HPP_
#define VBQ_PRIOR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vbq/dyadic.hpp"

namespace vbq {

// CDF outputs are clamped into [kQuantileFloor, kQuantileCeil] so that no
// caller ever sees the excluded quantiles 0 and 1. The upper clamp is the
// largest binary64 value below one.
inline constexpr double kQuantileFloor = 0x1p-60;
inline constexpr double kQuantileCeil = 1.0 - 0x1p-53;

// Standard normal CDF, unclamped.
double normal_cdf(double z);
// Standard normal quantile for p in (0, 1). `upper` must equal 1 - p; passing
// it separately keeps full precision in the upper tail.
double normal_quantile(double p, double upper);
inline double normal_quantile(double p) { return normal_quantile(p, 1.0 - p); }

struct Knot {
  double z = 0.0;
  double cumprob = 0.0;
};

// Factorized prior over one latent coordinate, exposing the CDF and its
// inverse. Immutable after construction.
class PriorModel {
 public:
  enum class Kind : std::uint8_t {
    kStandardNormal = 0,
    kScaledGaussian = 1,
    kEmpiricalPiecewise = 2,
  };

  PriorModel() = default;  // standard normal

  static PriorModel standard_normal() { return PriorModel(); }
  // Throws InvalidArgumentError unless variance > 0 and both are finite.
  static PriorModel scaled_gaussian(double mean, double variance);
  // Knots must be strictly increasing in both coordinates with cumulative
  // probabilities inside (0, 1); at least two are required.
  static PriorModel empirical_piecewise(std::vector<Knot> knots);

  Kind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  const std::vector<Knot>& knots() const noexcept { return knots_; }

  // Clamped CDF. Throws InvalidArgumentError for non-finite z.
  double cdf(double z) const;
  // Unclamped CDF; may return exactly 0 or 1.
  double raw_cdf(double z) const;

  // Inverse CDF for xi in (0, 1). Throws DomainError otherwise.
  double quantile(double xi) const;
  // Same, with the complement 1 - xi supplied exactly.
  double quantile(double xi, double upper) const;
  double quantile(const CodePoint& cp) const {
    return quantile(cp.value(), cp.complement());
  }

  std::string describe() const;

  void serialize(std::vector<std::uint8_t>& out) const;
  // Reads a prior at `offset` and advances it. Throws ContainerTruncatedError
  // when the input ends early and ParseError for an unknown tag.
  static PriorModel deserialize(std::span<const std::uint8_t> in,
                                std::size_t& offset);

  friend bool operator==(const PriorModel& a, const PriorModel& b);

 private:
  double piecewise_cdf(double z) const;
  double piecewise_quantile(double xi, double upper) const;

  Kind kind_ = Kind::kStandardNormal;
  double mean_ = 0.0;
  double variance_ = 1.0;
  std::vector<Knot> knots_;
  // Gaussian tails for the piecewise model: F(z) = Phi(offset + (z - z0)/s).
  double lower_offset_ = 0.0, lower_scale_ = 1.0;
  double upper_offset_ = 0.0, upper_scale_ = 1.0;
};

bool operator==(const Knot& a, const Knot& b);

// Zero-mean Gaussian whose variance is the population variance of `means`.
// Throws InvalidArgumentError for fewer than two values and
// DegeneratePriorError when the variance is below 1e-12.
PriorModel fit_empirical_gaussian(std::span<const double> means);

// Piecewise-linear CDF through the sample quantiles at k / (knots + 1),
// k = 1..knots. Throws DegeneratePriorError when repeated samples make two
// knots coincide.
PriorModel fit_empirical_piecewise(std::span<const double> samples,
                                   std::size_t knots);

}  // namespace vbq

#endif  // VBQ_PRIOR_HPP_
