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

#ifndef VBQ_SWEEP_HPP_
#define VBQ_SWEEP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "vbq/container.hpp"
#include "vbq/quantizer.hpp"

namespace vbq {

struct RdPoint {
  double lambda = 0.0;
  std::uint64_t total_rate_bits = 0;     // sum of code point bitlengths
  std::uint64_t entropy_coded_bits = 0;  // full container size in bits
  double mse_z = 0.0;
  double log_q = 0.0;  // constant-free log posterior of the reconstruction
};

// Quantizes `posteriors` once per lambda. `base` supplies the rate cap and
// sigma^2 floor; its lambda is ignored. The entropy-coded size is that of the
// container written in header-table mode, or in external-table mode when
// `external` is given. Throws InvalidArgumentError for an empty lambda list
// or a lambda that is not > 0 (+infinity is allowed).
std::vector<RdPoint> sweep_lambda(std::span<const GaussianPosterior> posteriors,
                                  const PriorModel& prior,
                                  std::span<const double> lambdas,
                                  const RdConfig& base = {},
                                  const FrequencyTable* external = nullptr);

// Single point of the sweep, shared with the encoder front end.
RdPoint evaluate_rd_point(std::span<const GaussianPosterior> posteriors,
                          const RdConfig& cfg,
                          const QuantizedVector& q,
                          const CompressedContainer& container);

}  // namespace vbq

#endif  // VBQ_SWEEP_HPP_
