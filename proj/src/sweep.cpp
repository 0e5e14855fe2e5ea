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

#include "vbq/sweep.hpp"

#include "vbq/error.hpp"

namespace vbq {

RdPoint evaluate_rd_point(std::span<const GaussianPosterior> posteriors,
                          const RdConfig& cfg,
                          const QuantizedVector& q,
                          const CompressedContainer& container) {
  RdPoint point;
  point.lambda = cfg.lambda;
  point.total_rate_bits = q.total_rate;
  point.entropy_coded_bits = container_size(container).total_bits();
  double sq = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    const double diff = q.reconstruction[i] - posteriors[i].mu;
    sq += diff * diff;
  }
  point.mse_z =
      posteriors.empty() ? 0.0 : sq / static_cast<double>(posteriors.size());
  point.log_q = log_posterior(posteriors, q.reconstruction, cfg.sigma2_floor);
  return point;
}

std::vector<RdPoint> sweep_lambda(std::span<const GaussianPosterior> posteriors,
                                  const PriorModel& prior,
                                  std::span<const double> lambdas,
                                  const RdConfig& base,
                                  const FrequencyTable* external) {
  if (lambdas.empty()) {
    throw InvalidArgumentError("lambda sweep needs at least one lambda");
  }
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) {
      throw InvalidArgumentError("sweep lambdas must be > 0");
    }
  }
  const TableMode mode =
      external ? TableMode::kExternalTable : TableMode::kHeaderTable;
  std::vector<RdPoint> out;
  out.reserve(lambdas.size());
  for (double lambda : lambdas) {
    RdConfig cfg = base;
    cfg.lambda = lambda;
    const QuantizedVector q = quantize_vector(posteriors, prior, cfg);
    const CompressedContainer container =
        encode_container(q.code_points, prior, mode, external);
    out.push_back(evaluate_rd_point(posteriors, cfg, q, container));
  }
  return out;
}

}  // namespace vbq
