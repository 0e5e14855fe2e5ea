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

#include "vbq/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "vbq/error.hpp"

namespace vbq {
namespace {

constexpr std::size_t kParallelThreshold = 1 << 14;

GaussianPosterior validated(const GaussianPosterior& post,
                            const RdConfig& cfg) {
  if (!std::isfinite(post.mu) || !std::isfinite(post.sigma2)) {
    throw InvalidArgumentError("posterior mean and variance must be finite");
  }
  if (post.sigma2 < 0.0) {
    throw InvalidArgumentError("posterior variance " +
                               std::to_string(post.sigma2) + " is negative");
  }
  return GaussianPosterior{post.mu, std::max(post.sigma2, cfg.sigma2_floor)};
}

void check_config(const RdConfig& cfg) {
  if (std::isnan(cfg.lambda) || cfg.lambda < 0.0) {
    throw InvalidArgumentError("rate penalty lambda must be >= 0");
  }
  if (cfg.rate_cap && (*cfg.rate_cap == 0 || *cfg.rate_cap > kMaxRate)) {
    throw InvalidArgumentError("rate cap must be in [1, " +
                               std::to_string(kMaxRate) + "]");
  }
  if (cfg.lambda == 0.0 && !cfg.rate_cap) {
    throw UnboundedSearchError(
        "lambda = 0 without a rate cap never terminates");
  }
  if (!(cfg.sigma2_floor > 0.0)) {
    throw InvalidArgumentError("sigma2 floor must be positive");
  }
}

}  // namespace

double objective(const CodePoint& xi_hat, const GaussianPosterior& post,
                 const PriorModel& prior, double lambda) {
  const double diff = prior.quantile(xi_hat) - post.mu;
  return diff * diff +
         2.0 * lambda * post.sigma2 * static_cast<double>(xi_hat.rate());
}

DimensionResult optimize_dimension(const GaussianPosterior& raw_post,
                                   const PriorModel& prior,
                                   const RdConfig& cfg) {
  check_config(cfg);
  const GaussianPosterior post = validated(raw_post, cfg);

  DimensionResult result;
  if (cfg.infinite()) {
    result.code_point = CodePoint();
    result.reconstruction = prior.quantile(result.code_point);
    const double diff = result.reconstruction - post.mu;
    result.distortion = diff * diff;
    result.objective = std::numeric_limits<double>::infinity();
    return result;
  }

  const unsigned cap = cfg.rate_cap.value_or(kMaxRate);
  const double target = prior.cdf(post.mu);
  const double target_diff = prior.quantile(target) - post.mu;
  const double target_distortion = target_diff * target_diff;
  const double two_sigma2 = 2.0 * post.sigma2;

  std::optional<CodePoint> best;
  double best_objective = std::numeric_limits<double>::infinity();
  double best_distortion = 0.0;
  const auto consider = [&](const CodePoint& cp) {
    ++result.candidates;
    const double value = objective(cp, post, prior, cfg.lambda);
    if (value < best_objective) {
      best = cp;
      best_objective = value;
      const double diff = prior.quantile(cp) - post.mu;
      best_distortion = diff * diff;
    }
  };

  result.hit_rate_cap = true;
  for (unsigned r = 1; r <= cap; ++r) {
    result.final_rate = r;
    const RateNeighbors nb = neighbors_at_rate(target, r);
    if (!nb.left.is_zero()) consider(nb.left.code_point());
    if (!nb.right.is_one() && nb.right.numerator != nb.left.numerator) {
      consider(nb.right.code_point());
    }
    // Stop once the largest possible remaining gain in log g is below the
    // smallest penalty any longer code point would pay.
    const double rate = static_cast<double>(best->rate());
    const double gain = (best_distortion - target_distortion) / two_sigma2;
    if (gain < cfg.lambda * (static_cast<double>(r) + 1.0 - rate)) {
      result.hit_rate_cap = false;
      break;
    }
  }

  result.code_point = *best;
  result.objective = best_objective;
  result.reconstruction = prior.quantile(*best);
  const double diff = result.reconstruction - post.mu;
  result.distortion = diff * diff;
  return result;
}

QuantizedVector quantize_vector(std::span<const GaussianPosterior> posteriors,
                                const PriorModel& prior, const RdConfig& cfg) {
  check_config(cfg);
  const std::size_t k = posteriors.size();
  std::vector<DimensionResult> results(k);

  const auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = optimize_dimension(posteriors[i], prior, cfg);
      } catch (const Error& e) {
        rethrow_with_context(e, "dimension " + std::to_string(i));
      }
    }
  };

  const std::size_t workers =
      k < kParallelThreshold
          ? 1
          : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (workers == 1) {
    run(0, k);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (k + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(k, w * chunk);
      const std::size_t end = std::min(k, begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    // Chunks are ordered, so the first stored error has the lowest index.
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  QuantizedVector out;
  out.code_points.reserve(k);
  out.rates.reserve(k);
  out.objectives.reserve(k);
  out.reconstruction.reserve(k);
  for (const DimensionResult& r : results) {
    out.code_points.push_back(r.code_point);
    out.rates.push_back(r.code_point.rate());
    out.objectives.push_back(r.objective);
    out.reconstruction.push_back(r.reconstruction);
    out.total_rate += r.code_point.rate();
    out.total_objective += r.objective;
  }
  out.diagnostics = std::move(results);
  return out;
}

double log_posterior(std::span<const GaussianPosterior> posteriors,
                     std::span<const double> reconstruction,
                     double sigma2_floor) {
  if (posteriors.size() != reconstruction.size()) {
    throw InvalidArgumentError("posterior and reconstruction sizes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    const double diff = reconstruction[i] - posteriors[i].mu;
    total -= diff * diff /
             (2.0 * std::max(posteriors[i].sigma2, sigma2_floor));
  }
  return total;
}

}  // namespace vbq
