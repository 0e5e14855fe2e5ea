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

#include "vbq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "vbq/error.hpp"
#include "vbq/random.hpp"

namespace vbq {
namespace {

constexpr std::size_t kMaxIterations = 500;
constexpr double kRelativeTolerance = 1e-9;

std::size_t count_distinct(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return static_cast<std::size_t>(
      std::unique(values.begin(), values.end()) - values.begin());
}

void check_fit_input(std::span<const double> samples, std::size_t k) {
  if (k == 0) throw InvalidArgumentError("codebook size must be >= 1");
  for (double x : samples) {
    if (!std::isfinite(x)) {
      throw InvalidArgumentError("codebook samples must be finite");
    }
  }
  const std::vector<double> copy(samples.begin(), samples.end());
  if (count_distinct(copy) < k) {
    throw InvalidArgumentError("need at least " + std::to_string(k) +
                               " distinct samples for " + std::to_string(k) +
                               " codewords");
  }
}

// Index of the nearest grid point; ties go to the lower index.
std::size_t nearest(const std::vector<double>& grid, double x) {
  const auto it = std::lower_bound(grid.begin(), grid.end(), x);
  if (it == grid.begin()) return 0;
  if (it == grid.end()) return grid.size() - 1;
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  return (x - grid[hi - 1] <= grid[hi] - x) ? hi - 1 : hi;
}

std::size_t penalized(const std::vector<double>& grid,
                      const std::vector<double>& cost, double x) {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double d = x - grid[j];
    const double value = d * d + cost[j];
    if (value < best_value) {
      best_value = value;
      best = j;
    }
  }
  return best;
}

// Sorts codewords by position, merges equal ones and drops unused ones.
ScalarCodebook finish(std::vector<double> centroids,
                      const std::vector<std::size_t>& occupancy,
                      std::size_t total, CodebookOrigin origin) {
  std::map<double, std::size_t> merged;
  for (std::size_t j = 0; j < centroids.size(); ++j) {
    if (occupancy[j] > 0) merged[centroids[j]] += occupancy[j];
  }
  ScalarCodebook out;
  out.origin = origin;
  for (const auto& [c, n] : merged) {
    out.grid.push_back(c);
    out.probabilities.push_back(static_cast<double>(n) /
                                static_cast<double>(total));
  }
  return out;
}

double type7_quantile(const std::vector<double>& sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string CodebookOrigin::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::kUniform:
      os << "uniform(delta=" << parameter << ")";
      break;
    case Kind::kKmeans:
      os << "kmeans";
      break;
    case Kind::kLloyd:
      os << "lloyd(lambda=" << parameter << ")";
      break;
  }
  return os.str();
}

CodebookOrigin CodebookOrigin::parse(std::string_view text) {
  const auto parameter = [&](std::string_view prefix) {
    const std::string body(text.substr(prefix.size(),
                                       text.size() - prefix.size() - 1));
    try {
      std::size_t used = 0;
      const double value = std::stod(body, &used);
      if (used != body.size()) throw std::invalid_argument("trailing");
      return value;
    } catch (const std::exception&) {
      throw ParseError("bad codebook origin parameter \"" + body + "\"");
    }
  };
  if (text == "kmeans") return {Kind::kKmeans, 0.0};
  if (text.starts_with("uniform(delta=") && text.ends_with(")")) {
    return {Kind::kUniform, parameter("uniform(delta=")};
  }
  if (text.starts_with("lloyd(lambda=") && text.ends_with(")")) {
    return {Kind::kLloyd, parameter("lloyd(lambda=")};
  }
  throw ParseError("unknown codebook origin \"" + std::string(text) + "\"");
}

UniformQuantization uniform_quantize(std::span<const double> means,
                                     double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgumentError("grid spacing must be positive and finite");
  }
  UniformQuantization out;
  out.codebook.origin = {CodebookOrigin::Kind::kUniform, delta};
  std::vector<std::int64_t> steps;
  steps.reserve(means.size());
  std::map<std::int64_t, std::size_t> used;
  for (double mu : means) {
    if (!std::isfinite(mu)) throw InvalidArgumentError("means must be finite");
    // nearbyint honours the default round-half-to-even mode.
    const auto step = static_cast<std::int64_t>(std::nearbyint(mu / delta));
    steps.push_back(step);
    ++used[step];
  }
  std::map<std::int64_t, std::size_t> position;
  for (const auto& [step, n] : used) {
    position[step] = out.codebook.grid.size();
    out.codebook.grid.push_back(static_cast<double>(step) * delta);
    out.codebook.probabilities.push_back(static_cast<double>(n) /
                                         static_cast<double>(means.size()));
  }
  out.indices.reserve(means.size());
  out.values.reserve(means.size());
  for (std::int64_t step : steps) {
    out.indices.push_back(position[step]);
    out.values.push_back(static_cast<double>(step) * delta);
  }
  return out;
}

ScalarCodebook kmeans_codebook(std::span<const double> samples, std::size_t k,
                               std::uint64_t seed, FitTrace* trace) {
  check_fit_input(samples, k);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> centroids(k);
  for (std::size_t j = 0; j < k; ++j) {
    centroids[j] = type7_quantile(
        sorted, static_cast<double>(j + 1) / static_cast<double>(k + 1));
  }

  Rng rng(seed);
  const std::size_t n = sorted.size();
  std::vector<std::size_t> assignment(n);
  std::vector<std::size_t> occupancy(k);
  bool converged = false;
  for (std::size_t iter = 0; iter < kMaxIterations && !converged; ++iter) {
    std::fill(occupancy.begin(), occupancy.end(), 0);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      assignment[i] = nearest(centroids, sorted[i]);
      ++occupancy[assignment[i]];
      const double d = sorted[i] - centroids[assignment[i]];
      sse += d * d;
    }
    if (trace) trace->objective.push_back(sse / static_cast<double>(n));

    std::vector<double> sums(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) sums[assignment[i]] += sorted[i];
    std::vector<double> next = centroids;
    for (std::size_t j = 0; j < k; ++j) {
      if (occupancy[j] > 0) {
        next[j] = sums[j] / static_cast<double>(occupancy[j]);
        continue;
      }
      // Re-seed at the sample worst served by its current centroid.
      double worst = -1.0;
      std::vector<std::size_t> ties;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = std::fabs(sorted[i] - next[assignment[i]]);
        if (d > worst) {
          worst = d;
          ties.assign(1, i);
        } else if (d == worst) {
          ties.push_back(i);
        }
      }
      const std::size_t pick = ties[rng.below(ties.size())];
      next[j] = sorted[pick];
      --occupancy[assignment[pick]];
      assignment[pick] = j;
      occupancy[j] = 1;
    }
    std::sort(next.begin(), next.end());

    double scale = 1.0, shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      scale = std::max(scale, std::fabs(next[j]));
      shift = std::max(shift, std::fabs(next[j] - centroids[j]));
    }
    converged = shift <= kRelativeTolerance * scale;
    centroids = std::move(next);
  }

  std::fill(occupancy.begin(), occupancy.end(), 0);
  for (double x : sorted) ++occupancy[nearest(centroids, x)];
  if (trace) trace->converged = converged;
  return finish(std::move(centroids), occupancy, n,
                {CodebookOrigin::Kind::kKmeans, 0.0});
}

ScalarCodebook lloyd_ec_codebook(std::span<const double> samples,
                                 std::size_t k_init, double lambda,
                                 std::uint64_t seed, FitTrace* trace) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgumentError("lloyd lambda must be finite and >= 0");
  }
  const ScalarCodebook start = kmeans_codebook(samples, k_init, seed);
  std::vector<double> grid = start.grid;
  std::vector<double> probs = start.probabilities;
  const std::size_t n = samples.size();
  std::vector<std::size_t> assignment(n);

  double previous = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    std::vector<double> cost(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      cost[j] = lambda * -std::log2(probs[j]);
    }
    std::vector<double> sums(grid.size(), 0.0);
    std::vector<std::size_t> occupancy(grid.size(), 0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = penalized(grid, cost, samples[i]);
      assignment[i] = j;
      const double d = samples[i] - grid[j];
      total += d * d + cost[j];
      sums[j] += samples[i];
      ++occupancy[j];
    }
    const double objective = total / static_cast<double>(n);
    if (trace) trace->objective.push_back(objective);

    std::vector<double> next_grid, next_probs;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (occupancy[j] == 0) continue;
      next_grid.push_back(sums[j] / static_cast<double>(occupancy[j]));
      next_probs.push_back(static_cast<double>(occupancy[j]) /
                           static_cast<double>(n));
    }
    grid = std::move(next_grid);
    probs = std::move(next_probs);

    if (previous - objective <
        kRelativeTolerance * std::max(std::fabs(objective), 1e-300)) {
      converged = true;
      break;
    }
    previous = objective;
  }
  if (trace) trace->converged = converged;

  std::vector<std::size_t> occupancy(grid.size(), 0);
  std::vector<double> cost(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    cost[j] = lambda * -std::log2(probs[j]);
  }
  for (double x : samples) ++occupancy[penalized(grid, cost, x)];
  // Reassignment under the final centroids can empty a codeword; finish()
  // drops it and renormalizes.
  return finish(std::move(grid), occupancy, n,
                {CodebookOrigin::Kind::kLloyd, lambda});
}

CodebookQuantization codebook_quantize(std::span<const double> means,
                                       const ScalarCodebook& codebook) {
  if (codebook.grid.empty() ||
      codebook.grid.size() != codebook.probabilities.size()) {
    throw InvalidArgumentError("codebook is empty or inconsistent");
  }
  const bool lloyd = codebook.origin.kind == CodebookOrigin::Kind::kLloyd;
  std::vector<double> cost(codebook.grid.size());
  for (std::size_t j = 0; j < cost.size(); ++j) {
    cost[j] = -std::log2(codebook.probabilities[j]);
  }
  std::vector<double> penalty(cost.size());
  for (std::size_t j = 0; j < cost.size(); ++j) {
    penalty[j] = codebook.origin.parameter * cost[j];
  }

  CodebookQuantization out;
  out.indices.reserve(means.size());
  double sse = 0.0;
  for (double x : means) {
    const std::size_t j =
        lloyd ? penalized(codebook.grid, penalty, x) : nearest(codebook.grid, x);
    out.indices.push_back(j);
    out.rate_bits += cost[j];
    const double d = x - codebook.grid[j];
    sse += d * d;
  }
  out.mse = means.empty() ? 0.0 : sse / static_cast<double>(means.size());
  return out;
}

RestrictedQuantization restricted_grid_quantize(std::span<const double> means,
                                                const PriorModel& prior,
                                                double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgumentError("grid spacing must be positive and finite");
  }
  RestrictedQuantization out;
  for (double mu : means) {
    const double cell = std::nearbyint(mu / delta);
    const double lo = prior.raw_cdf((cell - 0.5) * delta);
    const double hi = prior.raw_cdf((cell + 0.5) * delta);
    const CodePoint cp = shortest_in_interval(lo, hi);
    out.code_points.push_back(cp);
    out.reconstruction.push_back(prior.quantile(cp));
  }
  return out;
}

double codebook_entropy(const ScalarCodebook& codebook) {
  double h = 0.0;
  for (double p : codebook.probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace vbq
