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

// Experiment harness on synthetic posteriors: rate-distortion comparisons
// against the baselines, the two-parameter regression anisotropy demo, the
// rate-versus-information-content scatter and per-channel bit allocation
// under posterior collapse. Every report is a pure function of its config.

#ifndef VBQ_ANALYSIS_HPP_
#define VBQ_ANALYSIS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vbq/entropy_codec.hpp"
#include "vbq/prior.hpp"
#include "vbq/quantizer.hpp"

namespace vbq {

struct SyntheticSource {
  enum class MeanModel {
    // mu ~ N(0, mean_variance), independent of sigma^2.
    kIndependent,
    // Posterior of a conjugate Gaussian observation model with prior
    // N(0, mean_variance): mu ~ N(0, mean_variance - sigma^2), so uncertain
    // dimensions shrink toward zero. Needs variance_hi <= mean_variance.
    kConjugate,
  };

  std::uint64_t seed = 0;
  std::size_t dimensions = 256;
  double mean_variance = 1.0;
  double variance_lo = 1e-4;  // sigma^2 is log-uniform on [lo, hi]
  double variance_hi = 1.0;
  MeanModel mean_model = MeanModel::kIndependent;

  std::vector<GaussianPosterior> generate() const;
};

// KL(N(mu, sigma^2) || prior) for Gaussian priors. Throws
// InvalidArgumentError for the piecewise prior.
double gaussian_kl(const GaussianPosterior& post, const PriorModel& prior);

double psnr(double mse, double peak = 1.0);

// --- R-D comparison --------------------------------------------------------

struct RdRow {
  std::string method;  // vbq | uniform | kmeans | lloyd
  double parameter = 0.0;
  double bitrate_per_dim = 0.0;
  double mse_z = 0.0;
};

struct CompareConfig {
  std::vector<double> lambdas;
  std::vector<double> deltas;
  std::vector<std::size_t> kmeans_sizes;
  std::vector<double> lloyd_lambdas;
  std::size_t lloyd_k_init = 32;
  std::uint64_t seed = 0;
  RdConfig rd;  // lambda ignored
};

// Bitrates are ideal entropy-coded sizes (information content under the
// empirical symbol frequencies) divided by the dimension count.
std::vector<RdRow> compare_rd(std::span<const GaussianPosterior> posteriors,
                              const PriorModel& prior,
                              const CompareConfig& cfg);

struct MatchedRateComparison {
  std::size_t matched = 0;  // candidate points inside the baseline's range
  std::size_t wins = 0;     // candidate mse <= interpolated baseline mse
  double fraction() const noexcept {
    return matched == 0 ? 0.0
                        : static_cast<double>(wins) /
                              static_cast<double>(matched);
  }
};

// Linear interpolation of the baseline's mse at each candidate bitrate.
// Candidates at zero bitrate (the all-median endpoint, where every method
// coincides) and repeats of an already counted (bitrate, mse) pair are
// skipped.
MatchedRateComparison compare_at_matched_rate(std::span<const RdRow> candidate,
                                              std::span<const RdRow> baseline);

// Largest relative mse gap |mse_c - mse_b| / mse_b over matched bitrates.
double max_relative_mse_gap(std::span<const RdRow> candidate,
                            std::span<const RdRow> baseline);

// --- anisotropy demo --------------------------------------------------------

struct ToyRegressionConfig {
  std::uint64_t seed = 0;
  std::size_t points = 20;
  double slope = 0.8;         // true a
  double intercept = -0.4;    // true b
  double noise_std = 2.5;
  double prior_precision = 1.0;
  double sigma_ratio = 0.1;   // target sigma_a / sigma_b
  double lambda = 0.5;
};

struct ToyRegressionReport {
  std::array<double, 2> mean{};    // posterior mean (a, b)
  std::array<double, 2> stddev{};  // mean-field standard deviations
  std::array<CodePoint, 2> code_points{};
  std::array<double, 2> vbq{};     // VBQ reconstruction
  std::array<double, 2> uniform{}; // distance-matched uniform rounding
  double delta = 0.0;
  double vbq_distance = 0.0;
  double uniform_distance = 0.0;
  double vbq_log_q = 0.0;
  double uniform_log_q = 0.0;
  double vbq_data_sse = 0.0;       // residual sum of squares on the data
  double uniform_data_sse = 0.0;

  bool vbq_wins() const noexcept { return vbq_log_q > uniform_log_q; }
};

ToyRegressionReport toy_regression_demo(const ToyRegressionConfig& cfg);

// --- rate vs information content ------------------------------------------

struct RateInfoPoint {
  CodePoint code_point;
  unsigned rate = 0;
  double information = 0.0;  // -log2 p_emp
};

struct RateInfoScatter {
  std::vector<RateInfoPoint> points;  // one per distinct symbol, table order
  std::optional<double> slope;        // least-squares h on R
  std::optional<double> intercept;
  std::optional<double> rank_correlation;  // Spearman
};

RateInfoScatter rate_info_scatter(std::span<const CodePoint> symbols,
                                  const FrequencyTable& table);

// --- posterior collapse -----------------------------------------------------

struct ChannelReport {
  std::size_t channel = 0;
  std::size_t dimensions = 0;
  double vbq_rate_bits = 0.0;      // mean code point bitlength
  double vbq_coded_bits = 0.0;     // mean -log2 p_emp of the code points
  double uniform_coded_bits = 0.0; // mean -log2 p_emp of the grid points
  double mean_kl = 0.0;
};

struct CollapseReport {
  double lambda = 0.0;
  double uniform_delta = 0.0;
  double vbq_total_bits = 0.0;      // information content, all channels
  double uniform_total_bits = 0.0;
  std::vector<ChannelReport> channels;
};

// The uniform baseline's spacing is bisected until its total information
// content matches VBQ's within 1% (or the closest reachable value).
CollapseReport collapse_report(
    std::span<const std::vector<GaussianPosterior>> channels,
    const PriorModel& prior, double lambda, const RdConfig& base = {});

// Six channels; channels 1, 2 and 4 (zero-based) are collapsed onto the
// standard normal prior (sigma^2 = 1, mu ~ N(0, spread^2), so KL = 0 at the
// default spread), the rest are sharp posteriors (sigma^2 = 0.01,
// 1 <= |mu| <= 2.5).
std::vector<std::vector<GaussianPosterior>> collapse_replica(
    std::uint64_t seed, std::size_t dimensions_per_channel = 512,
    double collapsed_mean_spread = 0.0);

}  // namespace vbq

#endif  // VBQ_ANALYSIS_HPP_
