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

#include "vbq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "vbq/baselines.hpp"
#include "vbq/error.hpp"
#include "vbq/random.hpp"

namespace vbq {
namespace {

std::vector<double> means_of(std::span<const GaussianPosterior> posteriors) {
  std::vector<double> out(posteriors.size());
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    out[i] = posteriors[i].mu;
  }
  return out;
}

double mean_squared_error(std::span<const double> a,
                          std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return a.empty() ? 0.0 : acc / static_cast<double>(a.size());
}

// -log2 p_emp for each index of a uniform quantization.
std::vector<double> uniform_information(const UniformQuantization& uq) {
  std::vector<double> out(uq.indices.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = -std::log2(uq.codebook.probabilities[uq.indices[i]]);
  }
  return out;
}

double sum(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> out(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = rank;
    i = j + 1;
  }
  return out;
}

std::optional<double> pearson(std::span<const double> x,
                              std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = sum(x) / n;
  const double my = sum(y) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<const RdRow*> sorted_by_rate(std::span<const RdRow> rows) {
  std::vector<const RdRow*> out;
  for (const RdRow& r : rows) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(), [](const RdRow* a, const RdRow* b) {
    return a->bitrate_per_dim < b->bitrate_per_dim;
  });
  return out;
}

// Baseline mse interpolated at `rate`, or nullopt outside its rate range.
std::optional<double> interpolate_mse(const std::vector<const RdRow*>& curve,
                                      double rate) {
  if (curve.empty()) return std::nullopt;
  if (rate < curve.front()->bitrate_per_dim ||
      rate > curve.back()->bitrate_per_dim) {
    return std::nullopt;
  }
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const RdRow& a = *curve[i];
    const RdRow& b = *curve[i + 1];
    if (rate > b.bitrate_per_dim) continue;
    const double span = b.bitrate_per_dim - a.bitrate_per_dim;
    if (span <= 0.0) return std::min(a.mse_z, b.mse_z);
    const double t = (rate - a.bitrate_per_dim) / span;
    return a.mse_z + t * (b.mse_z - a.mse_z);
  }
  return curve.back()->mse_z;
}

}  // namespace

std::vector<GaussianPosterior> SyntheticSource::generate() const {
  if (!(variance_lo > 0.0) || !(variance_hi >= variance_lo) ||
      !(mean_variance >= 0.0)) {
    throw InvalidArgumentError("synthetic source: bad variance range");
  }
  if (mean_model == MeanModel::kConjugate && variance_hi > mean_variance) {
    throw InvalidArgumentError(
        "synthetic source: conjugate model needs variance_hi <= "
        "mean_variance");
  }
  Rng rng(seed);
  std::vector<GaussianPosterior> out(dimensions);
  for (GaussianPosterior& p : out) {
    p.sigma2 = rng.log_uniform(variance_lo, variance_hi);
    const double spread = mean_model == MeanModel::kConjugate
                              ? std::max(mean_variance - p.sigma2, 0.0)
                              : mean_variance;
    p.mu = rng.normal(0.0, std::sqrt(spread));
  }
  return out;
}

double gaussian_kl(const GaussianPosterior& post, const PriorModel& prior) {
  if (prior.kind() == PriorModel::Kind::kEmpiricalPiecewise) {
    throw InvalidArgumentError("closed-form KL needs a Gaussian prior");
  }
  const double v0 = prior.variance();
  const double d = post.mu - prior.mean();
  return 0.5 * std::log(v0 / post.sigma2) + (post.sigma2 + d * d) / (2 * v0) -
         0.5;
}

double psnr(double mse, double peak) {
  return 10.0 * std::log10(peak * peak / mse);
}

std::vector<RdRow> compare_rd(std::span<const GaussianPosterior> posteriors,
                              const PriorModel& prior,
                              const CompareConfig& cfg) {
  if (posteriors.empty()) {
    throw InvalidArgumentError("compare_rd: no posteriors");
  }
  const std::vector<double> means = means_of(posteriors);
  const double k = static_cast<double>(means.size());
  std::vector<RdRow> rows;

  for (double lambda : cfg.lambdas) {
    RdConfig rd = cfg.rd;
    rd.lambda = lambda;
    const QuantizedVector q = quantize_vector(posteriors, prior, rd);
    const FrequencyTable table = build_frequency_table(q.code_points);
    rows.push_back({"vbq", lambda,
                    information_content(q.code_points, table) / k,
                    mean_squared_error(q.reconstruction, means)});
  }
  for (double delta : cfg.deltas) {
    const UniformQuantization uq = uniform_quantize(means, delta);
    const std::vector<double> h = uniform_information(uq);
    rows.push_back({"uniform", delta, sum(h) / k,
                    mean_squared_error(uq.values, means)});
  }
  for (std::size_t size : cfg.kmeans_sizes) {
    const ScalarCodebook cb = kmeans_codebook(means, size, cfg.seed);
    const CodebookQuantization cq = codebook_quantize(means, cb);
    rows.push_back(
        {"kmeans", static_cast<double>(size), cq.rate_bits / k, cq.mse});
  }
  for (double lambda : cfg.lloyd_lambdas) {
    const ScalarCodebook cb =
        lloyd_ec_codebook(means, cfg.lloyd_k_init, lambda, cfg.seed);
    const CodebookQuantization cq = codebook_quantize(means, cb);
    rows.push_back({"lloyd", lambda, cq.rate_bits / k, cq.mse});
  }
  return rows;
}

MatchedRateComparison compare_at_matched_rate(
    std::span<const RdRow> candidate, std::span<const RdRow> baseline) {
  const auto curve = sorted_by_rate(baseline);
  MatchedRateComparison out;
  std::set<std::pair<double, double>> seen;
  for (const RdRow& c : candidate) {
    if (!(c.bitrate_per_dim > 0.0)) continue;
    if (!seen.insert({c.bitrate_per_dim, c.mse_z}).second) continue;
    const auto ref = interpolate_mse(curve, c.bitrate_per_dim);
    if (!ref) continue;
    ++out.matched;
    if (c.mse_z <= *ref) ++out.wins;
  }
  return out;
}

double max_relative_mse_gap(std::span<const RdRow> candidate,
                            std::span<const RdRow> baseline) {
  const auto curve = sorted_by_rate(baseline);
  double gap = 0.0;
  for (const RdRow& c : candidate) {
    const auto ref = interpolate_mse(curve, c.bitrate_per_dim);
    if (!ref || *ref <= 0.0) continue;
    gap = std::max(gap, std::abs(c.mse_z - *ref) / *ref);
  }
  return gap;
}

ToyRegressionReport toy_regression_demo(const ToyRegressionConfig& cfg) {
  if (cfg.points < 2 || !(cfg.noise_std > 0.0) ||
      !(cfg.prior_precision > 0.0) || !(cfg.sigma_ratio > 0.0)) {
    throw InvalidArgumentError("toy regression: bad configuration");
  }
  Rng rng(cfg.seed);
  const double alpha = cfg.prior_precision;
  const double beta = 1.0 / (cfg.noise_std * cfg.noise_std);
  const double n = static_cast<double>(cfg.points);

  std::vector<double> x(cfg.points);
  double sxx = 0.0;
  for (double& v : x) {
    v = rng.uniform(-1.0, 1.0);
    sxx += v * v;
  }
  // Rescale x so that the mean-field precisions satisfy
  // Lambda_aa / Lambda_bb = 1 / ratio^2.
  const double target =
      ((alpha + beta * n) / (cfg.sigma_ratio * cfg.sigma_ratio) - alpha) /
      beta;
  if (!(target > 0.0)) {
    throw InvalidArgumentError("toy regression: unreachable sigma ratio");
  }
  const double scale = std::sqrt(target / sxx);
  std::vector<double> y(cfg.points);
  double sx = 0.0, sy = 0.0, sxy = 0.0;
  sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] *= scale;
    y[i] = cfg.slope * x[i] + cfg.intercept + rng.normal(0.0, cfg.noise_std);
    sx += x[i];
    sxx += x[i] * x[i];
    sy += y[i];
    sxy += x[i] * y[i];
  }

  // Precision matrix [[laa, lab], [lab, lbb]] and mean Lambda^-1 beta Phi^T y.
  const double laa = alpha + beta * sxx;
  const double lab = beta * sx;
  const double lbb = alpha + beta * n;
  const double det = laa * lbb - lab * lab;
  const double ra = beta * sxy;
  const double rb = beta * sy;

  ToyRegressionReport rep;
  rep.mean = {(lbb * ra - lab * rb) / det, (laa * rb - lab * ra) / det};
  const std::array<GaussianPosterior, 2> post{
      GaussianPosterior{rep.mean[0], 1.0 / laa},
      GaussianPosterior{rep.mean[1], 1.0 / lbb}};
  rep.stddev = {std::sqrt(post[0].sigma2), std::sqrt(post[1].sigma2)};

  const PriorModel prior = PriorModel::scaled_gaussian(0.0, 1.0 / alpha);
  RdConfig rd;
  rd.lambda = cfg.lambda;
  const QuantizedVector q = quantize_vector(post, prior, rd);
  rep.code_points = {q.code_points[0], q.code_points[1]};
  rep.vbq = {q.reconstruction[0], q.reconstruction[1]};
  rep.vbq_distance = std::hypot(rep.vbq[0] - rep.mean[0],
                                rep.vbq[1] - rep.mean[1]);

  // Uniform rounding on the finest grid whose mode distance reaches VBQ's.
  // The distance is continuous in delta (both sides of a rounding boundary
  // err by delta / 2), so the first crossing is bracketed by a geometric
  // scan and then bisected.
  const std::array<double, 2> m = rep.mean;
  const double d = rep.vbq_distance;
  auto distance = [&](double delta) {
    const double ea = std::nearbyint(m[0] / delta) * delta - m[0];
    const double eb = std::nearbyint(m[1] / delta) * delta - m[1];
    return std::hypot(ea, eb);
  };
  const double reach = std::max(std::hypot(m[0], m[1]), d) * 4.0;
  double below = std::max(d, 1e-300) * 1e-3;
  double above = below;
  while (above < reach && distance(above) < d) {
    below = above;
    above *= 1.001;
  }
  double best_delta = above;
  if (distance(above) >= d) {
    for (int it = 0; it < 200 && below < above; ++it) {
      const double mid = 0.5 * (below + above);
      if (mid <= below || mid >= above) break;
      (distance(mid) < d ? below : above) = mid;
    }
    best_delta = std::abs(distance(below) - d) < std::abs(distance(above) - d)
                     ? below
                     : above;
  }
  rep.delta = best_delta;
  rep.uniform = {std::nearbyint(m[0] / best_delta) * best_delta,
                 std::nearbyint(m[1] / best_delta) * best_delta};
  rep.uniform_distance = distance(best_delta);

  rep.vbq_log_q = log_posterior(post, rep.vbq);
  rep.uniform_log_q = log_posterior(post, rep.uniform);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rv = y[i] - (rep.vbq[0] * x[i] + rep.vbq[1]);
    const double ru = y[i] - (rep.uniform[0] * x[i] + rep.uniform[1]);
    rep.vbq_data_sse += rv * rv;
    rep.uniform_data_sse += ru * ru;
  }
  return rep;
}

RateInfoScatter rate_info_scatter(std::span<const CodePoint> symbols,
                                  const FrequencyTable& table) {
  std::set<CodePoint, CodePoint::RateOrder> distinct(symbols.begin(),
                                                     symbols.end());
  RateInfoScatter out;
  const double total = static_cast<double>(table.total());
  std::vector<double> r, h;
  for (const CodePoint& cp : distinct) {
    const double info =
        -std::log2(static_cast<double>(table.count(cp)) / total);
    out.points.push_back({cp, cp.rate(), info});
    r.push_back(cp.rate());
    h.push_back(info);
  }
  if (r.size() >= 2) {
    const double mr = sum(r) / static_cast<double>(r.size());
    const double mh = sum(h) / static_cast<double>(h.size());
    double srh = 0.0, srr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      srh += (r[i] - mr) * (h[i] - mh);
      srr += (r[i] - mr) * (r[i] - mr);
    }
    if (srr > 0.0) {
      out.slope = srh / srr;
      out.intercept = mh - *out.slope * mr;
    }
    out.rank_correlation = pearson(ranks(r), ranks(h));
  }
  return out;
}

CollapseReport collapse_report(
    std::span<const std::vector<GaussianPosterior>> channels,
    const PriorModel& prior, double lambda, const RdConfig& base) {
  std::vector<GaussianPosterior> all;
  for (const auto& ch : channels) {
    if (ch.empty()) throw InvalidArgumentError("collapse_report: empty channel");
    all.insert(all.end(), ch.begin(), ch.end());
  }
  if (all.empty()) throw InvalidArgumentError("collapse_report: no channels");

  RdConfig rd = base;
  rd.lambda = lambda;
  const QuantizedVector q = quantize_vector(all, prior, rd);
  const FrequencyTable table = build_frequency_table(q.code_points);
  const double total = static_cast<double>(table.total());
  std::vector<double> vbq_h(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    vbq_h[i] =
        -std::log2(static_cast<double>(table.count(q.code_points[i])) / total);
  }

  CollapseReport rep;
  rep.lambda = lambda;
  rep.vbq_total_bits = sum(vbq_h);

  // Bisect log(delta) until the uniform grid spends the same total bits.
  const std::vector<double> means = means_of(all);
  double max_abs = 0.0;
  for (double mu : means) max_abs = std::max(max_abs, std::abs(mu));
  auto uniform_bits = [&](double delta) {
    const auto h = uniform_information(uniform_quantize(means, delta));
    return sum(h);
  };
  const double target = rep.vbq_total_bits;
  double lo = std::log(std::max(max_abs, 1e-6) * 1e-9);
  double hi = std::log(std::max(max_abs, 1e-6) * 4.0 + 1.0);  // all zero
  double best = std::exp(hi);
  double best_gap = std::abs(uniform_bits(best) - target);
  for (int it = 0; it < 200 && best_gap > 0.01 * target; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double bits = uniform_bits(std::exp(mid));
    const double gap = std::abs(bits - target);
    if (gap < best_gap) {
      best_gap = gap;
      best = std::exp(mid);
    }
    if (bits > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  rep.uniform_delta = best;
  const std::vector<double> uni_h =
      uniform_information(uniform_quantize(means, best));
  rep.uniform_total_bits = sum(uni_h);

  std::size_t offset = 0;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const auto& ch = channels[c];
    const double n = static_cast<double>(ch.size());
    ChannelReport cr;
    cr.channel = c;
    cr.dimensions = ch.size();
    for (std::size_t i = 0; i < ch.size(); ++i) {
      cr.vbq_rate_bits += q.rates[offset + i];
      cr.vbq_coded_bits += vbq_h[offset + i];
      cr.uniform_coded_bits += uni_h[offset + i];
      cr.mean_kl += gaussian_kl(ch[i], prior);
    }
    cr.vbq_rate_bits /= n;
    cr.vbq_coded_bits /= n;
    cr.uniform_coded_bits /= n;
    cr.mean_kl /= n;
    rep.channels.push_back(cr);
    offset += ch.size();
  }
  return rep;
}

std::vector<std::vector<GaussianPosterior>> collapse_replica(
    std::uint64_t seed, std::size_t dimensions_per_channel,
    double collapsed_mean_spread) {
  static constexpr std::array<bool, 6> kCollapsed = {false, true,  true,
                                                     false, true,  false};
  Rng rng(seed);
  std::vector<std::vector<GaussianPosterior>> out(kCollapsed.size());
  for (std::size_t c = 0; c < kCollapsed.size(); ++c) {
    out[c].resize(dimensions_per_channel);
    for (GaussianPosterior& p : out[c]) {
      if (kCollapsed[c]) {
        p = {rng.normal(0.0, collapsed_mean_spread), 1.0};
      } else {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        p = {sign * rng.uniform(1.0, 2.5), 0.01};
      }
    }
  }
  return out;
}

}  // namespace vbq
