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

#include "vbq/prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "byte_io.hpp"
#include "vbq/error.hpp"

namespace vbq {
namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double clamp_quantile(double p) {
  return std::clamp(p, kQuantileFloor, kQuantileCeil);
}

void check_quantile_arg(double xi, double upper) {
  if (!(xi > 0.0 && xi < 1.0) || !(upper > 0.0 && upper < 1.0)) {
    throw DomainError("quantile argument " + std::to_string(xi) +
                      " is outside (0, 1)");
  }
}

}  // namespace

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Wichura's AS241 (PPND16), accurate to about 1e-16 relative.
double normal_quantile(double p, double upper) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) *
                     r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) *
                     r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : upper));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e+0) *
                r +
            3.64784832476320460504e+0) *
               r +
           5.76949722146069140550e+0) *
              r +
          4.63033784615654529590e+0) *
             r +
         1.42343711074968357734e+0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e+0) *
              r +
          2.05319162663775882187e+0) *
             r +
         1.0);
  } else {
    r -= 5.0;
    value =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e+0) *
              r +
          5.46378491116411436990e+0) *
             r +
         6.65790464350110377720e+0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
  }
  return q < 0.0 ? -value : value;
}

PriorModel PriorModel::scaled_gaussian(double mean, double variance) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || !(variance > 0.0)) {
    throw InvalidArgumentError("scaled Gaussian prior needs a finite mean and "
                               "a finite positive variance");
  }
  PriorModel prior;
  prior.kind_ = Kind::kScaledGaussian;
  prior.mean_ = mean;
  prior.variance_ = variance;
  return prior;
}

PriorModel PriorModel::empirical_piecewise(std::vector<Knot> knots) {
  if (knots.size() < 2) {
    throw InvalidArgumentError("piecewise prior needs at least two knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Knot& k = knots[i];
    if (!std::isfinite(k.z) || !(k.cumprob > 0.0 && k.cumprob < 1.0)) {
      throw InvalidArgumentError("knot " + std::to_string(i) +
                                 " is not finite or its cumulative "
                                 "probability is outside (0, 1)");
    }
    if (i > 0 && !(k.z > knots[i - 1].z && k.cumprob > knots[i - 1].cumprob)) {
      throw InvalidArgumentError("knots must be strictly increasing (knot " +
                                 std::to_string(i) + ")");
    }
  }
  PriorModel prior;
  prior.kind_ = Kind::kEmpiricalPiecewise;
  prior.knots_ = std::move(knots);
  const auto& ks = prior.knots_;
  const std::size_t m = ks.size();
  // Tails are Gaussian, continuous in value and slope at the end knots.
  prior.lower_offset_ = normal_quantile(ks[0].cumprob);
  prior.lower_scale_ = normal_pdf(prior.lower_offset_) * (ks[1].z - ks[0].z) /
                       (ks[1].cumprob - ks[0].cumprob);
  prior.upper_offset_ =
      normal_quantile(ks[m - 1].cumprob, 1.0 - ks[m - 1].cumprob);
  prior.upper_scale_ = normal_pdf(prior.upper_offset_) *
                       (ks[m - 1].z - ks[m - 2].z) /
                       (ks[m - 1].cumprob - ks[m - 2].cumprob);
  prior.mean_ = 0.0;
  prior.variance_ = 0.0;
  return prior;
}

double PriorModel::raw_cdf(double z) const {
  switch (kind_) {
    case Kind::kStandardNormal:
      return normal_cdf(z);
    case Kind::kScaledGaussian:
      return normal_cdf((z - mean_) / std::sqrt(variance_));
    case Kind::kEmpiricalPiecewise:
      return piecewise_cdf(z);
  }
  return 0.0;
}

double PriorModel::cdf(double z) const {
  if (!std::isfinite(z)) {
    throw InvalidArgumentError("cdf argument is not finite");
  }
  return clamp_quantile(raw_cdf(z));
}

double PriorModel::quantile(double xi) const { return quantile(xi, 1.0 - xi); }

double PriorModel::quantile(double xi, double upper) const {
  check_quantile_arg(xi, upper);
  switch (kind_) {
    case Kind::kStandardNormal:
      return normal_quantile(xi, upper);
    case Kind::kScaledGaussian:
      return mean_ + std::sqrt(variance_) * normal_quantile(xi, upper);
    case Kind::kEmpiricalPiecewise:
      return piecewise_quantile(xi, upper);
  }
  return 0.0;
}

double PriorModel::piecewise_cdf(double z) const {
  const Knot& first = knots_.front();
  const Knot& last = knots_.back();
  if (z <= first.z) {
    return normal_cdf(lower_offset_ + (z - first.z) / lower_scale_);
  }
  if (z >= last.z) {
    return normal_cdf(upper_offset_ + (z - last.z) / upper_scale_);
  }
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), z,
      [](double value, const Knot& k) { return value < k.z; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double t = (z - lo.z) / (hi.z - lo.z);
  return lo.cumprob + t * (hi.cumprob - lo.cumprob);
}

double PriorModel::piecewise_quantile(double xi, double upper) const {
  const Knot& first = knots_.front();
  const Knot& last = knots_.back();
  if (xi <= first.cumprob) {
    return first.z + lower_scale_ * (normal_quantile(xi, upper) - lower_offset_);
  }
  if (xi >= last.cumprob) {
    return last.z + upper_scale_ * (normal_quantile(xi, upper) - upper_offset_);
  }
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), xi,
      [](double value, const Knot& k) { return value < k.cumprob; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double t = (xi - lo.cumprob) / (hi.cumprob - lo.cumprob);
  return lo.z + t * (hi.z - lo.z);
}

std::string PriorModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::kStandardNormal:
      os << "std-normal";
      break;
    case Kind::kScaledGaussian:
      os << "gaussian:" << mean_ << "," << variance_;
      break;
    case Kind::kEmpiricalPiecewise:
      os << "empirical(" << knots_.size() << " knots)";
      break;
  }
  return os.str();
}

void PriorModel::serialize(std::vector<std::uint8_t>& out) const {
  out.push_back(static_cast<std::uint8_t>(kind_));
  switch (kind_) {
    case Kind::kStandardNormal:
      break;
    case Kind::kScaledGaussian:
      detail::put_f64(out, mean_);
      detail::put_f64(out, variance_);
      break;
    case Kind::kEmpiricalPiecewise:
      detail::put_le(out, static_cast<std::uint32_t>(knots_.size()));
      for (const Knot& k : knots_) {
        detail::put_f64(out, k.z);
        detail::put_f64(out, k.cumprob);
      }
      break;
  }
}

PriorModel PriorModel::deserialize(std::span<const std::uint8_t> in,
                                   std::size_t& offset) {
  const auto tag = detail::get_le<std::uint8_t>(in, offset, "prior tag");
  switch (tag) {
    case 0:
      return standard_normal();
    case 1: {
      const double mean = detail::get_f64(in, offset, "prior mean");
      const double variance = detail::get_f64(in, offset, "prior variance");
      return scaled_gaussian(mean, variance);
    }
    case 2: {
      const auto count =
          detail::get_le<std::uint32_t>(in, offset, "prior knot count");
      detail::require(in, offset, std::size_t{16} * count, "prior knots");
      std::vector<Knot> knots(count);
      for (Knot& k : knots) {
        k.z = detail::get_f64(in, offset, "prior knot");
        k.cumprob = detail::get_f64(in, offset, "prior knot");
      }
      return empirical_piecewise(std::move(knots));
    }
    default:
      throw ParseError("unknown prior tag " + std::to_string(tag));
  }
}

bool operator==(const Knot& a, const Knot& b) {
  return a.z == b.z && a.cumprob == b.cumprob;
}

bool operator==(const PriorModel& a, const PriorModel& b) {
  return a.kind_ == b.kind_ && a.mean_ == b.mean_ &&
         a.variance_ == b.variance_ && a.knots_ == b.knots_;
}

PriorModel fit_empirical_gaussian(std::span<const double> means) {
  if (means.size() < 2) {
    throw InvalidArgumentError("empirical prior needs at least two means");
  }
  double sum = 0.0;
  for (double m : means) sum += m;
  const double avg = sum / static_cast<double>(means.size());
  double ss = 0.0;
  for (double m : means) ss += (m - avg) * (m - avg);
  const double variance = ss / static_cast<double>(means.size());
  if (!(variance >= 1e-12)) {
    throw DegeneratePriorError("variance of the means is " +
                               std::to_string(variance) +
                               "; need at least 1e-12");
  }
  return PriorModel::scaled_gaussian(0.0, variance);
}

PriorModel fit_empirical_piecewise(std::span<const double> samples,
                                   std::size_t knots) {
  if (knots < 2 || samples.size() < knots) {
    throw InvalidArgumentError("piecewise fit needs samples >= knots >= 2");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double last = static_cast<double>(sorted.size() - 1);
  std::vector<Knot> out;
  out.reserve(knots);
  for (std::size_t k = 1; k <= knots; ++k) {
    const double p =
        static_cast<double>(k) / static_cast<double>(knots + 1);
    const double h = last * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double z = sorted[lo] + (h - static_cast<double>(lo)) *
                                      (sorted[hi] - sorted[lo]);
    if (!out.empty() && !(z > out.back().z)) {
      throw DegeneratePriorError(
          "too few distinct samples for " + std::to_string(knots) +
          " knots (knot " + std::to_string(k) + " repeats its predecessor)");
    }
    out.push_back(Knot{z, p});
  }
  return PriorModel::empirical_piecewise(std::move(out));
}

}  // namespace vbq
