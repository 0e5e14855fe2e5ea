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

#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vbq/analysis.hpp"
#include "vbq/container.hpp"
#include "vbq/dyadic.hpp"
#include "vbq/entropy_codec.hpp"
#include "vbq/error.hpp"
#include "vbq/prior.hpp"
#include "vbq/quantizer.hpp"
#include "vbq/sweep.hpp"

namespace py = pybind11;

namespace vbq {
namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<GaussianPosterior> posteriors(const Array& mu, const Array& sigma2) {
  if (mu.ndim() != 1 || sigma2.ndim() != 1 || mu.size() != sigma2.size()) {
    throw InvalidArgumentError("mu and sigma2 must be 1-D of equal length");
  }
  std::vector<GaussianPosterior> out(static_cast<std::size_t>(mu.size()));
  const double* m = mu.data();
  const double* s = sigma2.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {m[i], s[i]};
  return out;
}

RdConfig config(double lambda, std::optional<unsigned> rate_cap) {
  RdConfig cfg;
  cfg.lambda = lambda;
  cfg.rate_cap = rate_cap;
  return cfg;
}

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict code_point_arrays(const std::vector<CodePoint>& cps,
                           const PriorModel& prior) {
  std::vector<std::uint64_t> num;
  std::vector<unsigned> rate;
  std::vector<double> z;
  for (const CodePoint& cp : cps) {
    num.push_back(cp.numerator());
    rate.push_back(cp.rate());
    z.push_back(prior.quantile(cp));
  }
  py::dict d;
  d["numerators"] = to_array(num);
  d["rates"] = to_array(rate);
  d["reconstruction"] = to_array(z);
  return d;
}

std::vector<CodePoint> code_points_from(
    const py::array_t<std::uint64_t, py::array::forcecast>& numerators,
    const py::array_t<unsigned, py::array::forcecast>& rates) {
  if (numerators.size() != rates.size()) {
    throw InvalidArgumentError("numerators and rates differ in length");
  }
  std::vector<CodePoint> out;
  for (py::ssize_t i = 0; i < numerators.size(); ++i) {
    out.push_back(CodePoint::make(numerators.data()[i], rates.data()[i]));
  }
  return out;
}

}  // namespace
}  // namespace vbq

PYBIND11_MODULE(_vbq, m) {
  using namespace vbq;
  m.doc() = "Posterior-aware quantization of Gaussian latents";

  // Messages carry the category first, as on the command line.
  static const py::handle vbq_error =
      py::exception<Error>(m, "VbqError").release();
  py::register_local_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message =
          std::string(category_name(e.category())) + ": " + e.what();
      py::set_error(vbq_error, message.c_str());
    }
  });

  py::class_<CodePoint>(m, "CodePoint")
      .def(py::init<>())
      .def_static("make", &CodePoint::make, py::arg("numerator"),
                  py::arg("scale"))
      .def_static("from_bits", &CodePoint::from_bits)
      .def_property_readonly("numerator", &CodePoint::numerator)
      .def_property_readonly("rate", &CodePoint::rate)
      .def_property_readonly("value", &CodePoint::value)
      .def("bits", &CodePoint::to_bits)
      .def(py::self == py::self)
      .def("__repr__", [](const CodePoint& c) {
        return "CodePoint(" + std::to_string(c.numerator()) + "/2^" +
               std::to_string(c.rate()) + ")";
      });

  py::class_<PriorModel>(m, "PriorModel")
      .def(py::init<>())
      .def_static("standard_normal", &PriorModel::standard_normal)
      .def_static("scaled_gaussian", &PriorModel::scaled_gaussian,
                  py::arg("mean"), py::arg("variance"))
      .def_static("fit_gaussian",
                  [](const Array& means) {
                    return fit_empirical_gaussian(
                        std::span<const double>(means.data(), means.size()));
                  })
      .def_static("fit_piecewise",
                  [](const Array& samples, std::size_t knots) {
                    return fit_empirical_piecewise(
                        std::span<const double>(samples.data(), samples.size()),
                        knots);
                  })
      .def("cdf", &PriorModel::cdf)
      .def("quantile", py::overload_cast<double>(&PriorModel::quantile,
                                                 py::const_))
      .def("quantile_of",
           py::overload_cast<const CodePoint&>(&PriorModel::quantile,
                                               py::const_))
      .def("describe", &PriorModel::describe)
      .def(py::self == py::self)
      .def("__repr__", &PriorModel::describe);

  m.def("shortest_in_interval", &shortest_in_interval, py::arg("lo"),
        py::arg("hi"));

  m.def(
      "optimize_dimension",
      [](double mu, double sigma2, const PriorModel& prior, double lambda,
         std::optional<unsigned> rate_cap) {
        const DimensionResult r =
            optimize_dimension({mu, sigma2}, prior, config(lambda, rate_cap));
        py::dict d;
        d["code_point"] = r.code_point;
        d["objective"] = r.objective;
        d["distortion"] = r.distortion;
        d["reconstruction"] = r.reconstruction;
        d["final_rate"] = r.final_rate;
        d["candidates"] = r.candidates;
        return d;
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("prior") = PriorModel(),
      py::arg("lam") = 1.0, py::arg("rate_cap") = 32u);

  m.def(
      "quantize",
      [](const Array& mu, const Array& sigma2, const PriorModel& prior,
         double lambda, std::optional<unsigned> rate_cap) {
        const auto post = posteriors(mu, sigma2);
        const QuantizedVector q =
            quantize_vector(post, prior, config(lambda, rate_cap));
        py::dict d = code_point_arrays(q.code_points, prior);
        d["total_rate"] = q.total_rate;
        d["objectives"] = to_array(q.objectives);
        return d;
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("prior") = PriorModel(),
      py::arg("lam") = 1.0, py::arg("rate_cap") = 32u);

  m.def(
      "encode",
      [](const Array& mu, const Array& sigma2, const PriorModel& prior,
         double lambda, std::optional<unsigned> rate_cap) {
        const auto post = posteriors(mu, sigma2);
        const QuantizedVector q =
            quantize_vector(post, prior, config(lambda, rate_cap));
        const auto bytes = write_container(
            encode_container(q.code_points, prior, TableMode::kHeaderTable));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                         bytes.size());
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("prior") = PriorModel(),
      py::arg("lam") = 1.0, py::arg("rate_cap") = 32u,
      "Quantize and write a header-table container.");

  m.def(
      "decode",
      [](const py::bytes& data) {
        const std::string s = data;
        const std::vector<std::uint8_t> bytes(s.begin(), s.end());
        const CompressedContainer c = read_container(bytes);
        py::dict d = code_point_arrays(decode_container(c), c.prior);
        d["prior"] = c.prior;
        return d;
      },
      py::arg("data"));

  m.def(
      "information_content",
      [](const py::array_t<std::uint64_t, py::array::forcecast>& numerators,
         const py::array_t<unsigned, py::array::forcecast>& rates) {
        const auto cps = code_points_from(numerators, rates);
        return information_content(cps, build_frequency_table(cps));
      },
      py::arg("numerators"), py::arg("rates"),
      "Bits of the sequence under its own empirical table.");

  m.def(
      "sweep",
      [](const Array& mu, const Array& sigma2, const std::vector<double>& lambdas,
         const PriorModel& prior, std::optional<unsigned> rate_cap) {
        const auto post = posteriors(mu, sigma2);
        py::list out;
        for (const RdPoint& p :
             sweep_lambda(post, prior, lambdas, config(1.0, rate_cap))) {
          py::dict d;
          d["lambda"] = p.lambda;
          d["total_rate_bits"] = p.total_rate_bits;
          d["entropy_coded_bits"] = p.entropy_coded_bits;
          d["mse_z"] = p.mse_z;
          d["log_q"] = p.log_q;
          out.append(d);
        }
        return out;
      },
      py::arg("mu"), py::arg("sigma2"), py::arg("lambdas"),
      py::arg("prior") = PriorModel(), py::arg("rate_cap") = 32u);

  m.def(
      "synthetic_posteriors",
      [](std::uint64_t seed, std::size_t dimensions, double variance_lo,
         double variance_hi) {
        SyntheticSource src;
        src.seed = seed;
        src.dimensions = dimensions;
        src.variance_lo = variance_lo;
        src.variance_hi = variance_hi;
        std::vector<double> mu, s2;
        for (const GaussianPosterior& p : src.generate()) {
          mu.push_back(p.mu);
          s2.push_back(p.sigma2);
        }
        return py::make_tuple(to_array(mu), to_array(s2));
      },
      py::arg("seed"), py::arg("dimensions") = 256,
      py::arg("variance_lo") = 1e-4, py::arg("variance_hi") = 1.0);

  m.attr("INFINITE_LAMBDA") = std::numeric_limits<double>::infinity();
}
