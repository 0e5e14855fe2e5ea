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

#ifndef VBQ_CLI_HPP_
#define VBQ_CLI_HPP_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vbq/prior.hpp"
#include "vbq/quantizer.hpp"

namespace vbq {

// Runs the `vbq` command line. Reports go to `out` (unless redirected with
// -o), diagnostics to `err` as "error: <category>: <message>". Returns 0 on
// success and the error category's code otherwise; usage errors map to the
// invalid-argument code.
int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err);

// --prior values: std-normal | gaussian:MEAN,VAR | empirical:KNOTS.csv |
// fit-gaussian | fit-piecewise:N. The fit-* forms use the input means.
PriorModel resolve_prior(const std::string& spec,
                         std::span<const GaussianPosterior> posteriors);

// Comma-separated reals; "inf" is accepted. Throws InvalidArgumentError.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace vbq

#endif  // VBQ_CLI_HPP_
