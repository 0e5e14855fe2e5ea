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

// CSV files used by the command-line tool. Every file has a fixed header
// row; lines starting with '#' are comments. Reals are written with 17
// significant digits so that they read back bit-exactly.

#ifndef VBQ_CSV_IO_HPP_
#define VBQ_CSV_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vbq/analysis.hpp"
#include "vbq/baselines.hpp"
#include "vbq/entropy_codec.hpp"
#include "vbq/prior.hpp"
#include "vbq/quantizer.hpp"
#include "vbq/sweep.hpp"

namespace vbq {

std::string format_real(double x);

// Rows of a CSV file reduced to the requested columns, in request order.
// Extra columns are ignored. Throws ParseError naming the source and line
// for a missing column or a short row.
struct CsvRow {
  std::size_t line = 0;  // 1-based
  std::vector<std::string> fields;
};
struct CsvRecords {
  std::string source;
  std::vector<std::string> columns;
  std::vector<CsvRow> rows;
  std::vector<std::string> comments;  // without the leading "# "

  // Field parsers; ParseError names source, line and column.
  double real(std::size_t row, std::size_t column) const;
  std::uint64_t integer(std::size_t row, std::size_t column) const;
};
CsvRecords read_csv_columns(std::istream& in, const std::string& source,
                            std::span<const std::string> columns);

// `mu,sigma2`
std::vector<GaussianPosterior> read_posteriors(std::istream& in,
                                               const std::string& source);
std::vector<GaussianPosterior> read_posteriors_file(const std::string& path);
void write_posteriors(std::ostream& out,
                      std::span<const GaussianPosterior> posteriors);

// `z,cumprob`
std::vector<Knot> read_knots(std::istream& in, const std::string& source);

// `rate,numerator,count`
FrequencyTable read_table(std::istream& in, const std::string& source);
void write_table(std::ostream& out, const FrequencyTable& table);

// `numerator,rate,z_hat`
void write_reconstruction(std::ostream& out, std::span<const CodePoint> cps,
                          std::span<const double> z_hat);

// `lambda,total_rate_bits,entropy_coded_bits,mse_z,log_q`
void write_rd_points(std::ostream& out, std::span<const RdPoint> points);

// `# origin: <tag>` then `grid_point,probability`
void write_codebook(std::ostream& out, const ScalarCodebook& codebook);
ScalarCodebook read_codebook(std::istream& in, const std::string& source);

// `method,parameter,bitrate_per_dim,mse_z`
void write_rd_rows(std::ostream& out, std::span<const RdRow> rows);

// `channel,dimensions,vbq_rate_bits,vbq_coded_bits,uniform_coded_bits,
//  mean_kl`
void write_collapse(std::ostream& out, const CollapseReport& report);

// `numerator,rate,information`
void write_scatter(std::ostream& out, const RateInfoScatter& scatter);

// `quantity,value`
void write_toy_report(std::ostream& out, const ToyRegressionReport& report);

// Writes each entry as a `# ` comment line.
void write_comments(std::ostream& out, std::span<const std::string> lines);

}  // namespace vbq

#endif  // VBQ_CSV_IO_HPP_
