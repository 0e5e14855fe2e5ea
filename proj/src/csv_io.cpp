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

#include "vbq/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "vbq/error.hpp"

namespace vbq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double CsvRecords::real(std::size_t row, std::size_t column) const {
  const std::string& text = rows[row].fields[column];
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(where(source, rows[row].line) + "bad number \"" + text +
                     "\" in column " + columns[column]);
  }
  return value;
}

std::uint64_t CsvRecords::integer(std::size_t row, std::size_t column) const {
  const std::string& text = rows[row].fields[column];
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(where(source, rows[row].line) + "bad integer \"" + text +
                     "\" in column " + columns[column]);
  }
  return value;
}

CsvRecords read_csv_columns(std::istream& in, const std::string& source,
                            std::span<const std::string> columns) {
  CsvRecords out;
  out.source = source;
  out.columns.assign(columns.begin(), columns.end());
  std::vector<std::size_t> position;
  std::size_t width = 0;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      out.comments.emplace_back(trim(view.substr(1)));
      continue;
    }
    const std::vector<std::string> fields = split(view);
    if (!have_header) {
      have_header = true;
      width = fields.size();
      for (const std::string& column : columns) {
        std::size_t at = 0;
        while (at < fields.size() && fields[at] != column) ++at;
        if (at == fields.size()) {
          throw ParseError(where(source, number) + "missing column " + column);
        }
        position.push_back(at);
      }
      continue;
    }
    if (fields.size() != width) {
      throw ParseError(where(source, number) + "expected " +
                       std::to_string(width) + " fields, found " +
                       std::to_string(fields.size()));
    }
    CsvRow row;
    row.line = number;
    for (std::size_t at : position) row.fields.push_back(fields[at]);
    out.rows.push_back(std::move(row));
  }
  if (!have_header) {
    throw ParseError(where(source, number) + "missing header row");
  }
  return out;
}

std::vector<GaussianPosterior> read_posteriors(std::istream& in,
                                               const std::string& source) {
  static const std::vector<std::string> kColumns = {"mu", "sigma2"};
  const CsvRecords rec = read_csv_columns(in, source, kColumns);
  std::vector<GaussianPosterior> out(rec.rows.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {rec.real(i, 0), rec.real(i, 1)};
  }
  return out;
}

std::vector<GaussianPosterior> read_posteriors_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_posteriors(in, path);
}

void write_posteriors(std::ostream& out,
                      std::span<const GaussianPosterior> posteriors) {
  out << "mu,sigma2\n";
  for (const GaussianPosterior& p : posteriors) {
    out << format_real(p.mu) << ',' << format_real(p.sigma2) << '\n';
  }
}

std::vector<Knot> read_knots(std::istream& in, const std::string& source) {
  static const std::vector<std::string> kColumns = {"z", "cumprob"};
  const CsvRecords rec = read_csv_columns(in, source, kColumns);
  std::vector<Knot> out(rec.rows.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {rec.real(i, 0), rec.real(i, 1)};
  }
  return out;
}

FrequencyTable read_table(std::istream& in, const std::string& source) {
  static const std::vector<std::string> kColumns = {"rate", "numerator",
                                                    "count"};
  const CsvRecords rec = read_csv_columns(in, source, kColumns);
  FrequencyTable::Map entries;
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    const std::uint64_t rate = rec.integer(i, 0);
    const std::uint64_t numerator = rec.integer(i, 1);
    const std::uint64_t count = rec.integer(i, 2);
    const std::string at = where(source, rec.rows[i].line);
    if (rate < 1 || rate > kMaxRate || numerator % 2 == 0 ||
        numerator >= (std::uint64_t{1} << rate)) {
      throw ParseError(at + "not a canonical code point");
    }
    if (count == 0 || count > UINT32_MAX) {
      throw ParseError(at + "count out of range");
    }
    const CodePoint cp = CodePoint::make(numerator, static_cast<unsigned>(rate));
    if (!entries.emplace(cp, static_cast<std::uint32_t>(count)).second) {
      throw ParseError(at + "duplicate code point");
    }
  }
  try {
    return FrequencyTable(std::move(entries));
  } catch (const Error& e) {
    rethrow_with_context(e, source);
  }
}

void write_table(std::ostream& out, const FrequencyTable& table) {
  out << "rate,numerator,count\n";
  for (const auto& [cp, count] : table.entries()) {
    out << cp.rate() << ',' << cp.numerator() << ',' << count << '\n';
  }
}

void write_reconstruction(std::ostream& out, std::span<const CodePoint> cps,
                          std::span<const double> z_hat) {
  out << "numerator,rate,z_hat\n";
  for (std::size_t i = 0; i < cps.size(); ++i) {
    out << cps[i].numerator() << ',' << cps[i].rate() << ','
        << format_real(z_hat[i]) << '\n';
  }
}

void write_rd_points(std::ostream& out, std::span<const RdPoint> points) {
  out << "lambda,total_rate_bits,entropy_coded_bits,mse_z,log_q\n";
  for (const RdPoint& p : points) {
    out << format_real(p.lambda) << ',' << p.total_rate_bits << ','
        << p.entropy_coded_bits << ',' << format_real(p.mse_z) << ','
        << format_real(p.log_q) << '\n';
  }
}

void write_codebook(std::ostream& out, const ScalarCodebook& codebook) {
  out << "# origin: " << codebook.origin.describe() << '\n';
  out << "grid_point,probability\n";
  for (std::size_t i = 0; i < codebook.grid.size(); ++i) {
    out << format_real(codebook.grid[i]) << ','
        << format_real(codebook.probabilities[i]) << '\n';
  }
}

ScalarCodebook read_codebook(std::istream& in, const std::string& source) {
  static const std::vector<std::string> kColumns = {"grid_point",
                                                    "probability"};
  const CsvRecords rec = read_csv_columns(in, source, kColumns);
  ScalarCodebook cb;
  bool have_origin = false;
  for (const std::string& c : rec.comments) {
    constexpr std::string_view kTag = "origin:";
    if (c.starts_with(kTag)) {
      cb.origin = CodebookOrigin::parse(trim(std::string_view(c).substr(kTag.size())));
      have_origin = true;
    }
  }
  if (!have_origin) throw ParseError(source + ": missing origin comment");
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    cb.grid.push_back(rec.real(i, 0));
    cb.probabilities.push_back(rec.real(i, 1));
    if (i > 0 && !(cb.grid[i] > cb.grid[i - 1])) {
      throw ParseError(where(source, rec.rows[i].line) +
                       "grid points must increase");
    }
  }
  return cb;
}

void write_rd_rows(std::ostream& out, std::span<const RdRow> rows) {
  out << "method,parameter,bitrate_per_dim,mse_z\n";
  for (const RdRow& r : rows) {
    out << r.method << ',' << format_real(r.parameter) << ','
        << format_real(r.bitrate_per_dim) << ',' << format_real(r.mse_z)
        << '\n';
  }
}

void write_collapse(std::ostream& out, const CollapseReport& report) {
  out << "channel,dimensions,vbq_rate_bits,vbq_coded_bits,"
         "uniform_coded_bits,mean_kl\n";
  for (const ChannelReport& c : report.channels) {
    out << c.channel << ',' << c.dimensions << ','
        << format_real(c.vbq_rate_bits) << ','
        << format_real(c.vbq_coded_bits) << ','
        << format_real(c.uniform_coded_bits) << ',' << format_real(c.mean_kl)
        << '\n';
  }
}

void write_scatter(std::ostream& out, const RateInfoScatter& scatter) {
  out << "numerator,rate,information\n";
  for (const RateInfoPoint& p : scatter.points) {
    out << p.code_point.numerator() << ',' << p.rate << ','
        << format_real(p.information) << '\n';
  }
}

void write_toy_report(std::ostream& out, const ToyRegressionReport& r) {
  out << "quantity,value\n";
  const auto row = [&](const char* name, double v) {
    out << name << ',' << format_real(v) << '\n';
  };
  row("mean_a", r.mean[0]);
  row("mean_b", r.mean[1]);
  row("stddev_a", r.stddev[0]);
  row("stddev_b", r.stddev[1]);
  row("rate_a", r.code_points[0].rate());
  row("rate_b", r.code_points[1].rate());
  row("vbq_a", r.vbq[0]);
  row("vbq_b", r.vbq[1]);
  row("uniform_a", r.uniform[0]);
  row("uniform_b", r.uniform[1]);
  row("delta", r.delta);
  row("vbq_distance", r.vbq_distance);
  row("uniform_distance", r.uniform_distance);
  row("vbq_log_q", r.vbq_log_q);
  row("uniform_log_q", r.uniform_log_q);
  row("vbq_data_sse", r.vbq_data_sse);
  row("uniform_data_sse", r.uniform_data_sse);
}

void write_comments(std::ostream& out, std::span<const std::string> lines) {
  for (const std::string& l : lines) out << "# " << l << '\n';
}

}  // namespace vbq
