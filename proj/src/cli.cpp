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

#include "vbq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "vbq/analysis.hpp"
#include "vbq/baselines.hpp"
#include "vbq/container.hpp"
#include "vbq/csv_io.hpp"
#include "vbq/error.hpp"
#include "vbq/sweep.hpp"

namespace vbq {
namespace {

constexpr const char* kFormats = R"(File formats:
  posteriors CSV      header mu,sigma2; one row per latent dimension
  knots CSV           header z,cumprob; strictly increasing in both
  table CSV           header rate,numerator,count (external frequency table)
  reconstruction CSV  header numerator,rate,z_hat
  sweep CSV           header lambda,total_rate_bits,entropy_coded_bits,mse_z,log_q
  codebook CSV        "# origin: <tag>" then header grid_point,probability
  compare CSV         header method,parameter,bitrate_per_dim,mse_z
  collapse CSV        header channel,dimensions,vbq_rate_bits,vbq_coded_bits,
                      uniform_coded_bits,mean_kl
  container (.vbq)    "VBQ1", version, table mode, K, prior, frequency table
                      or its CRC-32, payload bit length, payload
Lines starting with '#' are comments. Reals use 17 significant digits.
Exit codes: 0 ok, 2 invalid-argument, 3 domain, 4 degenerate-prior,
  5 non-canonical, 6 unbounded-search, 7 parse, 8 coding, 9 decode,
  10 container-magic, 11 container-version, 12 container-checksum,
  13 container-truncated, 14 io.)";

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
  if (!out) throw IoError("write failed: " + path);
}

// Text output to a file when a path is given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot create " + path);
    }
    stream_ = file_ ? file_.get() : &fallback;
  }
  std::ostream& operator*() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw IoError("write failed: " + path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

FrequencyTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_table(in, path);
}

struct QuantizeOptions {
  std::string prior = "std-normal";
  double lambda = 1.0;
  bool median = false;
  unsigned rate_cap = 32;

  void add(CLI::App* app, bool with_lambda = true) {
    app->add_option("--prior", prior,
                    "std-normal | gaussian:MEAN,VAR | empirical:KNOTS.csv | "
                    "fit-gaussian | fit-piecewise:N")
        ->capture_default_str();
    if (with_lambda) {
      app->add_option("--lambda", lambda, "rate penalty (> 0)")
          ->capture_default_str();
      app->add_flag("--median", median,
                    "infinite lambda: every dimension becomes 1/2");
    }
    app->add_option("--rate-cap", rate_cap, "largest searched rate (0: none)")
        ->capture_default_str();
  }

  RdConfig config() const {
    RdConfig cfg;
    if (median) {
      cfg.lambda = std::numeric_limits<double>::infinity();
    } else {
      if (!(lambda > 0.0)) {
        throw InvalidArgumentError("--lambda must be > 0 (or use --median)");
      }
      cfg.lambda = lambda;
    }
    cfg.rate_cap = rate_cap == 0 ? std::nullopt : std::optional(rate_cap);
    return cfg;
  }

  std::vector<std::string> comments() const {
    return {"prior: " + prior,
            "rate_cap: " + std::to_string(rate_cap)};
  }
};

TableMode parse_mode(const std::string& mode) {
  if (mode == "header-table") return TableMode::kHeaderTable;
  if (mode == "external-table") return TableMode::kExternalTable;
  throw InvalidArgumentError("unknown --mode " + mode);
}

std::vector<std::size_t> to_sizes(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (double x : v) {
    if (!(x >= 1.0) || x != std::floor(x)) {
      throw InvalidArgumentError("codebook sizes must be positive integers");
    }
    out.push_back(static_cast<std::size_t>(x));
  }
  return out;
}

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> out;
  for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, e));
  return out;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad number \"" + item + "\" in list");
    }
  }
  if (out.empty()) throw InvalidArgumentError("empty list");
  return out;
}

PriorModel resolve_prior(const std::string& spec,
                         std::span<const GaussianPosterior> posteriors) {
  std::vector<double> means;
  for (const auto& p : posteriors) means.push_back(p.mu);
  if (spec == "std-normal") return PriorModel::standard_normal();
  if (spec == "fit-gaussian") return fit_empirical_gaussian(means);
  if (spec.starts_with("gaussian:")) {
    const auto v = parse_real_list(spec.substr(9));
    if (v.size() != 2) {
      throw InvalidArgumentError("--prior gaussian:MEAN,VAR needs 2 numbers");
    }
    return PriorModel::scaled_gaussian(v[0], v[1]);
  }
  if (spec.starts_with("empirical:")) {
    const std::string path = spec.substr(10);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return PriorModel::empirical_piecewise(read_knots(in, path));
  }
  if (spec.starts_with("fit-piecewise:")) {
    const auto v = parse_real_list(spec.substr(14));
    if (v.size() != 1 || !(v[0] >= 2.0) || v[0] != std::floor(v[0])) {
      throw InvalidArgumentError("--prior fit-piecewise:N needs N >= 2");
    }
    return fit_empirical_piecewise(means, static_cast<std::size_t>(v[0]));
  }
  throw InvalidArgumentError("unknown prior \"" + spec + "\"");
}

int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Posterior-aware quantization of Gaussian latents", "vbq"};
  app.footer(kFormats);
  app.require_subcommand(1);

  // encode
  auto* encode = app.add_subcommand("encode", "quantize and compress");
  std::string enc_in, enc_out, enc_mode = "header-table", enc_table,
                               enc_emit_table;
  QuantizeOptions enc_q;
  encode->add_option("input", enc_in, "posteriors CSV")->required();
  encode->add_option("-o,--output", enc_out, "container path")->required();
  enc_q.add(encode);
  encode->add_option("--mode", enc_mode, "header-table | external-table")
      ->capture_default_str();
  encode->add_option("--table", enc_table,
                     "external frequency table CSV to code with");
  encode->add_option("--emit-table", enc_emit_table,
                     "write the input's own frequency table and code with it");

  // decode
  auto* decode = app.add_subcommand("decode", "reconstruct latents");
  std::string dec_in, dec_out, dec_table;
  decode->add_option("input", dec_in, "container path")->required();
  decode->add_option("-o,--output", dec_out, "reconstruction CSV");
  decode->add_option("--table", dec_table,
                     "frequency table CSV for external-table containers");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "rate-distortion sweep over lambda");
  std::string sw_in, sw_out, sw_lambdas, sw_table;
  QuantizeOptions sw_q;
  sweep->add_option("input", sw_in, "posteriors CSV")->required();
  sweep->add_option("--lambdas", sw_lambdas, "comma-separated, e.g. 0.1,1,10")
      ->required();
  sweep->add_option("--table", sw_table,
                    "size containers in external-table mode with this table");
  sweep->add_option("-o,--output", sw_out, "sweep CSV");
  sw_q.add(sweep, false);

  // baseline
  auto* baseline = app.add_subcommand("baseline", "posterior-blind codebooks");
  std::string bl_method, bl_in, bl_out;
  double bl_delta = 0.5, bl_lambda = 0.1;
  std::size_t bl_k = 8, bl_k_init = 32;
  std::uint64_t bl_seed = 0;
  baseline->add_option("method", bl_method, "uniform | kmeans | lloyd")
      ->required()
      ->check(CLI::IsMember({"uniform", "kmeans", "lloyd"}));
  baseline->add_option("input", bl_in, "posteriors CSV")->required();
  baseline->add_option("--delta", bl_delta, "uniform grid spacing")
      ->capture_default_str();
  baseline->add_option("--k", bl_k, "k-means codebook size")
      ->capture_default_str();
  baseline->add_option("--lambda", bl_lambda, "Lloyd rate penalty")
      ->capture_default_str();
  baseline->add_option("--k-init", bl_k_init, "Lloyd initial codebook size")
      ->capture_default_str();
  baseline->add_option("--seed", bl_seed, "tie-break seed")
      ->capture_default_str();
  baseline->add_option("-o,--output", bl_out, "codebook CSV");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "experiment reports");
  analyze->require_subcommand(1);
  // -o and --seed may follow the report name.
  analyze->fallthrough();
  std::string an_out;
  std::uint64_t an_seed = 0;
  analyze->add_option("-o,--output", an_out, "report CSV");
  analyze->add_option("--seed", an_seed, "random seed")->capture_default_str();

  auto* toy = analyze->add_subcommand("toy", "2-parameter regression demo");
  ToyRegressionConfig toy_cfg;
  toy->add_option("--lambda", toy_cfg.lambda)->capture_default_str();
  toy->add_option("--ratio", toy_cfg.sigma_ratio, "sigma_a / sigma_b")
      ->capture_default_str();
  toy->add_option("--points", toy_cfg.points)->capture_default_str();
  toy->add_option("--noise", toy_cfg.noise_std)->capture_default_str();

  auto* scatter = analyze->add_subcommand("scatter", "rate vs information");
  std::string sc_in;
  QuantizeOptions sc_q;
  scatter->add_option("input", sc_in, "posteriors CSV")->required();
  sc_q.add(scatter);

  auto* collapse = analyze->add_subcommand(
      "collapse", "per-channel bits (6-channel replica unless input given)");
  std::string co_in;
  std::size_t co_dims = 512;
  double co_spread = 0.0;
  QuantizeOptions co_q;
  collapse->add_option("input", co_in, "CSV with channel,mu,sigma2");
  collapse->add_option("--dims", co_dims, "dimensions per replica channel")
      ->capture_default_str();
  collapse->add_option("--spread", co_spread,
                       "stddev of collapsed replica means")
      ->capture_default_str();
  co_q.add(collapse);

  auto* compare = analyze->add_subcommand("compare-rd", "R-D curves");
  std::string cr_in, cr_lambdas, cr_deltas, cr_ks, cr_lloyd;
  std::size_t cr_k_init = 32;
  QuantizeOptions cr_q;
  compare->add_option("input", cr_in, "posteriors CSV")->required();
  compare->add_option("--lambdas", cr_lambdas, "VBQ lambdas (default 2^-6..2^16)");
  compare->add_option("--deltas", cr_deltas, "uniform spacings");
  compare->add_option("--ks", cr_ks, "k-means sizes (default 2,4,...,64)");
  compare->add_option("--lloyd-lambdas", cr_lloyd, "Lloyd penalties");
  compare->add_option("--k-init", cr_k_init, "Lloyd initial size")
      ->capture_default_str();
  cr_q.add(compare, false);

  auto* synth = analyze->add_subcommand("synth", "synthetic posteriors CSV");
  SyntheticSource src;
  std::string sy_model = "independent";
  synth->add_option("--dims", src.dimensions)->capture_default_str();
  synth->add_option("--mean-variance", src.mean_variance)
      ->capture_default_str();
  synth->add_option("--var-lo", src.variance_lo)->capture_default_str();
  synth->add_option("--var-hi", src.variance_hi)->capture_default_str();
  synth->add_option("--model", sy_model, "independent | conjugate")
      ->check(CLI::IsMember({"independent", "conjugate"}))
      ->capture_default_str();

  std::vector<std::string> argv(args.begin(), args.end());
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorCategory::kInvalidArgument);
  }

  try {
    if (encode->parsed()) {
      const auto posteriors = read_posteriors_file(enc_in);
      const PriorModel prior = resolve_prior(enc_q.prior, posteriors);
      const RdConfig cfg = enc_q.config();
      const TableMode mode = parse_mode(enc_mode);
      const QuantizedVector q = quantize_vector(posteriors, prior, cfg);
      std::optional<FrequencyTable> external;
      if (mode == TableMode::kExternalTable) {
        if (enc_table.empty() == enc_emit_table.empty()) {
          throw InvalidArgumentError(
              "external-table mode needs exactly one of --table and "
              "--emit-table");
        }
        if (!enc_table.empty()) {
          external = load_table(enc_table);
        } else {
          external = build_frequency_table(q.code_points);
          Sink sink(enc_emit_table, out);
          write_table(*sink, *external);
          sink.close();
        }
      } else if (!enc_table.empty() || !enc_emit_table.empty()) {
        throw InvalidArgumentError("--table needs --mode external-table");
      }
      const CompressedContainer c = encode_container(
          q.code_points, prior, mode, external ? &*external : nullptr);
      write_bytes(enc_out, write_container(c));
      const RdPoint p = evaluate_rd_point(posteriors, cfg, q, c);
      const double k = static_cast<double>(posteriors.size());
      out << "K=" << posteriors.size()
          << " total_bits=" << p.entropy_coded_bits
          << " bits_per_dim=" << format_real(k > 0 ? p.entropy_coded_bits / k : 0.0)
          << " rate_bits=" << p.total_rate_bits
          << " mse_z=" << format_real(p.mse_z)
          << " log_q=" << format_real(p.log_q) << '\n';
      return 0;
    }

    if (decode->parsed()) {
      const CompressedContainer c = read_container(read_bytes(dec_in));
      std::optional<FrequencyTable> external;
      if (!dec_table.empty()) external = load_table(dec_table);
      const auto cps = decode_container(c, external ? &*external : nullptr);
      std::vector<double> z(cps.size());
      for (std::size_t i = 0; i < cps.size(); ++i) {
        z[i] = c.prior.quantile(cps[i]);
      }
      Sink sink(dec_out, out);
      const std::vector<std::string> comments = {"prior: " +
                                                 c.prior.describe()};
      write_comments(*sink, comments);
      write_reconstruction(*sink, cps, z);
      sink.close();
      return 0;
    }

    if (sweep->parsed()) {
      const auto posteriors = read_posteriors_file(sw_in);
      const PriorModel prior = resolve_prior(sw_q.prior, posteriors);
      const auto lambdas = parse_real_list(sw_lambdas);
      RdConfig base = sw_q.config();
      std::optional<FrequencyTable> external;
      if (!sw_table.empty()) external = load_table(sw_table);
      const auto points = sweep_lambda(posteriors, prior, lambdas, base,
                                       external ? &*external : nullptr);
      Sink sink(sw_out, out);
      auto comments = sw_q.comments();
      comments.push_back("lambdas: " + sw_lambdas);
      write_comments(*sink, comments);
      write_rd_points(*sink, points);
      sink.close();
      return 0;
    }

    if (baseline->parsed()) {
      const auto posteriors = read_posteriors_file(bl_in);
      std::vector<double> means;
      for (const auto& p : posteriors) means.push_back(p.mu);
      ScalarCodebook cb;
      double rate_bits = 0.0, mse = 0.0;
      if (bl_method == "uniform") {
        if (!(bl_delta > 0.0)) throw InvalidArgumentError("--delta must be > 0");
        const UniformQuantization uq = uniform_quantize(means, bl_delta);
        cb = uq.codebook;
        for (std::size_t i = 0; i < means.size(); ++i) {
          rate_bits -= std::log2(cb.probabilities[uq.indices[i]]);
          const double d = uq.values[i] - means[i];
          mse += d * d;
        }
        if (!means.empty()) mse /= static_cast<double>(means.size());
      } else {
        cb = bl_method == "kmeans"
                 ? kmeans_codebook(means, bl_k, bl_seed)
                 : lloyd_ec_codebook(means, bl_k_init, bl_lambda, bl_seed);
        const CodebookQuantization cq = codebook_quantize(means, cb);
        rate_bits = cq.rate_bits;
        mse = cq.mse;
      }
      Sink sink(bl_out, out);
      const std::vector<std::string> comments = {
          "seed: " + std::to_string(bl_seed),
          "rate_bits: " + format_real(rate_bits),
          "mse: " + format_real(mse)};
      write_comments(*sink, comments);
      write_codebook(*sink, cb);
      sink.close();
      return 0;
    }

    if (analyze->parsed()) {
      Sink sink(an_out, out);
      std::vector<std::string> comments = {"seed: " + std::to_string(an_seed)};
      if (toy->parsed()) {
        toy_cfg.seed = an_seed;
        const ToyRegressionReport rep = toy_regression_demo(toy_cfg);
        comments.push_back("lambda: " + format_real(toy_cfg.lambda));
        comments.push_back("sigma_ratio: " + format_real(toy_cfg.sigma_ratio));
        write_comments(*sink, comments);
        write_toy_report(*sink, rep);
      } else if (scatter->parsed()) {
        const auto posteriors = read_posteriors_file(sc_in);
        const PriorModel prior = resolve_prior(sc_q.prior, posteriors);
        const QuantizedVector q =
            quantize_vector(posteriors, prior, sc_q.config());
        const FrequencyTable table = build_frequency_table(q.code_points);
        const RateInfoScatter s = rate_info_scatter(q.code_points, table);
        auto extra = sc_q.comments();
        comments.insert(comments.end(), extra.begin(), extra.end());
        comments.push_back("lambda: " + format_real(sc_q.config().lambda));
        comments.push_back(
            "slope: " + (s.slope ? format_real(*s.slope) : "undefined"));
        comments.push_back("rank_correlation: " +
                           (s.rank_correlation ? format_real(*s.rank_correlation)
                                               : "undefined"));
        write_comments(*sink, comments);
        write_scatter(*sink, s);
      } else if (collapse->parsed()) {
        std::vector<std::vector<GaussianPosterior>> channels;
        std::vector<GaussianPosterior> flat;
        if (co_in.empty()) {
          channels = collapse_replica(an_seed, co_dims, co_spread);
          comments.push_back("replica: dims=" + std::to_string(co_dims) +
                             " spread=" + format_real(co_spread));
        } else {
          std::ifstream in(co_in);
          if (!in) throw IoError("cannot open " + co_in);
          static const std::vector<std::string> kColumns = {"channel", "mu",
                                                            "sigma2"};
          const CsvRecords rec = read_csv_columns(in, co_in, kColumns);
          std::map<std::uint64_t, std::vector<GaussianPosterior>> by_channel;
          for (std::size_t i = 0; i < rec.rows.size(); ++i) {
            by_channel[rec.integer(i, 0)].push_back(
                {rec.real(i, 1), rec.real(i, 2)});
          }
          for (auto& [id, ch] : by_channel) channels.push_back(std::move(ch));
        }
        for (const auto& ch : channels) flat.insert(flat.end(), ch.begin(), ch.end());
        const PriorModel prior = resolve_prior(co_q.prior, flat);
        const RdConfig cfg = co_q.config();
        const CollapseReport rep =
            collapse_report(channels, prior, cfg.lambda, cfg);
        auto extra = co_q.comments();
        comments.insert(comments.end(), extra.begin(), extra.end());
        comments.push_back("lambda: " + format_real(rep.lambda));
        comments.push_back("uniform_delta: " + format_real(rep.uniform_delta));
        comments.push_back("vbq_total_bits: " + format_real(rep.vbq_total_bits));
        comments.push_back("uniform_total_bits: " +
                           format_real(rep.uniform_total_bits));
        write_comments(*sink, comments);
        write_collapse(*sink, rep);
      } else if (compare->parsed()) {
        const auto posteriors = read_posteriors_file(cr_in);
        const PriorModel prior = resolve_prior(cr_q.prior, posteriors);
        CompareConfig cfg;
        cfg.seed = an_seed;
        cfg.rd = cr_q.config();
        cfg.lambdas = cr_lambdas.empty() ? powers_of_two(-6, 16)
                                         : parse_real_list(cr_lambdas);
        cfg.deltas = cr_deltas.empty() ? powers_of_two(-8, 2)
                                       : parse_real_list(cr_deltas);
        cfg.kmeans_sizes = to_sizes(
            cr_ks.empty() ? powers_of_two(1, 6) : parse_real_list(cr_ks));
        cfg.lloyd_lambdas = cr_lloyd.empty() ? powers_of_two(-10, 0)
                                             : parse_real_list(cr_lloyd);
        cfg.lloyd_k_init = cr_k_init;
        const auto rows = compare_rd(posteriors, prior, cfg);
        auto extra = cr_q.comments();
        comments.insert(comments.end(), extra.begin(), extra.end());
        write_comments(*sink, comments);
        write_rd_rows(*sink, rows);
      } else if (synth->parsed()) {
        src.seed = an_seed;
        src.mean_model = sy_model == "conjugate"
                             ? SyntheticSource::MeanModel::kConjugate
                             : SyntheticSource::MeanModel::kIndependent;
        comments.push_back("model: " + sy_model);
        comments.push_back("sigma2: log-uniform [" +
                           format_real(src.variance_lo) + ", " +
                           format_real(src.variance_hi) + "]");
        comments.push_back("mean_variance: " + format_real(src.mean_variance));
        write_comments(*sink, comments);
        write_posteriors(*sink, src.generate());
      }
      sink.close();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << category_name(e.category()) << ": " << e.what()
        << '\n';
    return static_cast<int>(e.category());
  }
  return 0;
}

}  // namespace vbq
