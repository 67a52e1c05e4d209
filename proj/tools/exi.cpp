// exi: extremal index estimation for heavy-tailed stationary series.
//
// Subcommands: estimate, spectrum, scales, competitors, simulate, bench.
// Results go to stdout as CSV sections or JSON lines; every run echoes its
// fully resolved configuration. Exit codes: 0 success, 2 configuration
// error, 3 data error, 4 estimation error.

#include "exi/bench.hpp"
#include "exi/competitors.hpp"
#include "exi/core.hpp"
#include "exi/intervals.hpp"
#include "exi/maxspec.hpp"
#include "exi/parallel.hpp"
#include "exi/resample.hpp"
#include "exi/rng.hpp"
#include "exi/scaleselect.hpp"
#include "exi/simulate.hpp"
#include "exi/stats.hpp"
#include "exi/types.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using exi::Index;
using exi::Series;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Output records: one stream renders as CSV sections or JSON lines
// ---------------------------------------------------------------------------

struct Record {
  std::string type;
  std::vector<std::pair<std::string, json>> fields;
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return exi::num_str(v.get<double>());
  return v.dump();
}

void print_records(std::ostream& out, const std::vector<Record>& records,
                   bool jsonl) {
  if (jsonl) {
    for (const auto& r : records) {
      json obj;
      obj["record"] = r.type;
      for (const auto& [k, v] : r.fields) obj[k] = v;
      out << obj.dump() << '\n';
    }
    return;
  }
  std::string open_section;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.type != open_section) {
      out << "# section " << r.type << '\n';
      for (std::size_t f = 0; f < r.fields.size(); ++f)
        out << (f ? "," : "") << r.fields[f].first;
      out << '\n';
      open_section = r.type;
    }
    for (std::size_t f = 0; f < r.fields.size(); ++f)
      out << (f ? "," : "") << csv_cell(r.fields[f].second);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Shared option blocks
// ---------------------------------------------------------------------------

struct InputOpts {
  std::string path;
  std::string column = "0";
  std::string transform = "none";
  std::string tail = "none";
  std::string tail_mode = "clamp";
};

void add_input_opts(CLI::App* cmd, InputOpts& in) {
  cmd->add_option("--input,-i", in.path, "CSV file to read")->required();
  cmd->add_option("--column,-c", in.column,
                  "column index (0-based) or header name");
  cmd->add_option("--transform", in.transform, "series transform")
      ->check(CLI::IsMember({"none", "log-returns", "neg-log-returns"}));
  cmd->add_option("--tail", in.tail, "tail to keep for exceedance analysis")
      ->check(CLI::IsMember({"none", "upper", "lower"}));
  cmd->add_option("--tail-mode", in.tail_mode,
                  "clamp non-tail values to 0 or drop them")
      ->check(CLI::IsMember({"clamp", "drop"}));
}

Series resolve_input(const InputOpts& in) {
  exi::ColumnSpec col;
  int idx = 0;
  const auto [p, ec] =
      std::from_chars(in.column.data(), in.column.data() + in.column.size(), idx);
  if (ec == std::errc() && p == in.column.data() + in.column.size())
    col.index = idx;
  else
    col.name = in.column;

  Series x = exi::load_csv(in.path, col);
  exi::require_finite(x, in.path);
  if (in.transform == "log-returns")
    x = exi::log_returns(x);
  else if (in.transform == "neg-log-returns")
    x = Series(-exi::log_returns(x));
  if (in.tail != "none")
    x = exi::extract_tail(
        x, in.tail == "upper" ? exi::TailSide::upper : exi::TailSide::lower,
        in.tail_mode == "clamp" ? exi::TailMode::clamp : exi::TailMode::drop);
  return x;
}

void echo_input(Record& config, const InputOpts& in) {
  config.fields.emplace_back("input", in.path);
  config.fields.emplace_back("column", in.column);
  config.fields.emplace_back("transform", in.transform);
  config.fields.emplace_back("tail", in.tail);
  config.fields.emplace_back("tail_mode", in.tail_mode);
}

struct EstimateOpts {
  std::string method = "wls";
  std::string scheme = "permutation";
  Index k = 0;
  int n_in = 1;
  int n_out = 200;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string delta = "mean";
  double kw_threshold = 0.05;
  std::string window;  // KW window "j1:j2", default 3:floor(log2 n)-2
};

void add_estimate_opts(CLI::App* cmd, EstimateOpts& est) {
  cmd->add_option("--method", est.method, "tail-index regression weights")
      ->check(CLI::IsMember({"wls", "gls"}));
  cmd->add_option("--scheme", est.scheme, "resampling scheme")
      ->check(CLI::IsMember({"permutation", "bootstrap"}));
  cmd->add_option("--k", est.k, "resample length (default: input length)");
  cmd->add_option("--n-in", est.n_in, "resamples per outer iteration");
  cmd->add_option("--n-out", est.n_out, "outer iterations");
  cmd->add_option("--seed", est.seed, "RNG seed");
  cmd->add_option("--threads", est.threads,
                  "worker threads (results do not depend on this)");
  cmd->add_option("--delta", est.delta,
                  "statistic over positive spectrum differences")
      ->check(CLI::IsMember({"mean", "median"}));
  cmd->add_option("--kw-threshold", est.kw_threshold,
                  "rank-test p-value threshold for scale selection");
  cmd->add_option("--window", est.window, "scale window tested, as j1:j2");
}

exi::ResampleConfig make_rcfg(const EstimateOpts& est) {
  exi::ResampleConfig rcfg;
  rcfg.scheme = est.scheme == "bootstrap" ? exi::ResampleScheme::bootstrap
                                          : exi::ResampleScheme::permutation;
  rcfg.k = est.k;
  rcfg.n_in = est.n_in;
  rcfg.n_out = est.n_out;
  rcfg.seed = est.seed;
  rcfg.threads = est.threads;
  rcfg.median_delta = est.delta == "median";
  return rcfg;
}

// Echo everything that affects results. Thread count intentionally not
// echoed: outputs are identical for any parallelism.
void echo_estimate(Record& config, const EstimateOpts& est) {
  config.fields.emplace_back("method", est.method);
  config.fields.emplace_back("scheme", est.scheme);
  config.fields.emplace_back("k", static_cast<std::int64_t>(est.k));
  config.fields.emplace_back("n_in", est.n_in);
  config.fields.emplace_back("n_out", est.n_out);
  config.fields.emplace_back("seed", est.seed);
  config.fields.emplace_back("delta", est.delta);
  config.fields.emplace_back("kw_threshold", est.kw_threshold);
  config.fields.emplace_back("window", est.window.empty() ? "auto" : est.window);
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  int a = 0, b = 0;
  bool ok = colon != std::string::npos;
  if (ok) {
    const char* s = text.data();
    auto r1 = std::from_chars(s, s + colon, a);
    auto r2 = std::from_chars(s + colon + 1, s + text.size(), b);
    ok = r1.ec == std::errc() && r1.ptr == s + colon && r2.ec == std::errc() &&
         r2.ptr == s + text.size();
  }
  if (!ok || a > b)
    throw std::invalid_argument("bad scale range '" + text +
                                "', expected j1:j2 with j1 <= j2");
  return {a, b};
}

int floor_log2(Index n) {
  return 63 - std::countl_zero(static_cast<std::uint64_t>(n));
}

// Window actually tested: [3, floor(log2 n)-2] clipped to the usable scales;
// the full usable range when that clip is empty.
std::pair<int, int> resolve_window(const exi::ThetaSamples& samples, Index n,
                                   const std::string& window) {
  if (!window.empty()) {
    const auto [lo, hi] = parse_range(window);
    if (samples.scale_index(lo) < 0 || samples.scale_index(hi) < 0)
      throw exi::EstimationError(
          "window " + window + " is outside the usable scales " +
          std::to_string(samples.scales.front()) + ":" +
          std::to_string(samples.scales.back()));
    return {lo, hi};
  }
  int lo = std::max(3, samples.scales.front());
  int hi = std::min(floor_log2(n) - 2, samples.scales.back());
  if (lo > hi) {
    lo = samples.scales.front();
    hi = samples.scales.back();
  }
  return {lo, hi};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw exi::DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw exi::DataError("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateCmd {
  InputOpts in;
  EstimateOpts est;
  std::string scales;  // fixed pooling range "j1:j2"; empty = auto
  double level = 0.95;
  std::string out_dir;
  bool jsonl = false;
};

int cmd_estimate(const EstimateCmd& opt) {
  const Series x = resolve_input(opt.in);
  const exi::ResampleConfig rcfg = make_rcfg(opt.est);
  const exi::SlopeMethod method = opt.est.method == "gls"
                                      ? exi::SlopeMethod::gls
                                      : exi::SlopeMethod::wls;

  std::vector<Record> records;
  Record config{"config", {}};
  config.fields.emplace_back("command", "estimate");
  config.fields.emplace_back("version", exi::kVersion);
  echo_input(config, opt.in);
  echo_estimate(config, opt.est);
  config.fields.emplace_back("scales", opt.scales.empty() ? "auto" : opt.scales);
  config.fields.emplace_back("level", opt.level);
  config.fields.emplace_back("n", static_cast<std::int64_t>(x.size()));
  records.push_back(config);

  const exi::ThetaSamples samples = exi::algorithm1(x, rcfg, method);

  for (std::size_t s = 0; s < samples.scales.size(); ++s)
    records.push_back(
        {"alpha",
         {{"scale", samples.scales[s]},
          {"alpha", samples.alpha[static_cast<Index>(s)]},
          {"y", samples.y[static_cast<Index>(s)]}}});

  for (const int j : samples.scales) {
    auto col = samples.column(j);
    std::sort(col.begin(), col.end());
    records.push_back({"boxplot",
                       {{"scale", j},
                        {"q05", exi::quantile_sorted(col, 0.05)},
                        {"q25", exi::quantile_sorted(col, 0.25)},
                        {"median", exi::quantile_sorted(col, 0.5)},
                        {"q75", exi::quantile_sorted(col, 0.75)},
                        {"q95", exi::quantile_sorted(col, 0.95)}}});
  }

  // Pooling range: fixed, or rank-test selection over the window.
  exi::ScaleRange sel{};
  std::optional<exi::PValueMatrix> pmatrix;
  std::string sel_method;
  if (!opt.scales.empty()) {
    const auto [lo, hi] = parse_range(opt.scales);
    if (samples.scale_index(lo) < 0 || samples.scale_index(hi) < 0)
      throw exi::EstimationError(
          "requested scales " + opt.scales + " outside the usable scales " +
          std::to_string(samples.scales.front()) + ":" +
          std::to_string(samples.scales.back()));
    sel = {lo, hi, false};
    sel_method = "fixed";
  } else {
    const auto [wlo, whi] = resolve_window(samples, x.size(), opt.est.window);
    if (wlo < whi) {
      pmatrix = exi::pvalue_matrix(samples, wlo, whi);
      sel = exi::select_range(*pmatrix, opt.est.kw_threshold);
      sel_method = sel.fallback ? "auto-fallback" : "auto";
      if (sel.fallback) {
        records.push_back(
            {"warning",
             {{"message",
               "no scale range passed the rank test; falling back to the "
               "middle of the window - inspect the p-value matrix"}}});
        std::cerr << "warning: no scale range passed the rank test at "
                     "threshold "
                  << exi::num_str(opt.est.kw_threshold)
                  << "; using middle scale " << sel.j_lo << "\n";
      }
    } else {
      sel = {wlo, whi, false};
      sel_method = "window-degenerate";
      records.push_back(
          {"warning",
           {{"message", "scale window has a single scale; rank test skipped"}}});
    }
  }

  const double theta = exi::point_estimate(samples, sel.j_lo, sel.j_hi);
  records.push_back({"selection",
                     {{"j_lo", sel.j_lo},
                      {"j_hi", sel.j_hi},
                      {"method", sel_method},
                      {"pooled_median", theta}}});
  records.push_back({"estimate", {{"theta", theta}}});

  const auto pooled = samples.pooled(sel.j_lo, sel.j_hi);
  const Index blocks = x.size() >> sel.j_lo;
  const auto ci_n = exi::ci_normal(
      theta, blocks, opt.level,
      "scale " + std::to_string(sel.j_lo) + "; n_j=" + std::to_string(blocks));
  const auto ci_q = exi::ci_quantile(
      pooled, opt.level,
      "scales " + std::to_string(sel.j_lo) + ".." + std::to_string(sel.j_hi) +
          "; " + std::to_string(pooled.size()) + " samples");
  for (const auto& ci : {ci_n, ci_q})
    records.push_back(
        {"ci",
         {{"kind", ci.kind == exi::CiKind::normal ? "normal" : "quantile"},
          {"level", ci.level},
          {"lo", ci.lo},
          {"hi", ci.hi},
          {"provenance", ci.provenance}}});

  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    const auto path = [&](const char* name) {
      return (std::filesystem::path(opt.out_dir) / name).string();
    };
    write_text_file(path("spectrum.csv"), exi::spectrum_csv(exi::max_spectrum(x)));
    write_text_file(path("theta_samples.csv"), exi::theta_csv(samples));
    write_text_file(path("boxplot.csv"), exi::boxplot_csv(samples));
    if (pmatrix) {
      write_text_file(path("pvalues.csv"), exi::heatmap_csv(*pmatrix));
      write_text_file(path("pvalues_mask.csv"),
                      exi::heatmap_mask_csv(*pmatrix, opt.est.kw_threshold));
    }
    records.push_back({"output", {{"dir", opt.out_dir}}});
  }

  print_records(std::cout, records, opt.jsonl);
  return 0;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumCmd {
  InputOpts in;
  bool jsonl = false;
};

int cmd_spectrum(const SpectrumCmd& opt) {
  const Series x = resolve_input(opt.in);
  const exi::MaxSpectrum spec = exi::max_spectrum(x);
  std::vector<Record> records;
  Record config{"config", {}};
  config.fields.emplace_back("command", "spectrum");
  config.fields.emplace_back("version", exi::kVersion);
  echo_input(config, opt.in);
  config.fields.emplace_back("n", static_cast<std::int64_t>(x.size()));
  records.push_back(config);
  for (int j = 1; j <= spec.num_scales(); ++j) {
    Record r{"spectrum", {}};
    r.fields.emplace_back("j", j);
    r.fields.emplace_back("n_j", static_cast<std::int64_t>(spec.blocks(j)));
    r.fields.emplace_back("Y_j", spec.valid(j) ? json(spec.y(j)) : json());
    r.fields.emplace_back("valid", spec.valid(j));
    records.push_back(std::move(r));
  }
  print_records(std::cout, records, opt.jsonl);
  return 0;
}

// ---------------------------------------------------------------------------
// scales
// ---------------------------------------------------------------------------

struct ScalesCmd {
  InputOpts in;
  EstimateOpts est;
  std::string out_dir;
  bool jsonl = false;
};

int cmd_scales(const ScalesCmd& opt) {
  const Series x = resolve_input(opt.in);
  const exi::SlopeMethod method = opt.est.method == "gls"
                                      ? exi::SlopeMethod::gls
                                      : exi::SlopeMethod::wls;
  std::vector<Record> records;
  Record config{"config", {}};
  config.fields.emplace_back("command", "scales");
  config.fields.emplace_back("version", exi::kVersion);
  echo_input(config, opt.in);
  echo_estimate(config, opt.est);
  config.fields.emplace_back("n", static_cast<std::int64_t>(x.size()));
  records.push_back(config);

  const exi::ThetaSamples samples =
      exi::algorithm1(x, make_rcfg(opt.est), method);
  const auto [wlo, whi] = resolve_window(samples, x.size(), opt.est.window);
  if (wlo >= whi)
    throw exi::EstimationError(
        "scale window " + std::to_string(wlo) + ":" + std::to_string(whi) +
        " is too narrow for the rank test (need 2 scales)");
  const exi::PValueMatrix m = exi::pvalue_matrix(samples, wlo, whi);
  for (int j1 = wlo; j1 < whi; ++j1)
    for (int j2 = j1 + 1; j2 <= whi; ++j2)
      records.push_back(
          {"pvalue", {{"j1", j1}, {"j2", j2}, {"p", m.at(j1, j2)}}});

  const exi::ScaleRange sel = exi::select_range(m, opt.est.kw_threshold);
  if (sel.fallback)
    records.push_back(
        {"warning",
         {{"message",
           "no scale range passed the rank test; reporting the middle of "
           "the window - inspect the p-value matrix"}}});
  records.push_back({"selection",
                     {{"j_lo", sel.j_lo},
                      {"j_hi", sel.j_hi},
                      {"method", sel.fallback ? "auto-fallback" : "auto"},
                      {"pooled_median",
                       exi::point_estimate(samples, sel.j_lo, sel.j_hi)}}});

  if (!opt.out_dir.empty()) {
    std::filesystem::create_directories(opt.out_dir);
    const auto path = [&](const char* name) {
      return (std::filesystem::path(opt.out_dir) / name).string();
    };
    write_text_file(path("pvalues.csv"), exi::heatmap_csv(m));
    write_text_file(path("pvalues_mask.csv"),
                    exi::heatmap_mask_csv(m, opt.est.kw_threshold));
    records.push_back({"output", {{"dir", opt.out_dir}}});
  }
  print_records(std::cout, records, opt.jsonl);
  return 0;
}

// ---------------------------------------------------------------------------
// competitors
// ---------------------------------------------------------------------------

struct CompetitorsCmd {
  InputOpts in;
  std::string estimator = "both";
  std::vector<int> r_values = {1, 5, 9};
  std::string quantiles;  // "from:to:step"
  bool jsonl = false;
};

int cmd_competitors(const CompetitorsCmd& opt) {
  const Series x = resolve_input(opt.in);
  exi::EstimatorSpec spec;
  spec.runs = opt.estimator != "ferro-segers";
  spec.ferro_segers = opt.estimator != "runs";
  spec.r_values = opt.r_values;

  std::vector<double> grid;
  if (opt.quantiles.empty()) {
    grid = exi::default_quantile_grid();
  } else {
    double from = 0, to = 0, step = 0;
    const auto c1 = opt.quantiles.find(':');
    const auto c2 = opt.quantiles.find(':', c1 + 1);
    bool ok = c1 != std::string::npos && c2 != std::string::npos;
    if (ok) {
      try {
        from = std::stod(opt.quantiles.substr(0, c1));
        to = std::stod(opt.quantiles.substr(c1 + 1, c2 - c1 - 1));
        step = std::stod(opt.quantiles.substr(c2 + 1));
      } catch (...) {
        ok = false;
      }
    }
    if (!ok || !(step > 0.0) || from > to)
      throw std::invalid_argument("bad quantile grid '" + opt.quantiles +
                                  "', expected from:to:step");
    for (double q = from; q <= to + 1e-12; q += step) grid.push_back(q);
  }

  std::vector<Record> records;
  Record config{"config", {}};
  config.fields.emplace_back("command", "competitors");
  config.fields.emplace_back("version", exi::kVersion);
  echo_input(config, opt.in);
  config.fields.emplace_back("estimator", opt.estimator);
  {
    std::ostringstream rs;
    for (std::size_t i = 0; i < opt.r_values.size(); ++i)
      rs << (i ? "," : "") << opt.r_values[i];
    config.fields.emplace_back("r", rs.str());
  }
  config.fields.emplace_back("quantiles",
                             opt.quantiles.empty() ? "0.9:0.995:0.005"
                                                   : opt.quantiles);
  config.fields.emplace_back("n", static_cast<std::int64_t>(x.size()));
  records.push_back(config);

  for (const auto& row : exi::threshold_sweep(x, grid, spec))
    records.push_back({"sweep",
                       {{"quantile", row.quantile},
                        {"threshold", row.threshold},
                        {"estimator", row.estimator},
                        {"parameter", row.parameter},
                        {"estimate", row.error.empty() ? json(row.estimate)
                                                       : json()},
                        {"error", row.error}}});
  print_records(std::cout, records, opt.jsonl);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateCmd {
  std::string family;
  double b = 0.5;
  double alpha = 1.0;
  std::vector<double> psi;
  std::vector<double> a;
  std::string innovation = "frechet";
  double param = 1.0;
  Index n = 0;
  std::uint64_t seed = 0;
  Index burn_in = 1000;
  std::string out;
};

int cmd_simulate(const SimulateCmd& opt) {
  exi::InnovationSpec innov;
  if (opt.innovation == "frechet")
    innov.kind = exi::Innovation::frechet;
  else if (opt.innovation == "pareto")
    innov.kind = exi::Innovation::pareto;
  else
    innov.kind = exi::Innovation::student_t;
  innov.param = opt.param;

  exi::ProcessSpec spec;
  if (opt.family == "armax") {
    spec = exi::ProcessSpec::armax(opt.b, opt.alpha, opt.burn_in);
  } else if (opt.family == "linear") {
    if (opt.psi.empty())
      throw std::invalid_argument("linear process needs --psi");
    spec = exi::ProcessSpec::linear(opt.psi, innov);
  } else {
    if (opt.a.empty())
      throw std::invalid_argument("moving-max process needs --a");
    spec = exi::ProcessSpec::moving_max(opt.a, innov);
  }
  const Series x = exi::gen_process(spec, opt.n, opt.seed);

  std::ostringstream head;
  head << "process=" << spec.label() << " n=" << opt.n << " seed=" << opt.seed;
  if (opt.family == "armax") head << " burn_in=" << opt.burn_in;
  head << " theta=";
  try {
    head << exi::num_str(exi::theoretical_theta(spec));
  } catch (const std::invalid_argument&) {
    head << "undefined";
  }

  if (opt.out.empty()) {
    std::cout << "# " << head.str() << "\n";
    for (Index i = 0; i < x.size(); ++i) std::cout << exi::num_str(x[i]) << "\n";
  } else {
    exi::write_csv(opt.out, x, "", head.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchCmd {
  std::string config_path;
  std::string study = "rmse";
  std::string out_dir;
  std::optional<int> replicates;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool jsonl = false;
};

int cmd_bench(const BenchCmd& opt) {
  exi::StudyConfig cfg = exi::parse_study_config(opt.config_path);
  if (opt.replicates) cfg.replicates = *opt.replicates;
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.seed) cfg.seed = *opt.seed;
  cfg.validate();

  std::vector<Record> records;
  Record config{"config", {}};
  config.fields.emplace_back("command", "bench");
  config.fields.emplace_back("version", exi::kVersion);
  config.fields.emplace_back("config_file", opt.config_path);
  config.fields.emplace_back("study", opt.study);
  config.fields.emplace_back("replicates", cfg.replicates);
  config.fields.emplace_back("n_in", cfg.n_in);
  config.fields.emplace_back("n_out", cfg.n_out);
  config.fields.emplace_back("seed", cfg.seed);
  config.fields.emplace_back(
      "scheme", cfg.scheme == exi::ResampleScheme::permutation ? "permutation"
                                                               : "bootstrap");
  records.push_back(config);

  std::filesystem::create_directories(opt.out_dir);
  const std::string out_path =
      (std::filesystem::path(opt.out_dir) / (opt.study + ".csv")).string();

  if (opt.study == "coverage") {
    write_text_file(out_path, exi::coverage_csv(exi::run_coverage_study(cfg)));
  } else {
    const auto rows = (opt.study == "rmse") ? exi::run_rmse_study(cfg)
                                            : exi::run_autoselect_study(cfg);
    write_text_file(out_path, exi::tuning_csv(rows));
    for (const auto& r : rows)
      if (r.best || r.tuning == "auto")
        records.push_back({"result",
                           {{"process", r.process},
                            {"theta", r.theta_true},
                            {"estimator", r.estimator},
                            {"tuning", r.tuning},
                            {"rmse", r.rmse},
                            {"median", r.median_est},
                            {"sd", r.sd}}});
  }
  records.push_back({"output", {{"path", out_path}}});
  print_records(std::cout, records, opt.jsonl);
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// main
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"extremal index estimation for heavy-tailed time series"};
  app.set_version_flag("--version", std::string("exi ") + exi::kVersion);
  app.require_subcommand(1);

  EstimateCmd est_cmd;
  auto* est = app.add_subcommand(
      "estimate", "resampling estimate with scale selection and intervals");
  add_input_opts(est, est_cmd.in);
  add_estimate_opts(est, est_cmd.est);
  est->add_option("--scales", est_cmd.scales,
                  "fixed pooling range j1:j2 (skips automatic selection)");
  est->add_option("--level", est_cmd.level, "confidence level");
  est->add_option("--out-dir", est_cmd.out_dir,
                  "directory for spectrum/theta/boxplot/p-value files");
  est->add_flag("--jsonl", est_cmd.jsonl, "JSON lines instead of CSV");

  SpectrumCmd spec_cmd;
  auto* spec = app.add_subcommand("spectrum", "per-scale max-spectrum table");
  add_input_opts(spec, spec_cmd.in);
  spec->add_flag("--jsonl", spec_cmd.jsonl, "JSON lines instead of CSV");

  ScalesCmd scales_cmd;
  auto* scales = app.add_subcommand(
      "scales", "rank-test p-value matrix and scale-range selection");
  add_input_opts(scales, scales_cmd.in);
  add_estimate_opts(scales, scales_cmd.est);
  scales->add_option("--out-dir", scales_cmd.out_dir,
                     "directory for heat-map CSV files");
  scales->add_flag("--jsonl", scales_cmd.jsonl, "JSON lines instead of CSV");

  CompetitorsCmd comp_cmd;
  auto* comp = app.add_subcommand(
      "competitors", "runs and inter-exceedance estimates over thresholds");
  add_input_opts(comp, comp_cmd.in);
  comp->add_option("--estimator", comp_cmd.estimator, "which estimators")
      ->check(CLI::IsMember({"both", "runs", "ferro-segers"}));
  comp->add_option("--r", comp_cmd.r_values, "runs lengths r");
  comp->add_option("--quantiles", comp_cmd.quantiles,
                   "threshold quantile grid from:to:step");
  comp->add_flag("--jsonl", comp_cmd.jsonl, "JSON lines instead of CSV");

  SimulateCmd sim_cmd;
  auto* sim = app.add_subcommand("simulate",
                                 "simulate a process with known extremal index");
  sim->add_option("--family", sim_cmd.family, "process family")
      ->required()
      ->check(CLI::IsMember({"armax", "linear", "moving-max"}));
  sim->add_option("--b", sim_cmd.b, "armax memory parameter");
  sim->add_option("--alpha", sim_cmd.alpha, "armax Frechet shape");
  sim->add_option("--psi", sim_cmd.psi, "linear coefficients");
  sim->add_option("--a", sim_cmd.a, "moving-max coefficients");
  sim->add_option("--innovation", sim_cmd.innovation, "innovation family")
      ->check(CLI::IsMember({"frechet", "pareto", "t"}));
  sim->add_option("--param", sim_cmd.param, "innovation tail parameter");
  sim->add_option("--n", sim_cmd.n, "observations to emit")->required();
  sim->add_option("--seed", sim_cmd.seed, "RNG seed");
  sim->add_option("--burn-in", sim_cmd.burn_in, "armax warm-up steps");
  sim->add_option("--out,-o", sim_cmd.out, "output file (default stdout)");

  BenchCmd bench_cmd;
  auto* bench = app.add_subcommand("bench", "config-driven Monte Carlo study");
  bench->add_option("--config", bench_cmd.config_path, "JSON study config")
      ->required();
  bench->add_option("--study", bench_cmd.study, "which study to run")
      ->check(CLI::IsMember({"rmse", "autoselect", "coverage"}));
  bench->add_option("--out-dir", bench_cmd.out_dir, "output directory")
      ->required();
  bench->add_option("--replicates", bench_cmd.replicates,
                    "override replicate count");
  bench->add_option("--threads", bench_cmd.threads, "override worker threads");
  bench->add_option("--seed", bench_cmd.seed, "override master seed");
  bench->add_flag("--jsonl", bench_cmd.jsonl, "JSON lines instead of CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (est->parsed()) return cmd_estimate(est_cmd);
    if (spec->parsed()) return cmd_spectrum(spec_cmd);
    if (scales->parsed()) return cmd_scales(scales_cmd);
    if (comp->parsed()) return cmd_competitors(comp_cmd);
    if (sim->parsed()) return cmd_simulate(sim_cmd);
    if (bench->parsed()) return cmd_bench(bench_cmd);
  } catch (const exi::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const exi::EstimationError& e) {
    std::cerr << "estimation error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
