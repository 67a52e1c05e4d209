#include "exi/bench.hpp"

#include "exi/competitors.hpp"
#include "exi/core.hpp"
#include "exi/parallel.hpp"
#include "exi/rng.hpp"
#include "exi/scaleselect.hpp"
#include "exi/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace exi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int floor_log2(Index n) {
  return 63 - std::countl_zero(static_cast<std::uint64_t>(n));
}

std::string method_label(SlopeMethod m) {
  return m == SlopeMethod::wls ? "maxspec-wls" : "maxspec-gls";
}

// Moments of the defined entries, in index order (bitwise reproducible).
TuningResult summarize(const std::string& process, double theta,
                       const std::string& estimator, const std::string& tuning,
                       std::span<const double> estimates) {
  TuningResult row;
  row.process = process;
  row.theta_true = theta;
  row.estimator = estimator;
  row.tuning = tuning;
  std::vector<double> vals;
  vals.reserve(estimates.size());
  for (const double e : estimates)
    if (!std::isnan(e)) vals.push_back(e);
  row.used = static_cast<int>(vals.size());
  if (vals.empty()) {
    row.rmse = row.bias = row.variance = row.median_est = row.sd = kNaN;
    return row;
  }
  double sq = 0.0;
  for (const double e : vals) sq += (e - theta) * (e - theta);
  sq /= static_cast<double>(vals.size());
  row.rmse = std::sqrt(sq);
  row.bias = mean(vals) - theta;
  row.variance = variance(vals);
  row.sd = std::sqrt(row.variance);
  row.median_est = median(vals);
  return row;
}

void mark_best(std::vector<TuningResult>& rows, std::size_t from) {
  // Within [from, end) rows share an estimator family per `estimator` value.
  for (std::size_t i = from; i < rows.size(); ++i) {
    if (rows[i].used == 0 || rows[i].tuning == "auto") continue;
    bool best = true;
    for (std::size_t k = from; k < rows.size(); ++k) {
      if (k == i || rows[k].estimator != rows[i].estimator) continue;
      if (rows[k].used > 0 && rows[k].tuning != "auto" &&
          rows[k].rmse < rows[i].rmse)
        best = false;
    }
    rows[i].best = best;
  }
}

ResampleConfig replicate_rcfg(const StudyConfig& cfg, std::uint64_t seed) {
  ResampleConfig rcfg;
  rcfg.scheme = cfg.scheme;
  rcfg.n_in = cfg.n_in;
  rcfg.n_out = cfg.n_out;
  rcfg.seed = seed;
  rcfg.threads = 1;  // parallelism lives at the replicate level
  return rcfg;
}

std::uint64_t replicate_seed(const StudyConfig& cfg, std::size_t process_idx,
                             std::size_t replicate_idx) {
  return fold_in(fold_in(cfg.seed, process_idx), replicate_idx);
}

}  // namespace

void StudyConfig::validate() const {
  if (processes.empty())
    throw std::invalid_argument("study: no processes configured");
  for (const auto& p : processes) {
    p.spec.validate();
    if (p.n < 8) throw std::invalid_argument("study: need n >= 8 per process");
  }
  if (replicates < 1) throw std::invalid_argument("study: need replicates >= 1");
  if (n_in < 1 || n_out < 1)
    throw std::invalid_argument("study: need n_in >= 1 and n_out >= 1");
  if (methods.empty()) throw std::invalid_argument("study: no slope methods");
  for (const int r : runs_r)
    if (r < 1) throw std::invalid_argument("study: runs r must be >= 1");
  for (const double q : quantiles)
    if (!(q > 0.0) || !(q < 1.0))
      throw std::invalid_argument("study: quantiles must be in (0, 1)");
  if (!(kw_threshold >= 0.0) || !(kw_threshold <= 1.0))
    throw std::invalid_argument("study: kw_threshold must be in [0, 1]");
  if (coverage_scale_lo < 1 || coverage_scale_hi < coverage_scale_lo)
    throw std::invalid_argument("study: bad coverage scale range");
  for (const double l : levels)
    if (!(l > 0.0) || !(l < 1.0))
      throw std::invalid_argument("study: levels must be in (0, 1)");
}

void StudyConfig::apply_preset(const std::string& name) {
  if (name == "desk") {
    replicates = 100;
    n_out = 100;
    n_in = 5;
  } else if (name == "paper") {
    replicates = 500;
    n_out = 500;
    n_in = 25;
  } else {
    throw std::invalid_argument("study: unknown preset '" + name + "'");
  }
}

// ---------------------------------------------------------------------------
// Study drivers
// ---------------------------------------------------------------------------

std::vector<TuningResult> run_rmse_study(const StudyConfig& cfg) {
  cfg.validate();
  std::vector<TuningResult> rows;
  const std::vector<double> qgrid =
      cfg.quantiles.empty() ? default_quantile_grid() : cfg.quantiles;

  for (std::size_t pi = 0; pi < cfg.processes.size(); ++pi) {
    const auto& proc = cfg.processes[pi];
    const double theta = theoretical_theta(proc.spec);
    const int n_scales = floor_log2(proc.n);
    const auto reps = static_cast<std::size_t>(cfg.replicates);
    const std::size_t nq = qgrid.size();
    const std::size_t nr = cfg.runs_r.size();

    // Replicate-indexed slots; NaN marks "estimator undefined here".
    std::vector<Matrix> scale_est(cfg.methods.size());
    for (auto& m : scale_est)
      m = Matrix::Constant(cfg.replicates, n_scales, kNaN);
    Matrix fs_est = Matrix::Constant(cfg.replicates,
                                     cfg.with_ferro_segers ? nq : 0, kNaN);
    std::vector<double> runs_est(
        cfg.with_runs ? reps * nq * nr : 0, kNaN);

    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const std::uint64_t base = replicate_seed(cfg, pi, r);
      const Series path = gen_process(proc.spec, proc.n, fold_in(base, 0));
      try {
        const auto samples =
            algorithm1_multi(path, replicate_rcfg(cfg, fold_in(base, 1)),
                             cfg.methods);
        for (std::size_t m = 0; m < samples.size(); ++m)
          for (const int j : samples[m].scales)
            scale_est[m](static_cast<Index>(r), j - 1) =
                median(samples[m].column(j));
      } catch (const EstimationError&) {
        // Replicate contributes nothing at any scale (slots stay NaN).
      }

      if (cfg.with_runs || cfg.with_ferro_segers) {
        std::vector<double> sorted(path.data(), path.data() + path.size());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t qi = 0; qi < nq; ++qi) {
          const double u = quantile_sorted(sorted, qgrid[qi]);
          if (cfg.with_runs)
            for (std::size_t ri = 0; ri < nr; ++ri) {
              try {
                runs_est[(r * nq + qi) * nr + ri] =
                    runs_estimator(path, u, cfg.runs_r[ri]);
              } catch (const EstimationError&) {
              }
            }
          if (cfg.with_ferro_segers) {
            try {
              fs_est(static_cast<Index>(r), static_cast<Index>(qi)) =
                  ferro_segers(path, u);
            } catch (const EstimationError&) {
            }
          }
        }
      }
    });

    const std::size_t first_row = rows.size();
    for (std::size_t m = 0; m < cfg.methods.size(); ++m)
      for (int j = 1; j <= n_scales; ++j) {
        const Vector col = scale_est[m].col(j - 1);
        const auto row = summarize(
            proc.spec.label(), theta, method_label(cfg.methods[m]),
            "scale=" + std::to_string(j), {col.data(), static_cast<std::size_t>(col.size())});
        if (row.used > 0) rows.push_back(row);
      }
    if (cfg.with_runs)
      for (std::size_t ri = 0; ri < nr; ++ri)
        for (std::size_t qi = 0; qi < nq; ++qi) {
          std::vector<double> col(reps);
          for (std::size_t r = 0; r < reps; ++r)
            col[r] = runs_est[(r * nq + qi) * nr + ri];
          rows.push_back(summarize(proc.spec.label(), theta,
                                   "runs-r" + std::to_string(cfg.runs_r[ri]),
                                   "q=" + num_str(qgrid[qi]), col));
        }
    if (cfg.with_ferro_segers)
      for (std::size_t qi = 0; qi < nq; ++qi) {
        const Vector col = fs_est.col(static_cast<Index>(qi));
        rows.push_back(summarize(proc.spec.label(), theta, "ferro-segers",
                                 "q=" + num_str(qgrid[qi]),
                                 {col.data(), static_cast<std::size_t>(col.size())}));
      }
    mark_best(rows, first_row);
  }
  return rows;
}

std::vector<TuningResult> run_autoselect_study(const StudyConfig& cfg) {
  cfg.validate();
  std::vector<TuningResult> rows;
  const SlopeMethod method = cfg.methods.front();

  for (std::size_t pi = 0; pi < cfg.processes.size(); ++pi) {
    const auto& proc = cfg.processes[pi];
    const double theta = theoretical_theta(proc.spec);
    const int n_scales = floor_log2(proc.n);
    const auto reps = static_cast<std::size_t>(cfg.replicates);

    Matrix scale_est = Matrix::Constant(cfg.replicates, n_scales, kNaN);
    std::vector<double> auto_est(reps, kNaN);

    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const std::uint64_t base = replicate_seed(cfg, pi, r);
      const Series path = gen_process(proc.spec, proc.n, fold_in(base, 0));
      try {
        const ThetaSamples samples =
            algorithm1(path, replicate_rcfg(cfg, fold_in(base, 1)), method);
        for (const int j : samples.scales)
          scale_est(static_cast<Index>(r), j - 1) = median(samples.column(j));

        // Tested window: 3 .. floor(log2 n) - 2, clipped to the usable scales.
        const int lo = std::max(3, samples.scales.front());
        const int hi = std::min(n_scales - 2, samples.scales.back());
        if (lo < hi) {
          const ScaleRange sel =
              select_range(pvalue_matrix(samples, lo, hi), cfg.kw_threshold);
          auto_est[r] = point_estimate(samples, sel.j_lo, sel.j_hi);
        } else if (lo == hi) {
          auto_est[r] = point_estimate(samples, lo, hi);
        }
      } catch (const EstimationError&) {
        // Replicate contributes nothing (slots stay NaN).
      }
    });

    const std::size_t first_row = rows.size();
    for (int j = 1; j <= n_scales; ++j) {
      const Vector col = scale_est.col(j - 1);
      const auto row =
          summarize(proc.spec.label(), theta, method_label(method),
                    "scale=" + std::to_string(j), {col.data(), static_cast<std::size_t>(col.size())});
      if (row.used > 0) rows.push_back(row);
    }
    rows.push_back(
        summarize(proc.spec.label(), theta, method_label(method), "auto",
                  auto_est));
    mark_best(rows, first_row);
  }
  return rows;
}

std::vector<CoverageRow> run_coverage_study(const StudyConfig& cfg) {
  cfg.validate();
  std::vector<CoverageRow> rows;
  const SlopeMethod method = cfg.methods.front();
  const CiKind kinds[] = {CiKind::normal, CiKind::quantile};

  for (std::size_t pi = 0; pi < cfg.processes.size(); ++pi) {
    const auto& proc = cfg.processes[pi];
    const double theta = theoretical_theta(proc.spec);
    const auto reps = static_cast<std::size_t>(cfg.replicates);
    const int lo = cfg.coverage_scale_lo;
    const int hi = std::min(cfg.coverage_scale_hi, floor_log2(proc.n) - 2);
    if (lo > hi) continue;
    const std::size_t n_scales = static_cast<std::size_t>(hi - lo + 1);
    const std::size_t n_levels = cfg.levels.size();

    // -1 scale unavailable, else 1/0 = covered or not; [r][kind][level][scale].
    std::vector<signed char> hits(reps * 2 * n_levels * n_scales, -1);
    const auto slot = [&](std::size_t r, std::size_t k, std::size_t l,
                          std::size_t s) {
      return ((r * 2 + k) * n_levels + l) * n_scales + s;
    };

    parallel_for(reps, cfg.threads, [&](std::size_t r) {
      const std::uint64_t base = replicate_seed(cfg, pi, r);
      const Series path = gen_process(proc.spec, proc.n, fold_in(base, 0));
      ThetaSamples samples;
      try {
        samples =
            algorithm1(path, replicate_rcfg(cfg, fold_in(base, 1)), method);
      } catch (const EstimationError&) {
        return;  // replicate contributes nothing
      }
      for (int j = lo; j <= hi; ++j) {
        if (samples.scale_index(j) < 0) continue;
        const auto col = samples.column(j);
        const double est = median(col);
        const Index blocks = proc.n >> j;
        for (std::size_t l = 0; l < n_levels; ++l) {
          const auto ci_n = ci_normal(est, blocks, cfg.levels[l]);
          const auto ci_q = ci_quantile(col, cfg.levels[l]);
          const std::size_t s = static_cast<std::size_t>(j - lo);
          hits[slot(r, 0, l, s)] = (ci_n.lo <= theta && theta <= ci_n.hi);
          hits[slot(r, 1, l, s)] = (ci_q.lo <= theta && theta <= ci_q.hi);
        }
      }
    });

    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t l = 0; l < n_levels; ++l)
        for (int j = lo; j <= hi; ++j) {
          int used = 0, covered = 0;
          for (std::size_t r = 0; r < reps; ++r) {
            const signed char h =
                hits[slot(r, k, l, static_cast<std::size_t>(j - lo))];
            if (h < 0) continue;
            ++used;
            covered += h;
          }
          CoverageRow row;
          row.process = proc.spec.label();
          row.theta_true = theta;
          row.kind = kinds[k];
          row.level = cfg.levels[l];
          row.scale = j;
          row.used = used;
          row.coverage_pct =
              used ? 100.0 * covered / used : kNaN;
          rows.push_back(row);
        }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

std::string tuning_csv(const std::vector<TuningResult>& rows) {
  std::ostringstream out;
  out << "process,theta,estimator,tuning,used,rmse,bias,variance,median,sd,best\n";
  for (const auto& r : rows)
    out << r.process << ',' << num_str(r.theta_true) << ',' << r.estimator
        << ',' << r.tuning << ',' << r.used << ',' << num_str(r.rmse) << ','
        << num_str(r.bias) << ',' << num_str(r.variance) << ','
        << num_str(r.median_est) << ',' << num_str(r.sd) << ','
        << (r.best ? 1 : 0) << '\n';
  return out.str();
}

std::string coverage_csv(const std::vector<CoverageRow>& rows) {
  std::ostringstream out;
  out << "process,theta,kind,level,scale,used,coverage_pct\n";
  for (const auto& r : rows)
    out << r.process << ',' << num_str(r.theta_true) << ','
        << (r.kind == CiKind::normal ? "normal" : "quantile") << ','
        << num_str(r.level) << ',' << r.scale << ',' << r.used << ','
        << num_str(r.coverage_pct) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// JSON configuration
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + key + "' in " +
                                  where);
  }
}

InnovationSpec parse_innovation(const json& obj, const std::string& where) {
  InnovationSpec spec;
  const std::string kind = obj.value("innovation", "frechet");
  if (kind == "frechet")
    spec.kind = Innovation::frechet;
  else if (kind == "pareto")
    spec.kind = Innovation::pareto;
  else if (kind == "t")
    spec.kind = Innovation::student_t;
  else
    throw std::invalid_argument("config: unknown innovation '" + kind +
                                "' in " + where);
  spec.param = obj.value("param", 1.0);
  return spec;
}

ProcessEntry parse_process(const json& obj) {
  if (!obj.is_object() || !obj.contains("family"))
    throw std::invalid_argument("config: each process needs a 'family'");
  const std::string family = obj.at("family");
  ProcessEntry entry;
  if (family == "armax") {
    check_keys(obj, {"family", "b", "alpha", "burn_in", "n"}, "armax process");
    entry.spec = ProcessSpec::armax(obj.value("b", 0.0), obj.value("alpha", 1.0),
                                    obj.value("burn_in", Index{1000}));
  } else if (family == "linear") {
    check_keys(obj, {"family", "psi", "innovation", "param", "n"},
               "linear process");
    entry.spec = ProcessSpec::linear(
        obj.value("psi", std::vector<double>{}),
        parse_innovation(obj, "linear process"));
  } else if (family == "moving-max") {
    check_keys(obj, {"family", "a", "innovation", "param", "n"},
               "moving-max process");
    entry.spec = ProcessSpec::moving_max(
        obj.value("a", std::vector<double>{}),
        parse_innovation(obj, "moving-max process"));
  } else {
    throw std::invalid_argument("config: unknown family '" + family + "'");
  }
  entry.n = obj.value("n", Index{8192});
  return entry;
}

}  // namespace

StudyConfig parse_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
  if (!root.is_object())
    throw std::invalid_argument("config: top level must be an object");
  check_keys(root,
             {"preset", "replicates", "n_in", "n_out", "seed", "threads",
              "scheme", "methods", "processes", "competitors", "autoselect",
              "coverage"},
             "top level");

  StudyConfig cfg;
  if (root.contains("preset")) cfg.apply_preset(root.at("preset"));
  cfg.replicates = root.value("replicates", cfg.replicates);
  cfg.n_in = root.value("n_in", cfg.n_in);
  cfg.n_out = root.value("n_out", cfg.n_out);
  cfg.seed = root.value("seed", cfg.seed);
  cfg.threads = root.value("threads", cfg.threads);

  const std::string scheme = root.value("scheme", "permutation");
  if (scheme == "permutation")
    cfg.scheme = ResampleScheme::permutation;
  else if (scheme == "bootstrap")
    cfg.scheme = ResampleScheme::bootstrap;
  else
    throw std::invalid_argument("config: unknown scheme '" + scheme + "'");

  if (root.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : root.at("methods")) {
      const std::string name = m;
      if (name == "wls")
        cfg.methods.push_back(SlopeMethod::wls);
      else if (name == "gls")
        cfg.methods.push_back(SlopeMethod::gls);
      else
        throw std::invalid_argument("config: unknown method '" + name + "'");
    }
  }

  if (!root.contains("processes"))
    throw std::invalid_argument("config: 'processes' is required");
  for (const auto& p : root.at("processes"))
    cfg.processes.push_back(parse_process(p));

  if (root.contains("competitors")) {
    const json& comp = root.at("competitors");
    check_keys(comp, {"runs_r", "ferro_segers", "quantiles"}, "competitors");
    if (comp.contains("runs_r")) {
      cfg.with_runs = true;
      cfg.runs_r = comp.at("runs_r").get<std::vector<int>>();
    }
    cfg.with_ferro_segers = comp.value("ferro_segers", false);
    if (comp.contains("quantiles")) {
      const json& q = comp.at("quantiles");
      check_keys(q, {"from", "to", "step"}, "quantiles");
      const double from = q.at("from"), to = q.at("to"), step = q.at("step");
      if (!(step > 0.0) || !(from <= to))
        throw std::invalid_argument("config: bad quantile grid");
      for (double v = from; v <= to + 1e-12; v += step)
        cfg.quantiles.push_back(v);
    }
  }

  if (root.contains("autoselect")) {
    const json& a = root.at("autoselect");
    check_keys(a, {"kw_threshold"}, "autoselect");
    cfg.kw_threshold = a.value("kw_threshold", cfg.kw_threshold);
  }

  if (root.contains("coverage")) {
    const json& c = root.at("coverage");
    check_keys(c, {"scales", "levels"}, "coverage");
    if (c.contains("scales")) {
      const auto scales = c.at("scales").get<std::vector<int>>();
      if (scales.size() != 2)
        throw std::invalid_argument("config: coverage scales must be [lo, hi]");
      cfg.coverage_scale_lo = scales[0];
      cfg.coverage_scale_hi = scales[1];
    }
    if (c.contains("levels"))
      cfg.levels = c.at("levels").get<std::vector<double>>();
  }

  cfg.validate();
  return cfg;
}

}  // namespace exi
