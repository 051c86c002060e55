#pragma once

// Config-driven Monte Carlo experiments and report emission.
//
// Seeding: replicate r draws its error innovations from split_seed(seed, r, 1)
// and its predictors from split_seed(seed, r, 2). The same streams are reused
// for every d and h, so differences across the ladder are not masked by
// independent sampling noise. Rate studies add the sample size first:
// split_seed(split_seed(seed, n), r, component).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lrdreg/coefficients.hpp"
#include "lrdreg/conditions.hpp"
#include "lrdreg/config.hpp"
#include "lrdreg/csv.hpp"
#include "lrdreg/estimators.hpp"
#include "lrdreg/fft.hpp"
#include "lrdreg/numeric.hpp"
#include "lrdreg/parallel.hpp"
#include "lrdreg/processes.hpp"
#include "lrdreg/risk.hpp"
#include "lrdreg/scaling.hpp"

namespace lrdreg {

inline constexpr const char* library_version = "lrdreg 1.0.0";

enum SeedComponent : std::uint64_t { errors_stream = 1, predictors_stream = 2 };

// ---------------------------------------------------------------------------
// Report

struct Provenance {
  std::string experiment_id;
  std::string verb;
  std::string version = library_version;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TableRow {
  double d = 0, h = 0, mise = 0, mise_se = 0, mise_star = 0, mise_star_se = 0, flagged_mean = 0;
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

struct CvRow {
  double d = 0, alpha = 0, cv_mean = 0, cv_se = 0;
  double h_cv_q1 = 0, h_cv_median = 0, h_cv_q3 = 0, h_ratio_median = 0;
  double ase_min_mean = 0, mean_eps_sq = 0, mise_opt = 0, h_mise_opt = 0, residual_cross_corr = 0;
  friend bool operator==(const CvRow&, const CvRow&) = default;
};

struct RateRow {
  std::string estimator;  // "nw" or "shape"
  double alpha = 0;
  std::size_t n = 0;
  double h_min = 0, mise_min = 0, mise_se = 0;
  friend bool operator==(const RateRow&, const RateRow&) = default;
};

struct RateFit {
  std::string estimator;
  double alpha = 0, slope = 0, slope_se = 0, target = 0;
  friend bool operator==(const RateFit&, const RateFit&) = default;
};

struct RiskRow {
  double d = 0, h = 0, ase = 0, ise = 0, cv = 0, mise_theory = 0, mise_star_theory = 0;
  friend bool operator==(const RiskRow&, const RiskRow&) = default;
};

struct ConditionRow {
  std::string id;
  double d = 0, n = 0, statistic = 0, exponent = 0;
  std::string verdict;
  double tolerance = 0;
  friend bool operator==(const ConditionRow&, const ConditionRow&) = default;
};

struct SampleRow {
  std::size_t index = 0;
  double x = 0, y = 0, eps = 0;
  friend bool operator==(const SampleRow&, const SampleRow&) = default;
};

struct EstimateRow {
  double h = 0, x = 0, nw = 0, shape = 0;
  int flagged = 0;
  friend bool operator==(const EstimateRow&, const EstimateRow&) = default;
};

struct ExperimentReport {
  Provenance provenance;
  std::vector<TableRow> table;
  std::vector<CvRow> cv;
  std::vector<RateRow> rates;
  std::vector<RateFit> rate_fits;
  std::vector<RiskRow> risk;
  std::vector<ConditionRow> conditions;
  std::vector<SampleRow> sample;
  std::vector<EstimateRow> estimates;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// ---------------------------------------------------------------------------
// Sample generation

/// Filters at least this long are applied by FFT convolution.
inline constexpr std::size_t fft_filter_threshold = 16384;

/// Error model for one memory parameter d, with coefficients computed once.
class ErrorModel {
 public:
  ErrorModel(const ExperimentConfig& c, double d, std::size_t n) : d_(d), n_(n), law_(c.innovation) {
    require(n >= 2, ErrorCategory::config, "sample size must be at least 2");
    if (c.error_family == ProcessFamily::iid || d == 0.0) return;
    ProcessSpec s = ProcessSpec::with_d(c.error_family, d, {c.innovation, 0});
    s.truncation_K = c.truncation;
    s.burn_in = c.burn_in;
    s = s.resolved(n);
    validate(s);
    coeffs_ = linear_coefficients(s);
    if (c.error_scaling == ErrorScaling::unit_marginal) {
      const double scale = 1.0 / std::sqrt(coeffs_->sum_of_squares());
      for (double& v : coeffs_->values) v *= scale;
    }
    if (coeffs_->truncation() >= fft_filter_threshold) fft_ = std::make_shared<const FftFilter>(coeffs_->values, n);
  }

  std::vector<double> draw(std::uint64_t seed) const {
    const InnovationSpec innov{law_, seed};
    if (!coeffs_) return draw_innovations(innov, n_);
    const std::size_t K = coeffs_->truncation();
    const auto eta = draw_innovations_from(innov, -static_cast<std::int64_t>(K), n_ + K);
    return fft_ ? fft_->apply(eta) : filter_linear(coeffs_->values, eta, n_);
  }

  double alpha() const { return 1.0 - 2.0 * d_; }
  const std::optional<CoefficientSequence>& coeffs() const { return coeffs_; }

 private:
  double d_;
  std::size_t n_;
  InnovationLaw law_;
  std::optional<CoefficientSequence> coeffs_;
  std::shared_ptr<const FftFilter> fft_;
};

inline double predictor_alpha(const ExperimentConfig& c) {
  return c.predictor_mode == PredictorMode::iid_gaussian ? 1.0 : 1.0 - 2.0 * c.d_x;
}

inline std::vector<double> draw_predictors(const ExperimentConfig& c, std::size_t n, std::uint64_t seed) {
  PredictorSpec p;
  p.mode = c.predictor_mode;
  p.alpha_X = predictor_alpha(c);
  p.A0 = c.A0;
  p.innovation = {InnovationLaw::standard_gaussian, seed};
  return simulate_predictors(p, n);
}

inline RegressionSample draw_sample(const ExperimentConfig& c, const ErrorModel& errors, std::size_t n,
                                    std::uint64_t errors_seed, std::uint64_t predictors_seed) {
  auto x = draw_predictors(c, n, predictors_seed);
  auto eps = c.zero_errors ? std::vector<double>(n, 0.0) : errors.draw(errors_seed);
  return make_sample(std::move(x), std::move(eps), c.function);
}

// ---------------------------------------------------------------------------
// Shared evaluation setup

struct Evaluation {
  KernelSpec kernel;
  DesignDensity design;
  TrueFunction m;
  Region region;
  std::vector<double> grid, weight, target, shape_target;
  double m_mean = 0.0;  // int m f
};

inline Evaluation make_evaluation(const ExperimentConfig& c) {
  Evaluation e;
  e.kernel = KernelSpec::make(c.kernel);
  e.m = TrueFunction{c.function};
  const auto [lo, hi] = e.design.central_support(0.98);
  e.region = {lo, hi};
  e.grid = evaluation_grid(e.design);
  e.m_mean = simpson([&](double x) { return e.m(x) * e.design(x); }, -12.0, 12.0, 200000);
  for (double x : e.grid) {
    e.weight.push_back(e.design(x));
    e.target.push_back(e.m(x));
    e.shape_target.push_back(e.m(x) - e.m_mean);
  }
  return e;
}

inline TheoryConstants theory_for(const ExperimentConfig& c, const Evaluation& e, const ErrorModel& errors,
                                  std::size_t n) {
  TheorySetup s;
  s.m = e.m;
  s.f = e.design;
  s.region_lo = e.region.lo;
  s.region_hi = e.region.hi;
  s.error_coeffs = errors.coeffs();
  if (c.predictor_mode == PredictorMode::lrd_gaussian)
    s.predictor_coeffs = predictor_coeffs(predictor_alpha(c), c.A0, default_truncation(n));
  s.n_ref = n;
  return compute_theory_constants(s);
}

inline std::vector<double> bandwidth_grid(const ExperimentConfig& c, double center) {
  return default_h_grid(center, c.h_grid_points, c.h_grid_span);
}

namespace detail {

inline double standard_error(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  return std::sqrt(sample_variance(v) / static_cast<double>(v.size()));
}

/// Linear-interpolation quantile of the sorted values.
inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline Provenance provenance_for(const ExperimentConfig& c, std::string verb) {
  Provenance p;
  p.experiment_id = c.id;
  p.verb = std::move(verb);
  p.config_hash = config_hash(c);
  p.seed = c.seed;
  p.replicates = c.replicates;
  return p;
}

inline double column_mean(const std::vector<std::vector<double>>& rows, std::size_t col) {
  double s = 0.0;
  for (const auto& r : rows) s += r[col];
  return s / static_cast<double>(rows.size());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiments

/// Monte Carlo MISE and MISE* for every (d, h) of the config.
inline ExperimentReport run_table_experiment(const ExperimentConfig& c) {
  validate(c);
  require(!c.h_values.empty(), ErrorCategory::config, "estimator.h_values: must not be empty");
  const auto ev = make_evaluation(c);
  ExperimentReport report;
  report.provenance = detail::provenance_for(c, "table");
  const std::size_t H = c.h_values.size();

  for (double d : c.d_ladder) {
    const ErrorModel errors(c, d, c.n);
    struct Rep {
      std::vector<double> ise, ise_star, flagged;
    };
    const auto reps = parallel_map(c.replicates, c.workers, [&](std::size_t r) {
      const auto sample = draw_sample(c, errors, c.n, split_seed(c.seed, r, errors_stream),
                                      split_seed(c.seed, r, predictors_stream));
      const SortedSample sorted(sample);
      const double ybar = mean(sample.y);
      Rep out;
      for (double h : c.h_values) {
        const auto nw = nw_estimate(sorted, ev.kernel, h, ev.grid);
        out.ise.push_back(integrated_squared_error(nw, ev.target, ev.weight));
        out.ise_star.push_back(integrated_squared_error(shape_from_nw(nw, ybar), ev.shape_target, ev.weight));
        out.flagged.push_back(static_cast<double>(nw.flagged_count));
      }
      return out;
    });
    for (std::size_t j = 0; j < H; ++j) {
      std::vector<double> ise, ise_star;
      double flagged = 0.0;
      for (const auto& rep : reps) {
        ise.push_back(rep.ise[j]);
        ise_star.push_back(rep.ise_star[j]);
        flagged += rep.flagged[j];
      }
      report.table.push_back({d, c.h_values[j], mean(ise), detail::standard_error(ise), mean(ise_star),
                              detail::standard_error(ise_star), flagged / static_cast<double>(reps.size())});
    }
  }
  return report;
}

/// Cross-validation study: per d, the minimized CV criterion, the spread of
/// the CV bandwidth, and the CV decomposition residual against the cross term.
inline ExperimentReport run_cv_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto ev = make_evaluation(c);
  ExperimentReport report;
  report.provenance = detail::provenance_for(c, "cv");
  const double alpha_X = predictor_alpha(c);

  for (double d : c.d_ladder) {
    const ErrorModel errors(c, d, c.n);
    const double alpha = std::min(1.0, errors.alpha());
    const auto constants = theory_for(c, ev, errors, c.n);
    const double h_center = h_opt_theory(c.n, alpha, constants, ev.kernel).h;
    const auto grid = bandwidth_grid(c, h_center);
    const std::size_t mid = grid.size() / 2;
    const double mise_mid = mise_theory(grid[mid], c.n, alpha, constants, ev.kernel);

    struct Rep {
      double cv_min = 0, h_cv = 0, h_ase = 0, ase_min = 0, eps_sq = 0, residual = 0, cross = 0;
      std::vector<double> ise;
    };
    const auto reps = parallel_map(c.replicates, c.workers, [&](std::size_t r) {
      const auto sample = draw_sample(c, errors, c.n, split_seed(c.seed, r, errors_stream),
                                      split_seed(c.seed, r, predictors_stream));
      const SortedSample sorted(sample);
      std::vector<double> cvs, ases;
      Rep out;
      for (double h : grid) {
        cvs.push_back(cv_criterion(sample, sorted, ev.kernel, h, c.cv_leave_out, ev.region).value);
        ases.push_back(ase(sample, sorted, ev.kernel, h, ev.region).value);
        out.ise.push_back(integrated_squared_error(nw_estimate(sorted, ev.kernel, h, ev.grid), ev.target, ev.weight));
      }
      const auto gc = minimize_over_grid(cvs, grid);
      const auto ga = minimize_over_grid(ases, grid);
      out.cv_min = cvs[gc.index];
      out.h_cv = gc.h_min;
      out.h_ase = ga.h_min;
      out.ase_min = ases[ga.index];
      const auto dec =
          cv_decomposition_diagnostic(sample, sorted, ev.kernel, grid[mid], mise_mid, c.cv_leave_out, ev.region);
      out.eps_sq = dec.mean_eps_sq;
      out.residual = dec.residual;
      out.cross = dec.cross_term;
      return out;
    });

    std::vector<double> cv_min, h_cv, ratio, ase_min, eps_sq, residual, cross;
    std::vector<double> mise(grid.size(), 0.0);
    for (const auto& rep : reps) {
      cv_min.push_back(rep.cv_min);
      h_cv.push_back(rep.h_cv);
      ratio.push_back(rep.h_cv / rep.h_ase);
      ase_min.push_back(rep.ase_min);
      eps_sq.push_back(rep.eps_sq);
      residual.push_back(rep.residual);
      cross.push_back(rep.cross);
      for (std::size_t j = 0; j < grid.size(); ++j) mise[j] += rep.ise[j];
    }
    for (double& v : mise) v /= static_cast<double>(reps.size());
    const auto gm = minimize_over_grid(mise, grid);

    CvRow row;
    row.d = d;
    row.alpha = errors.alpha();
    row.cv_mean = mean(cv_min);
    row.cv_se = detail::standard_error(cv_min);
    row.h_cv_q1 = detail::quantile(h_cv, 0.25);
    row.h_cv_median = detail::quantile(h_cv, 0.5);
    row.h_cv_q3 = detail::quantile(h_cv, 0.75);
    row.h_ratio_median = detail::quantile(ratio, 0.5);
    row.ase_min_mean = mean(ase_min);
    row.mean_eps_sq = mean(eps_sq);
    row.mise_opt = mise[gm.index];
    row.h_mise_opt = gm.h_min;
    row.residual_cross_corr = reps.size() >= 2 ? sample_correlation(residual, cross) : 0.0;
    report.cv.push_back(row);

    // Per-bandwidth curves of the first replicate.
    RiskSettings rs;
    rs.kernel = ev.kernel;
    rs.cv_leave_out = c.cv_leave_out;
    rs.trim = ev.region;
    rs.eval_grid = ev.grid;
    rs.eval_weight = ev.weight;
    rs.alpha = alpha;
    rs.alpha_X = alpha_X;
    rs.constants = constants;
    const auto first = draw_sample(c, errors, c.n, split_seed(c.seed, 0, errors_stream),
                                   split_seed(c.seed, 0, predictors_stream));
    const auto rr = risk_report(first, rs, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
      report.risk.push_back({d, grid[j], rr.ase[j], rr.ise[j], rr.cv[j], rr.mise_theory[j], rr.mise_star_theory[j]});
  }
  return report;
}

/// Rate study: Monte Carlo MISE and MISE* minimized over an h grid at each
/// sample size, with log-log slopes against the theoretical exponents.
inline ExperimentReport run_rate_study(const ExperimentConfig& c) {
  validate(c);
  require(c.n_ladder.size() >= 4, ErrorCategory::config, "sample.n_ladder: need at least 4 sizes");
  const auto ev = make_evaluation(c);
  ExperimentReport report;
  report.provenance = detail::provenance_for(c, "rates");
  const double alpha_X = predictor_alpha(c);

  for (double d : c.d_ladder) {
    std::vector<double> ns, nw_min, star_min;
    double alpha = 1.0;
    for (std::size_t n : c.n_ladder) {
      const ErrorModel errors(c, d, n);
      alpha = std::min(1.0, errors.alpha());
      const auto constants = theory_for(c, ev, errors, n);
      const auto grid_nw = bandwidth_grid(c, h_opt_theory(n, alpha, constants, ev.kernel).h);
      const auto grid_star = bandwidth_grid(c, h_opt_star_theory(n, alpha_X, constants, ev.kernel).h);
      const std::uint64_t base = split_seed(c.seed, n);
      const auto reps = parallel_map(c.replicates, c.workers, [&](std::size_t r) {
        const auto sample = draw_sample(c, errors, n, split_seed(base, r, errors_stream),
                                        split_seed(base, r, predictors_stream));
        const SortedSample sorted(sample);
        const double ybar = mean(sample.y);
        std::vector<double> out;
        for (double h : grid_nw)
          out.push_back(integrated_squared_error(nw_estimate(sorted, ev.kernel, h, ev.grid), ev.target, ev.weight));
        for (double h : grid_star)
          out.push_back(integrated_squared_error(shape_from_nw(nw_estimate(sorted, ev.kernel, h, ev.grid), ybar),
                                                 ev.shape_target, ev.weight));
        return out;
      });
      const std::size_t G = grid_nw.size();
      auto summarize = [&](const std::string& name, const std::vector<double>& grid, std::size_t offset) {
        std::vector<double> means(G);
        for (std::size_t j = 0; j < G; ++j) means[j] = detail::column_mean(reps, offset + j);
        const auto gm = minimize_over_grid(means, grid);
        std::vector<double> at_min;
        for (const auto& rep : reps) at_min.push_back(rep[offset + gm.index]);
        report.rates.push_back({name, errors.alpha(), n, gm.h_min, means[gm.index], detail::standard_error(at_min)});
        return means[gm.index];
      };
      ns.push_back(static_cast<double>(n));
      nw_min.push_back(summarize("nw", grid_nw, 0));
      star_min.push_back(summarize("shape", grid_star, G));
    }
    const auto fit_nw = fit_log_log(ns, nw_min);
    const auto fit_star = fit_log_log(ns, star_min);
    report.rate_fits.push_back({"nw", 1.0 - 2.0 * d, fit_nw.slope, fit_nw.slope_se, -std::min(0.8, alpha)});
    report.rate_fits.push_back({"shape", 1.0 - 2.0 * d, fit_star.slope, fit_star.slope_se, -std::min(0.8, alpha_X)});
  }
  return report;
}

/// Analytic bandwidth-condition verdicts for every d, plus Monte Carlo
/// negligibility and variance-growth checks for the configured error family.
inline ExperimentReport run_conditions(const ExperimentConfig& c) {
  validate(c);
  require(c.n_ladder.size() >= 2, ErrorCategory::config, "sample.n_ladder: need at least 2 sizes");
  ExperimentReport report;
  report.provenance = detail::provenance_for(c, "conditions");
  const BandwidthRule rule{c.cond_scale, c.cond_beta};
  const double alpha_X = predictor_alpha(c);
  auto append = [&](double d, const ConditionVerdict& v) {
    for (std::size_t i = 0; i < v.n_values.size(); ++i)
      report.conditions.push_back({std::string(to_string(v.id)), d, v.n_values[i], v.statistic_values[i], v.exponent,
                                   std::string(to_string(v.verdict)), v.tolerance});
  };
  for (double d : c.d_ladder) {
    const double alpha = 1.0 - 2.0 * d;
    for (const auto& v : check_bandwidth_conditions(alpha, alpha_X, rule, c.n_ladder)) append(d, v);
    ProcessSpec spec = d == 0.0 ? ProcessSpec::with_d(ProcessFamily::iid, 0.0, {c.innovation, c.seed})
                                : ProcessSpec::with_d(c.error_family, d, {c.innovation, c.seed});
    spec.truncation_K = c.truncation;
    spec.burn_in = c.burn_in;
    append(d, check_negligibility_A(spec, c.n_ladder, rule, c.cond_reps, c.seed, c.workers));
    append(d, check_var_linear_growth(spec, c.n_ladder, c.cond_reps, c.seed, c.workers));
  }
  return report;
}

/// One sample (first d, replicate 0) and its estimates at every configured h.
inline ExperimentReport run_simulate(const ExperimentConfig& c) {
  validate(c);
  const auto ev = make_evaluation(c);
  ExperimentReport report;
  report.provenance = detail::provenance_for(c, "simulate");
  const ErrorModel errors(c, c.d_ladder.front(), c.n);
  const auto sample =
      draw_sample(c, errors, c.n, split_seed(c.seed, 0, errors_stream), split_seed(c.seed, 0, predictors_stream));
  for (std::size_t i = 0; i < sample.size(); ++i) report.sample.push_back({i, sample.x[i], sample.y[i], sample.eps[i]});
  const SortedSample sorted(sample);
  const double ybar = mean(sample.y);
  for (double h : c.h_values) {
    const auto nw = nw_estimate(sorted, ev.kernel, h, ev.grid);
    const auto star = shape_from_nw(nw, ybar);
    for (std::size_t g = 0; g < ev.grid.size(); ++g)
      report.estimates.push_back({h, ev.grid[g], nw.values[g], star.values[g], nw.flagged[g] ? 1 : 0});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Emission

namespace detail {

using csv::format;

inline std::string fmt(std::size_t v) { return std::to_string(v); }

inline csv::Table provenance_table(const Provenance& p) {
  csv::Table t{{"key", "value"}, {}};
  t.rows = {{"experiment_id", p.experiment_id},
            {"verb", p.verb},
            {"version", p.version},
            {"config_hash", std::to_string(p.config_hash)},
            {"seed", std::to_string(p.seed)},
            {"replicates", fmt(p.replicates)}};
  return t;
}

inline csv::Table table_csv(const std::vector<TableRow>& rows) {
  csv::Table t{{"d", "h", "mise", "mise_se", "mise_star", "mise_star_se", "flagged_mean"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format(r.d), format(r.h), format(r.mise), format(r.mise_se), format(r.mise_star),
                      format(r.mise_star_se), format(r.flagged_mean)});
  return t;
}

inline csv::Table cv_csv(const std::vector<CvRow>& rows) {
  csv::Table t{{"d", "alpha", "cv_mean", "cv_se", "h_cv_q1", "h_cv_median", "h_cv_q3", "h_ratio_median",
                "ase_min_mean", "mean_eps_sq", "mise_opt", "h_mise_opt", "residual_cross_corr"},
               {}};
  for (const auto& r : rows)
    t.rows.push_back({format(r.d), format(r.alpha), format(r.cv_mean), format(r.cv_se), format(r.h_cv_q1),
                      format(r.h_cv_median), format(r.h_cv_q3), format(r.h_ratio_median), format(r.ase_min_mean),
                      format(r.mean_eps_sq), format(r.mise_opt), format(r.h_mise_opt), format(r.residual_cross_corr)});
  return t;
}

inline csv::Table rates_csv(const std::vector<RateRow>& rows) {
  csv::Table t{{"estimator", "alpha", "n", "h_min", "mise_min", "mise_se"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.estimator, format(r.alpha), fmt(r.n), format(r.h_min), format(r.mise_min), format(r.mise_se)});
  return t;
}

inline csv::Table rate_fits_csv(const std::vector<RateFit>& rows) {
  csv::Table t{{"estimator", "alpha", "slope", "slope_se", "target"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.estimator, format(r.alpha), format(r.slope), format(r.slope_se), format(r.target)});
  return t;
}

inline csv::Table risk_csv(const std::vector<RiskRow>& rows) {
  csv::Table t{{"d", "h", "ase", "ise", "cv", "mise_theory", "mise_star_theory"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format(r.d), format(r.h), format(r.ase), format(r.ise), format(r.cv), format(r.mise_theory),
                      format(r.mise_star_theory)});
  return t;
}

inline csv::Table conditions_csv(const std::vector<ConditionRow>& rows) {
  csv::Table t{{"id", "d", "n", "statistic", "exponent", "verdict", "tolerance"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.id, format(r.d), format(r.n), format(r.statistic), format(r.exponent), r.verdict,
                      format(r.tolerance)});
  return t;
}

inline csv::Table sample_csv(const std::vector<SampleRow>& rows) {
  csv::Table t{{"index", "x", "y", "eps"}, {}};
  for (const auto& r : rows) t.rows.push_back({fmt(r.index), format(r.x), format(r.y), format(r.eps)});
  return t;
}

inline csv::Table estimates_csv(const std::vector<EstimateRow>& rows) {
  csv::Table t{{"h", "x", "nw", "shape", "flagged"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({format(r.h), format(r.x), format(r.nw), format(r.shape), std::to_string(r.flagged)});
  return t;
}

inline std::string summary_text(const ExperimentReport& r) {
  const auto& p = r.provenance;
  std::string s;
  s += "experiment: " + p.experiment_id + "\n";
  s += "verb: " + p.verb + "\n";
  s += "version: " + p.version + "\n";
  s += "config_hash: " + std::to_string(p.config_hash) + "\n";
  s += "seed: " + std::to_string(p.seed) + "\n";
  s += "replicates: " + fmt(p.replicates) + "\n";
  if (!r.table.empty()) {
    s += "\nMonte Carlo MISE / MISE*\n";
    for (const auto& t : r.table)
      s += "  d=" + format(t.d) + " h=" + format(t.h) + "  mise=" + format(t.mise) + "  mise*=" + format(t.mise_star) +
           "\n";
  }
  if (!r.cv.empty()) {
    s += "\nCV minimum\n";
    for (const auto& v : r.cv)
      s += "  d=" + format(v.d) + "  cv=" + format(v.cv_mean) + "  median h_cv/h_ase=" + format(v.h_ratio_median) +
           "\n";
  }
  if (!r.rate_fits.empty()) {
    s += "\nRate fits\n";
    for (const auto& f : r.rate_fits)
      s += "  " + f.estimator + " alpha=" + format(f.alpha) + "  slope=" + format(f.slope) +
           "  target=" + format(f.target) + "\n";
  }
  if (!r.conditions.empty()) {
    s += "\nCondition verdicts\n";
    std::string last;
    for (const auto& v : r.conditions) {
      const std::string key = v.id + "/" + format(v.d);
      if (key == last) continue;
      last = key;
      s += "  " + v.id + " d=" + format(v.d) + "  exponent=" + format(v.exponent) + "  " + v.verdict + "\n";
    }
  }
  if (!r.sample.empty()) s += "\nsample size: " + fmt(r.sample.size()) + "\n";
  return s;
}

}  // namespace detail

inline const std::vector<std::string>& report_files() {
  static const std::vector<std::string> files = {"provenance.csv", "table.csv",      "cv.csv",
                                                 "rates.csv",      "rate_fits.csv",  "risk.csv",
                                                 "conditions.csv", "sample.csv",     "estimates.csv",
                                                 "summary.txt"};
  return files;
}

/// Writes every CSV (header-only when a section is empty) and summary.txt.
inline void emit_report(const ExperimentReport& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCategory::io, "cannot create output directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);
  auto put = [&](const char* name, const csv::Table& t) { csv::write_file((base / name).string(), csv::render(t)); };
  put("provenance.csv", detail::provenance_table(r.provenance));
  put("table.csv", detail::table_csv(r.table));
  put("cv.csv", detail::cv_csv(r.cv));
  put("rates.csv", detail::rates_csv(r.rates));
  put("rate_fits.csv", detail::rate_fits_csv(r.rate_fits));
  put("risk.csv", detail::risk_csv(r.risk));
  put("conditions.csv", detail::conditions_csv(r.conditions));
  put("sample.csv", detail::sample_csv(r.sample));
  put("estimates.csv", detail::estimates_csv(r.estimates));
  csv::write_file((base / "summary.txt").string(), detail::summary_text(r));
}

/// Reads a report back from the CSV files written by emit_report.
inline ExperimentReport parse_report(const std::string& dir) {
  const std::filesystem::path base(dir);
  auto load = [&](const char* name) { return csv::parse(csv::read_file((base / name).string())); };
  using csv::parse_double;
  auto num = [](const std::string& s) { return parse_double(s); };
  auto count = [](const std::string& s) { return static_cast<std::size_t>(csv::parse_u64(s)); };

  ExperimentReport r;
  {
    const auto t = load("provenance.csv");
    for (const auto& row : t.rows) {
      const auto& k = row[0];
      const auto& v = row[1];
      if (k == "experiment_id") r.provenance.experiment_id = v;
      else if (k == "verb") r.provenance.verb = v;
      else if (k == "version") r.provenance.version = v;
      else if (k == "config_hash") r.provenance.config_hash = csv::parse_u64(v);
      else if (k == "seed") r.provenance.seed = csv::parse_u64(v);
      else if (k == "replicates") r.provenance.replicates = count(v);
    }
  }
  for (const auto& row : load("table.csv").rows)
    r.table.push_back({num(row[0]), num(row[1]), num(row[2]), num(row[3]), num(row[4]), num(row[5]), num(row[6])});
  for (const auto& row : load("cv.csv").rows)
    r.cv.push_back({num(row[0]), num(row[1]), num(row[2]), num(row[3]), num(row[4]), num(row[5]), num(row[6]),
                    num(row[7]), num(row[8]), num(row[9]), num(row[10]), num(row[11]), num(row[12])});
  for (const auto& row : load("rates.csv").rows)
    r.rates.push_back({row[0], num(row[1]), count(row[2]), num(row[3]), num(row[4]), num(row[5])});
  for (const auto& row : load("rate_fits.csv").rows)
    r.rate_fits.push_back({row[0], num(row[1]), num(row[2]), num(row[3]), num(row[4])});
  for (const auto& row : load("risk.csv").rows)
    r.risk.push_back({num(row[0]), num(row[1]), num(row[2]), num(row[3]), num(row[4]), num(row[5]), num(row[6])});
  for (const auto& row : load("conditions.csv").rows)
    r.conditions.push_back({row[0], num(row[1]), num(row[2]), num(row[3]), num(row[4]), row[5], num(row[6])});
  for (const auto& row : load("sample.csv").rows)
    r.sample.push_back({count(row[0]), num(row[1]), num(row[2]), num(row[3])});
  for (const auto& row : load("estimates.csv").rows)
    r.estimates.push_back({num(row[0]), num(row[1]), num(row[2]), num(row[3]), static_cast<int>(count(row[4]))});
  return r;
}

}  // namespace lrdreg
