#pragma once

// Experiment configuration: an INI-style file with typed sections.
//
//   [experiment]  id, seed, replicates, workers
//   [sample]      n, n_ladder, function
//   [errors]      family, d_ladder, innovation, scaling, truncation, burn_in, zero
//   [predictors]  mode, d_x, A0
//   [estimator]   kernel, h_values, h_grid_points, h_grid_span, cv_leave_out
//   [conditions]  beta, scale, reps
//   [output]      path
//
// Lists are comma separated. Every key is optional; absent keys keep the
// defaults below. Unknown sections or keys are rejected.

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lrdreg/csv.hpp"
#include "lrdreg/error.hpp"
#include "lrdreg/functions.hpp"
#include "lrdreg/innovations.hpp"
#include "lrdreg/kernels.hpp"
#include "lrdreg/processes.hpp"

namespace lrdreg {

/// unit_innovation: filter unit-variance innovations as is (E eps^2 = sum c_k^2);
/// unit_marginal: rescale the filter so that E eps^2 = 1.
enum class ErrorScaling { unit_innovation, unit_marginal };

inline std::string_view to_string(ErrorScaling s) {
  return s == ErrorScaling::unit_innovation ? "unit-innovation" : "unit-marginal";
}

inline ErrorScaling parse_error_scaling(std::string_view s) {
  if (s == "unit-innovation") return ErrorScaling::unit_innovation;
  if (s == "unit-marginal") return ErrorScaling::unit_marginal;
  fail(ErrorCategory::config, "unknown error scaling '" + std::string(s) + "'");
}

struct ExperimentConfig {
  std::string id = "experiment";
  std::uint64_t seed = 20100614;
  std::size_t replicates = 500;
  std::size_t workers = 0;  // 0: hardware concurrency

  std::size_t n = 100;
  std::vector<std::size_t> n_ladder = {200, 400, 800, 1600, 3200};
  TrueFunctionId function = TrueFunctionId::sin_2pi;

  ProcessFamily error_family = ProcessFamily::farima;
  std::vector<double> d_ladder = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45};
  InnovationLaw innovation = InnovationLaw::standard_gaussian;
  ErrorScaling error_scaling = ErrorScaling::unit_innovation;
  std::size_t truncation = 0;  // 0: max(5000, n)
  std::size_t burn_in = 0;     // 0: equal to the truncation
  bool zero_errors = false;

  PredictorMode predictor_mode = PredictorMode::iid_gaussian;
  double d_x = 0.3;
  double A0 = 1.0;

  KernelShape kernel = KernelShape::epanechnikov;
  std::vector<double> h_values = {0.05, 1.0};
  std::size_t h_grid_points = 25;
  double h_grid_span = 5.0;
  std::size_t cv_leave_out = 0;

  double cond_beta = 0.5;
  double cond_scale = 1.0;
  std::size_t cond_reps = 100;

  std::string output = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

template <class T>
std::string join_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>)
      out += csv::format(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& item : csv::split(s)) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

class FieldReader {
 public:
  explicit FieldReader(const boost::property_tree::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree_) {
      for (const auto& [key, value] : body) unused_.insert(section + "." + key);
      if (body.empty()) unused_.insert(section);
    }
  }

  template <class F>
  void read(const std::string& path, F&& assign) {
    const auto raw = tree_.get_optional<std::string>(path);
    if (!raw) return;
    unused_.erase(path);
    try {
      assign(trim(*raw));
    } catch (const Error& e) {
      fail(ErrorCategory::config, path + ": " + e.what());
    } catch (const std::exception& e) {
      fail(ErrorCategory::config, path + ": invalid value '" + *raw + "'");
    }
  }

  void reject_unknown() const {
    if (!unused_.empty()) fail(ErrorCategory::config, "unknown configuration key '" + *unused_.begin() + "'");
  }

 private:
  const boost::property_tree::ptree& tree_;
  std::set<std::string> unused_;
};

inline std::size_t parse_count(const std::string& s) { return static_cast<std::size_t>(csv::parse_u64(s)); }

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(ErrorCategory::config, "expected a boolean, got '" + s + "'");
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
  auto field = [](bool ok, const std::string& path, const std::string& msg) {
    if (!ok) fail(ErrorCategory::config, path + ": " + msg);
  };
  field(c.replicates >= 1, "experiment.replicates", "must be at least 1");
  field(c.n >= 2, "sample.n", "must be at least 2");
  for (std::size_t n : c.n_ladder) field(n >= 2, "sample.n_ladder", "sizes must be at least 2");
  field(!c.d_ladder.empty(), "errors.d_ladder", "must not be empty");
  for (double d : c.d_ladder) field(d >= 0.0 && d < 0.5, "errors.d_ladder", "values must lie in [0, 0.5)");
  field(c.error_family == ProcessFamily::farima || c.error_family == ProcessFamily::linear_lrd ||
            c.error_family == ProcessFamily::iid,
        "errors.family", "harness supports iid, farima and linear-lrd errors");
  field(c.truncation == 0 || c.burn_in == 0 || c.burn_in >= c.truncation, "errors.burn_in",
        "must be at least the truncation");
  field(c.d_x >= 0.0 && c.d_x < 0.5, "predictors.d_x", "must lie in [0, 0.5)");
  field(c.A0 > 0.0, "predictors.A0", "must be positive");
  for (double h : c.h_values) field(h > 0.0, "estimator.h_values", "bandwidths must be positive");
  field(c.h_grid_points >= 5, "estimator.h_grid_points", "need at least 5 points");
  field(c.h_grid_span > 1.0, "estimator.h_grid_span", "must exceed 1");
  field(c.n > 2 * c.cv_leave_out + 1, "estimator.cv_leave_out", "too large for sample.n");
  field(c.cond_beta >= 0.0 && c.cond_beta < 1.0, "conditions.beta", "must lie in [0, 1)");
  field(c.cond_scale > 0.0, "conditions.scale", "must be positive");
  field(c.cond_reps >= 2, "conditions.reps", "must be at least 2");
}

inline std::string serialize_config(const ExperimentConfig& c) {
  using detail::join_list;
  std::ostringstream o;
  o << "[experiment]\n"
    << "id = " << c.id << '\n'
    << "seed = " << c.seed << '\n'
    << "replicates = " << c.replicates << '\n'
    << "workers = " << c.workers << "\n\n"
    << "[sample]\n"
    << "n = " << c.n << '\n'
    << "n_ladder = " << join_list(c.n_ladder) << '\n'
    << "function = " << to_string(c.function) << "\n\n"
    << "[errors]\n"
    << "family = " << to_string(c.error_family) << '\n'
    << "d_ladder = " << join_list(c.d_ladder) << '\n'
    << "innovation = " << to_string(c.innovation) << '\n'
    << "scaling = " << to_string(c.error_scaling) << '\n'
    << "truncation = " << c.truncation << '\n'
    << "burn_in = " << c.burn_in << '\n'
    << "zero = " << (c.zero_errors ? "true" : "false") << "\n\n"
    << "[predictors]\n"
    << "mode = " << to_string(c.predictor_mode) << '\n'
    << "d_x = " << csv::format(c.d_x) << '\n'
    << "A0 = " << csv::format(c.A0) << "\n\n"
    << "[estimator]\n"
    << "kernel = " << to_string(c.kernel) << '\n'
    << "h_values = " << join_list(c.h_values) << '\n'
    << "h_grid_points = " << c.h_grid_points << '\n'
    << "h_grid_span = " << csv::format(c.h_grid_span) << '\n'
    << "cv_leave_out = " << c.cv_leave_out << "\n\n"
    << "[conditions]\n"
    << "beta = " << csv::format(c.cond_beta) << '\n'
    << "scale = " << csv::format(c.cond_scale) << '\n'
    << "reps = " << c.cond_reps << "\n\n"
    << "[output]\n"
    << "path = " << c.output << '\n';
  return o.str();
}

inline ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream in(text);
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCategory::config, std::string("malformed configuration: ") + e.message() + " (line " +
                                    std::to_string(e.line()) + ")");
  }
  using namespace detail;
  ExperimentConfig c;
  FieldReader r(tree);
  r.read("experiment.id", [&](const std::string& s) { c.id = s; });
  r.read("experiment.seed", [&](const std::string& s) { c.seed = csv::parse_u64(s); });
  r.read("experiment.replicates", [&](const std::string& s) { c.replicates = parse_count(s); });
  r.read("experiment.workers", [&](const std::string& s) { c.workers = parse_count(s); });
  r.read("sample.n", [&](const std::string& s) { c.n = parse_count(s); });
  r.read("sample.n_ladder", [&](const std::string& s) {
    c.n_ladder.clear();
    for (const auto& v : split_list(s)) c.n_ladder.push_back(parse_count(v));
  });
  r.read("sample.function", [&](const std::string& s) { c.function = parse_true_function(s); });
  r.read("errors.family", [&](const std::string& s) { c.error_family = parse_process_family(s); });
  r.read("errors.d_ladder", [&](const std::string& s) {
    c.d_ladder.clear();
    for (const auto& v : split_list(s)) c.d_ladder.push_back(csv::parse_double(v));
  });
  r.read("errors.innovation", [&](const std::string& s) { c.innovation = parse_innovation_law(s); });
  r.read("errors.scaling", [&](const std::string& s) { c.error_scaling = parse_error_scaling(s); });
  r.read("errors.truncation", [&](const std::string& s) { c.truncation = parse_count(s); });
  r.read("errors.burn_in", [&](const std::string& s) { c.burn_in = parse_count(s); });
  r.read("errors.zero", [&](const std::string& s) { c.zero_errors = parse_bool(s); });
  r.read("predictors.mode", [&](const std::string& s) { c.predictor_mode = parse_predictor_mode(s); });
  r.read("predictors.d_x", [&](const std::string& s) { c.d_x = csv::parse_double(s); });
  r.read("predictors.A0", [&](const std::string& s) { c.A0 = csv::parse_double(s); });
  r.read("estimator.kernel", [&](const std::string& s) { c.kernel = parse_kernel_shape(s); });
  r.read("estimator.h_values", [&](const std::string& s) {
    c.h_values.clear();
    for (const auto& v : split_list(s)) c.h_values.push_back(csv::parse_double(v));
  });
  r.read("estimator.h_grid_points", [&](const std::string& s) { c.h_grid_points = parse_count(s); });
  r.read("estimator.h_grid_span", [&](const std::string& s) { c.h_grid_span = csv::parse_double(s); });
  r.read("estimator.cv_leave_out", [&](const std::string& s) { c.cv_leave_out = parse_count(s); });
  r.read("conditions.beta", [&](const std::string& s) { c.cond_beta = csv::parse_double(s); });
  r.read("conditions.scale", [&](const std::string& s) { c.cond_scale = csv::parse_double(s); });
  r.read("conditions.reps", [&](const std::string& s) { c.cond_reps = parse_count(s); });
  r.read("output.path", [&](const std::string& s) { c.output = s; });
  r.reject_unknown();
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) { return parse_config(csv::read_file(path)); }

/// 64-bit FNV-1a of the canonical serialization.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lrdreg
