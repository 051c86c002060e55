#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "lrdreg/lrdreg.hpp"

using namespace lrdreg;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("lrdreg_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

ExperimentConfig small_table() {
  ExperimentConfig c;
  c.id = "small";
  c.seed = 99;
  c.replicates = 40;
  c.n = 100;
  c.d_ladder = {0.0, 0.3};
  c.h_values = {0.1, 0.5};
  c.workers = 1;
  return c;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t tree_hash(const std::filesystem::path& dir) {
  std::string all;
  for (const auto& name : report_files()) all += name + '\n' + csv::read_file((dir / name).string());
  return fnv1a(all);
}

}  // namespace

TEST(Config, RoundTrip) {
  ExperimentConfig c;
  c.id = "round-trip";
  c.seed = 123456789012345ULL;
  c.n_ladder = {10, 20, 40};
  c.d_ladder = {0.0, 0.125, 0.3};
  c.error_family = ProcessFamily::linear_lrd;
  c.error_scaling = ErrorScaling::unit_marginal;
  c.predictor_mode = PredictorMode::lrd_gaussian;
  c.kernel = KernelShape::quartic;
  c.h_values = {0.1, 0.7};
  c.zero_errors = true;
  c.cond_beta = 0.25;
  const auto back = parse_config(serialize_config(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(serialize_config(back), serialize_config(c));
}

TEST(Config, DefaultsFromEmptyFile) {
  EXPECT_EQ(parse_config(""), ExperimentConfig{});
  const auto c = parse_config("[sample]\nn = 250\n");
  EXPECT_EQ(c.n, 250u);
  EXPECT_EQ(c.replicates, 500u);
}

TEST(Config, ErrorsNameTheField) {
  auto expect_config_error = [](const std::string& text, const std::string& fragment) {
    try {
      parse_config(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.category(), ErrorCategory::config) << text;
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_config_error("[errors]\nd_ladder = 0.1, 0.6\n", "errors.d_ladder");
  expect_config_error("[sample]\nn = ten\n", "sample.n");
  expect_config_error("[sample]\nsize = 10\n", "sample.size");
  expect_config_error("[estimator]\nkernel = box\n", "estimator.kernel");
  expect_config_error("[errors]\nfamily = larch\n", "errors.family");
  expect_config_error("[estimator]\nh_grid_points = 3\n", "estimator.h_grid_points");
  expect_config_error("[sample]\nn = 3\n[estimator]\ncv_leave_out = 1\n", "estimator.cv_leave_out");
  expect_config_error("this is not ini\n", "malformed");
}

TEST(Config, LoadMissingFileIsIoError) {
  try {
    load_config("/nonexistent/lrdreg.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::io);
  }
}

TEST(Csv, RoundTrip) {
  csv::Table t;
  t.header = {"a", "b"};
  t.rows = {{csv::format(0.1), csv::format(1e-300)}, {csv::format(-2.5), "text"}};
  const auto text = csv::render(t);
  EXPECT_EQ(text, "a,b\n0.1,1e-300\n-2.5,text\n");
  const auto back = csv::parse(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(csv::parse_double(csv::format(0.1 + 0.2)), 0.1 + 0.2);
  EXPECT_THROW(csv::parse("a,b\n1\n"), Error);
  EXPECT_THROW(csv::parse_double("1,5"), Error);
}

TEST(Report, EmitParseRoundTrip) {
  auto c = small_table();
  c.replicates = 5;
  const auto report = run_table_experiment(c);
  const auto dir = scratch("roundtrip");
  emit_report(report, dir.string());
  EXPECT_EQ(parse_report(dir.string()), report);
  for (const auto& name : report_files()) EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  std::filesystem::remove_all(dir);
}

TEST(Report, EmptyReportHasHeaderOnlyFiles) {
  ExperimentReport empty;
  const auto dir = scratch("empty");
  emit_report(empty, dir.string());
  const auto table = csv::read_file((dir / "table.csv").string());
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 1);
  EXPECT_EQ(table.rfind("d,h,", 0), 0u);
  EXPECT_EQ(parse_report(dir.string()), empty);
  std::filesystem::remove_all(dir);
}

TEST(Report, UnwritableDirectoryIsIoError) {
  const auto file = scratch("blocker");
  csv::write_file(file.string(), "x");
  try {
    emit_report({}, (file / "sub").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::io);
  }
  std::filesystem::remove_all(file);
}

TEST(Determinism, ByteIdenticalAcrossRunsAndWorkers) {
  auto c = small_table();
  const auto a = scratch("det_a"), b = scratch("det_b");
  emit_report(run_table_experiment(c), a.string());
  c.workers = 4;
  emit_report(run_table_experiment(c), b.string());
  // provenance.csv records the hash of the config, which includes workers.
  for (const auto& name : {"table.csv", "cv.csv", "rates.csv", "sample.csv", "estimates.csv"})
    EXPECT_EQ(csv::read_file((a / name).string()), csv::read_file((b / name).string())) << name;
  c.workers = 1;
  emit_report(run_table_experiment(c), b.string());
  EXPECT_EQ(tree_hash(a), tree_hash(b));
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Determinism, SeedChangesOutput) {
  auto c = small_table();
  const auto a = run_table_experiment(c);
  c.seed += 1;
  EXPECT_NE(run_table_experiment(c).table, a.table);
}

TEST(Table, ZeroErrorsConstantFunction) {
  auto c = small_table();
  c.zero_errors = true;
  c.function = TrueFunctionId::constant;
  for (const auto& row : run_table_experiment(c).table) {
    EXPECT_LT(row.mise, 1e-6);
    EXPECT_LT(row.mise_star, 1e-6);
  }
}

TEST(Table, StandardErrorShrinksWithReplicates) {
  auto c = small_table();
  c.d_ladder = {0.2};
  c.h_values = {0.2};
  c.replicates = 100;
  const auto a = run_table_experiment(c).table.front();
  c.replicates = 400;
  const auto b = run_table_experiment(c).table.front();
  EXPECT_NEAR(a.mise_se / b.mise_se, 2.0, 0.5);
  EXPECT_NEAR(a.mise_star_se / b.mise_star_se, 2.0, 0.5);
}

TEST(Table, RowsCoverEveryPair) {
  const auto t = run_table_experiment(small_table()).table;
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].d, 0.0);
  EXPECT_EQ(t[1].h, 0.5);
  EXPECT_EQ(t[3].d, 0.3);
}

TEST(Simulate, SampleAndEstimates) {
  ExperimentConfig c;
  c.seed = 7;
  c.n = 200;
  c.d_ladder = {0.3};
  c.h_values = {0.1, 0.3};
  const auto r = run_simulate(c);
  ASSERT_EQ(r.sample.size(), 200u);
  for (const auto& s : r.sample) EXPECT_NEAR(s.y, std::sin(2.0 * std::numbers::pi * s.x) + s.eps, 1e-12);
  EXPECT_EQ(r.estimates.size(), 2u * 201u);
  EXPECT_EQ(r.provenance.verb, "simulate");
}

TEST(ErrorModel, FftPathMatchesDirectFilter) {
  ExperimentConfig c;
  c.error_family = ProcessFamily::linear_lrd;
  c.truncation = fft_filter_threshold;
  const ErrorModel fft(c, 0.35, 300);
  ASSERT_TRUE(fft.coeffs().has_value());
  const auto& coeffs = *fft.coeffs();
  const std::size_t K = coeffs.truncation();
  const InnovationSpec innov{InnovationLaw::standard_gaussian, 5};
  const auto eta = draw_innovations_from(innov, -static_cast<std::int64_t>(K), 300 + K);
  const auto direct = filter_linear(coeffs.values, eta, 300);
  const auto via_fft = fft.draw(5);
  for (std::size_t i = 0; i < 300; ++i) EXPECT_NEAR(via_fft[i], direct[i], 1e-10);
}

TEST(ErrorModel, ScalingOption) {
  ExperimentConfig c;
  c.truncation = 1000;
  const ErrorModel raw(c, 0.3, 100);
  c.error_scaling = ErrorScaling::unit_marginal;
  const ErrorModel unit(c, 0.3, 100);
  EXPECT_GT(raw.coeffs()->sum_of_squares(), 1.0);
  EXPECT_NEAR(unit.coeffs()->sum_of_squares(), 1.0, 1e-12);
  EXPECT_FALSE(ErrorModel(c, 0.0, 100).coeffs().has_value());
}

TEST(Parallel, OrderedResultsAndErrors) {
  const auto v = parallel_map(100, 8, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel_map(10, 4,
                            [](std::size_t i) -> int {
                              if (i == 7) fail(ErrorCategory::data, "boom");
                              return 0;
                            }),
               Error);
}
