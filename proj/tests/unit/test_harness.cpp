#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lte/harness.hpp"

using lte::ModelSpec;
using lte::TestFunction;

namespace {

template <class R>
std::string csv(const R& r) {
  std::ostringstream os;
  lte::write_csv(os, r);
  return os.str();
}

int count_lines(const std::string& s, bool data_only) {
  std::istringstream is(s);
  std::string line;
  int n = 0;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) {
      header = false;
      if (data_only) continue;
    }
    if (data_only && !line.empty() && line[0] == '#') continue;
    ++n;
  }
  return n;
}

lte::ExperimentConfig small_weak_config() {
  lte::ExperimentConfig cfg;
  cfg.levels = {1, 2};
  cfg.reference_level = 3;
  cfg.samples = 60;
  cfg.test_functions = {"F1", "F2"};
  cfg.record_timing = false;
  return cfg;
}

}  // namespace

TEST(TestFunctions, Values) {
  const auto ac = ModelSpec::allen_cahn();
  EXPECT_EQ(lte::test_function(TestFunction::F1, ac, 0.0), 1.0);
  EXPECT_NEAR(lte::test_function(TestFunction::F2, ac, 1.0), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(lte::test_function(TestFunction::F2, ac, -1.0), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(lte::test_function(TestFunction::F1, ac, -0.5), std::exp(-0.5), 1e-15);
  EXPECT_EQ(lte::test_function(TestFunction::F2, ac, 0.0), 0.0);
  const auto sis = ModelSpec::sis();
  EXPECT_EQ(lte::test_function(TestFunction::F1, sis, 0.5), 1.0);
  EXPECT_NEAR(lte::test_function(TestFunction::F1, sis, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_THROW(lte::test_function(TestFunction::F1, ac, 1.001), std::domain_error);
  EXPECT_NO_THROW(lte::test_function(TestFunction::F2, ac, std::nextafter(1.0, 2.0)));
  EXPECT_EQ(lte::parse_test_function("F2"), TestFunction::F2);
  EXPECT_THROW(lte::parse_test_function("F3"), std::invalid_argument);
}

TEST(TestFunctions, F2IsLipschitzPrimitive) {
  // F2'(r) = sqrt(1 - r^2) on [0, 1].
  const auto ac = ModelSpec::allen_cahn();
  for (double r = 0.05; r < 0.95; r += 0.05) {
    const double h = 1e-6;
    const double d = (lte::test_function(TestFunction::F2, ac, r + h) -
                      lte::test_function(TestFunction::F2, ac, r - h)) / (2 * h);
    EXPECT_NEAR(d, std::sqrt(1 - r * r), 1e-8);
  }
}

TEST(FitSlope, Examples) {
  std::vector<double> dts, errs;
  for (int l = 2; l <= 5; ++l) {
    dts.push_back(std::pow(4.0, -l));
    errs.push_back(0.7 * std::pow(dts.back(), 0.25));
  }
  const auto f = lte::fit_slope(dts, errs);
  EXPECT_NEAR(f.slope, 0.25, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(0.7), 1e-12);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);

  const auto two = lte::fit_slope({0.1, 0.01}, {0.3, 0.2});
  EXPECT_NEAR(two.residual, 0.0, 1e-14);
  EXPECT_NEAR(two.slope, std::log(1.5) / std::log(10.0), 1e-14);

  const auto flat = lte::fit_slope({0.1, 0.01, 0.001}, {0.2, 0.2, 0.2});
  EXPECT_NEAR(flat.slope, 0.0, 1e-15);

  EXPECT_THROW(lte::fit_slope({0.1}, {0.1}), std::invalid_argument);
  EXPECT_THROW(lte::fit_slope({0.1, 0.2}, {0.1, 0.0}), std::invalid_argument);
}

TEST(FitSlope, ResidualIsRssNorm) {
  // log-log points (0,0), (1,1), (2,0): slope 0, residuals -1/3, 2/3, -1/3.
  const double e = std::numbers::e;
  const auto f = lte::fit_slope({1.0, e, e * e}, {1.0, e, 1.0});
  EXPECT_NEAR(f.slope, 0.0, 1e-14);
  EXPECT_NEAR(f.residual, std::sqrt(6.0) / 3.0, 1e-14);
}

TEST(LevelGrid, Shape) {
  const auto g = lte::level_grid(3, 1.0);
  EXPECT_EQ(g.N(), 8);
  EXPECT_EQ(g.M(), 64);
  EXPECT_EQ(g.dt(), 1.0 / 64);
  EXPECT_THROW(lte::level_grid(0, 1.0), std::invalid_argument);
}

TEST(Boundary, ReportShapeAndLteColumn) {
  lte::ExperimentConfig cfg;
  cfg.schemes = {"lte", "em", "sem", "exp"};
  cfg.lambdas = {1, 2, 3};
  cfg.samples = 10;
  const auto rep = lte::boundary_table(cfg);
  ASSERT_EQ(rep.rows.size(), 12u);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.samples, 10u);
    EXPECT_LE(r.in_domain, r.samples);
    if (r.scheme == "lte") EXPECT_EQ(r.in_domain, r.samples);
    EXPECT_EQ(r.dx, 1.0 / 16);
    EXPECT_EQ(r.dt, 0.25);
  }
  EXPECT_EQ(count_lines(csv(rep), true), 12);
  EXPECT_EQ(csv(rep).substr(0, csv(rep).find('\n')), "model,scheme,lambda,dx,dt,T,samples,in_domain");
}

TEST(Boundary, ZeroSamples) {
  lte::ExperimentConfig cfg;
  cfg.samples = 0;
  const auto rep = lte::boundary_table(cfg);
  ASSERT_EQ(rep.rows.size(), 1u);
  EXPECT_EQ(rep.rows[0].samples, 0u);
  EXPECT_EQ(rep.rows[0].in_domain, 0u);
}

TEST(Boundary, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(count_lines(csv(lte::BoundaryReport{}), false), 1);
  EXPECT_EQ(count_lines(csv(std::vector<lte::WeakErrorReport>{}), false), 1);
}

TEST(Boundary, DeterministicAcrossThreads) {
  lte::ExperimentConfig cfg;
  cfg.model = "sis";
  cfg.schemes = {"lte", "sem", "exp"};
  cfg.lambdas = {2, 4};
  cfg.samples = 30;
  cfg.threads = 1;
  const std::string one = csv(lte::boundary_table(cfg));
  cfg.threads = 4;
  EXPECT_EQ(csv(lte::boundary_table(cfg)), one);
}

TEST(WeakError, SelfComparisonIsZero) {
  const auto m = ModelSpec::allen_cahn();
  const std::vector<TestFunction> fs{TestFunction::F1, TestFunction::F2};
  const auto a = lte::level_statistics(m, 2, 2, 1.0, 1.0, 40, 9, lte::level_run_tag(2), fs, 2);
  const auto b = lte::level_statistics(m, 2, 2, 1.0, 1.0, 40, 9, lte::level_run_tag(2), fs, 1);
  EXPECT_EQ(a.sum, b.sum);
  EXPECT_EQ(lte::compare_statistics(a, b, 0).error, 0.0);
  EXPECT_EQ(lte::compare_statistics(a, b, 1).error, 0.0);
}

TEST(WeakError, DisjointSeedsAgreeWithinStandardErrors) {
  const auto m = ModelSpec::nagumo();
  const std::vector<TestFunction> fs{TestFunction::F1};
  const auto a = lte::level_statistics(m, 2, 2, 1.0, 1.0, 400, 1, lte::level_run_tag(2), fs, 1);
  const auto b = lte::level_statistics(m, 2, 2, 1.0, 1.0, 400, 2, lte::level_run_tag(2), fs, 1);
  const auto e = lte::compare_statistics(a, b, 0);
  EXPECT_LT(e.error, 4.0 * e.std_error);
  EXPECT_GT(e.std_error, 0.0);
}

TEST(WeakError, StandardErrorScaling) {
  const auto m = ModelSpec::sis();
  const std::vector<TestFunction> fs{TestFunction::F1};
  const auto ref = lte::level_statistics(m, 3, 3, 1.0, 1.0, 200, 1, lte::reference_run_tag(3), fs, 1);
  const auto small = lte::level_statistics(m, 2, 2, 1.0, 1.0, 200, 1, lte::level_run_tag(2), fs, 1);
  const auto big = lte::level_statistics(m, 2, 2, 1.0, 1.0, 400, 1, lte::level_run_tag(2), fs, 1);
  const auto big_ref = lte::level_statistics(m, 3, 3, 1.0, 1.0, 400, 1, lte::reference_run_tag(3), fs, 1);
  const double ratio = lte::compare_statistics(big, big_ref, 0).std_error /
                       lte::compare_statistics(small, ref, 0).std_error;
  EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.1);
}

TEST(WeakError, StatisticsLayout) {
  const auto m = ModelSpec::allen_cahn();
  const std::vector<TestFunction> fs{TestFunction::F1};
  const auto s = lte::level_statistics(m, 3, 2, 1.0, 1.0, 5, 1, 7, fs, 1);
  EXPECT_EQ(s.rows, 17);
  EXPECT_EQ(s.cols, 5);
  // Dirichlet nodes hold u = 0, so F1 = 1 with zero variance.
  for (int r = 0; r < s.rows; ++r) {
    EXPECT_EQ(s.mean(0, r, 0), 1.0);
    EXPECT_EQ(s.variance(0, r, s.cols - 1), 0.0);
  }
  // Row 0 is the deterministic initial profile.
  EXPECT_NEAR(s.mean(0, 0, 1), std::exp(-1.0), 1e-15);
}

TEST(WeakError, ReportAndCsv) {
  auto cfg = small_weak_config();
  const auto reps = lte::weak_error_experiment(cfg);
  ASSERT_EQ(reps.size(), 2u);
  for (const auto& r : reps) {
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_TRUE(r.has_fit);
    for (const auto& row : r.rows) {
      EXPECT_GT(row.weak_error, 0.0);
      EXPECT_EQ(row.wall_seconds, 0.0);
      EXPECT_EQ(row.test_function, r.test_function);
    }
    EXPECT_EQ(r.rows[1].dt, 1.0 / 16);
  }
  const std::string out = csv(reps);
  EXPECT_EQ(count_lines(out, true), 4);
  EXPECT_NE(out.find("# slope="), std::string::npos);
  EXPECT_NE(out.find("test_function=F2"), std::string::npos);

  cfg.test_functions = {"F1"};
  cfg.levels = {1, 2, 3};
  cfg.reference_level = 4;
  cfg.samples = 20;
  const std::string single = csv(lte::weak_error_experiment(cfg));
  EXPECT_EQ(count_lines(single, true), 3);
  EXPECT_EQ(single.find("test_function="), std::string::npos);
}

TEST(WeakError, DeterministicAcrossThreads) {
  auto cfg = small_weak_config();
  cfg.model = "nagumo";
  cfg.threads = 1;
  const std::string one = csv(lte::weak_error_experiment(cfg));
  cfg.threads = 8;
  EXPECT_EQ(csv(lte::weak_error_experiment(cfg)), one);
}

TEST(WeakError, RejectsBadConfig) {
  auto cfg = small_weak_config();
  cfg.reference_level = 2;
  EXPECT_THROW(lte::weak_error_experiment(cfg), std::invalid_argument);
  cfg = small_weak_config();
  cfg.samples = 0;
  EXPECT_THROW(lte::weak_error_experiment(cfg), std::invalid_argument);
}

TEST(Ks, Statistic) {
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_EQ(lte::ks_statistic(a, b), 1.0);
  std::vector<double> c{3, 1, 2}, d{2, 3, 1};
  EXPECT_EQ(lte::ks_statistic(c, d), 0.0);
  std::vector<double> e{1, 3}, f{2, 4};
  EXPECT_EQ(lte::ks_statistic(e, f), 0.5);
}

TEST(ExactSimCheck, CsvRows) {
  const auto c = lte::exactsim_check(ModelSpec::sis(), 0.2, 0.05, 1.0, 200, 1e-3, 1, 1);
  EXPECT_EQ(c.samples, 200u);
  const std::string out = csv(c);
  EXPECT_EQ(count_lines(out, true), 3);
  EXPECT_NE(out.find(",ks_distance,"), std::string::npos);
  EXPECT_TRUE((lte::MomentComparison{1.0, 1.1, 0.05}.within(3.0)));
  EXPECT_FALSE((lte::MomentComparison{1.0, 1.2, 0.05}.within(3.0)));
}

TEST(Csv, SimulateRows) {
  const auto m = ModelSpec::nagumo();
  const lte::Grid g(4, 3, 1.0);
  const auto tr = lte::simulate_path(lte::Scheme::LTE, m, g, 1.0, 1, 0);
  std::ostringstream os;
  lte::write_csv(os, tr, m);
  const std::string out = os.str();
  EXPECT_EQ(count_lines(out, true), 4 * 5);
  // Dirichlet node in original coordinates, then the first interior value.
  EXPECT_EQ(out.substr(0, out.find('\n')), "t,x,value");
  EXPECT_NE(out.find("\n0,0,0.5\n"), std::string::npos);
}

TEST(Csv, WritesFilesAndReportsErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "lte_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "b.csv").string();
  lte::BoundaryReport rep;
  rep.rows.push_back({"sis", "lte", 1.0, 0.0625, 0.25, 1.0, 3, 3});
  lte::emit_csv(rep, path);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "model,scheme,lambda,dx,dt,T,samples,in_domain\nsis,lte,1,0.0625,0.25,1,3,3\n");
  EXPECT_THROW(lte::emit_csv(rep, (dir / "missing" / "x.csv").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}
