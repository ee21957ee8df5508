#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lte/exactsim.hpp"
#include "lte/grid.hpp"
#include "lte/models.hpp"
#include "lte/schemes.hpp"

namespace lte {

enum class TestFunction { F1, F2 };

TestFunction parse_test_function(std::string_view name);
std::string_view test_function_name(TestFunction tf) noexcept;

/// F1(r) = exp(-|r|), F2(r) = (sqrt(1 - r^2)|r| + asin|r|)/2, evaluated at
/// r = u for [-1,1] models and r = 2(u - 1/2) for [0,1] models. `u` is in
/// original coordinates. Arguments beyond |r| = 1 by more than 64 ulp throw
/// std::domain_error.
double test_function(TestFunction tf, const ModelSpec& model, double u);

struct ExperimentConfig {
  std::string model = "allen-cahn";
  double gamma = ModelSpec::kDefaultNagumoGamma;
  std::vector<std::string> schemes{"lte"};
  std::vector<double> lambdas{1.0};
  double T = 1.0;
  /// Grid of path experiments (simulate, boundary-table).
  double dx = 1.0 / 16.0;
  double dt = 0.25;
  /// Weak-error levels: dx = 2^-l, dt = 4^-l T.
  std::vector<int> levels{2, 3, 4, 5};
  int reference_level = 7;
  std::uint64_t samples = 2000;
  std::uint64_t seed = 1;
  std::vector<std::string> test_functions{"F1"};
  std::string output_path;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
  double nu = 0.5;
  /// Start value (working coordinates) and step of exactsim-check.
  double x0 = 0.2;
  double check_dt = 0.05;
  double oracle_step = 1e-5;
  std::uint64_t check_samples = 100000;
  /// simulate: which sample to draw.
  std::uint64_t sample_id = 0;
  /// When false, wall_seconds is written as 0 so CSVs compare byte for byte.
  bool record_timing = true;

  ModelSpec model_spec() const;
  ExactSimOptions exact_options() const;
  /// Grid from dx, dt, T; 1/dx and T/dt must be integers.
  Grid path_grid() const;
  unsigned resolved_threads() const;
};

/// Overwrites the fields present in a JSON object (same names as the struct).
/// Unknown keys throw std::invalid_argument.
void apply_json_config(ExperimentConfig& cfg, std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path);

Grid level_grid(int level, double T);

// --- boundary preservation --------------------------------------------------

struct BoundaryRow {
  std::string model;
  std::string scheme;
  double lambda;
  double dx;
  double dt;
  double T;
  std::uint64_t samples;
  std::uint64_t in_domain;
};

struct BoundaryReport {
  std::vector<BoundaryRow> rows;
};

/// True iff the path stays in the original domain at every recorded node.
/// Stops simulating at the first excursion.
bool path_in_domain(Scheme scheme, const ModelSpec& model, const Grid& grid, double lambda,
                    std::uint64_t seed, std::uint64_t sample_id, const ExactSimOptions& opts = {});

BoundaryReport boundary_table(const ExperimentConfig& cfg);

// --- weak error -------------------------------------------------------------

/// Per-node sums of F over LTE paths at `level`, kept at the nodes of
/// `node_level` <= level (times stride 4^(level-node_level), space 2^(...)).
struct LevelStatistics {
  int level = 0;
  int node_level = 0;
  int rows = 0;  // time nodes, 4^node_level + 1
  int cols = 0;  // space nodes including boundary, 2^node_level + 1
  std::uint64_t samples = 0;
  std::vector<TestFunction> functions;
  std::vector<std::vector<double>> sum;    // [function][row * cols + col]
  std::vector<std::vector<double>> sumsq;

  double mean(std::size_t f, int row, int col) const;
  double variance(std::size_t f, int row, int col) const;
};

/// Stream tags separating the random numbers of reference and test runs.
std::uint64_t level_run_tag(int level);
std::uint64_t reference_run_tag(int level);

LevelStatistics level_statistics(const ModelSpec& model, int level, int node_level, double T,
                                 double lambda, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t run_tag, const std::vector<TestFunction>& functions,
                                 unsigned threads, const ExactSimOptions& opts = {});

struct WeakErrorEstimate {
  double error;
  double std_error;
};

/// sup over the nodes of `test` of |mean_test - mean_ref|, and the largest
/// per-node two-sample standard error.
WeakErrorEstimate compare_statistics(const LevelStatistics& test, const LevelStatistics& ref,
                                     std::size_t function_index);

struct SlopeFit {
  double slope;
  double intercept;
  double residual;  // Euclidean norm of the log-log residuals
};

SlopeFit fit_slope(const std::vector<double>& dts, const std::vector<double>& errors);

struct WeakErrorRow {
  int level;
  double dx;
  double dt;
  std::string test_function;
  double weak_error;
  double std_error;
  double wall_seconds;
};

struct WeakErrorReport {
  std::string model;
  std::string test_function;
  std::vector<WeakErrorRow> rows;
  SlopeFit fit{0.0, 0.0, 0.0};
  bool has_fit = false;
};

/// One report per configured test function; all share the same paths.
std::vector<WeakErrorReport> weak_error_experiment(const ExperimentConfig& cfg);

// --- exact-step oracle ------------------------------------------------------

struct MomentComparison {
  double exact;
  double oracle;
  double std_error;  // combined
  bool within(double k) const;
};

struct ExactSimCheck {
  std::string model;
  double x0;
  double dt;
  double lambda;
  std::uint64_t samples;
  MomentComparison mean;
  MomentComparison variance;
  double ks_distance;
};

/// Compares `samples` draws of exact_step against Euler-Maruyama paths of
/// the same SDE (multiplier lambda, working coordinates) with step oracle_step.
ExactSimCheck exactsim_check(const ModelSpec& model, double x0, double dt, double lambda,
                             std::uint64_t samples, double oracle_step, std::uint64_t seed,
                             unsigned threads, const ExactSimOptions& opts = {});

/// Two-sample Kolmogorov-Smirnov statistic. Sorts its arguments.
double ks_statistic(std::vector<double>& a, std::vector<double>& b);

// --- CSV --------------------------------------------------------------------

void write_csv(std::ostream& os, const BoundaryReport& report);
void write_csv(std::ostream& os, const std::vector<WeakErrorReport>& reports);
/// t,x,value over all nodes including the Dirichlet ones, original coordinates.
void write_csv(std::ostream& os, const Trajectory& tr, const ModelSpec& model);
void write_csv(std::ostream& os, const ExactSimCheck& check);

/// Writes to `path` (or stdout when empty); I/O failures throw
/// std::runtime_error naming the path.
template <class Report>
void emit_csv(const Report& report, const std::string& path);
void emit_csv(const Trajectory& tr, const ModelSpec& model, const std::string& path);

}  // namespace lte
