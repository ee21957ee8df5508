#include "lte/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "lte/error.hpp"
#include "lte/rng.hpp"
#include "parallel.hpp"

namespace lte {

namespace {

constexpr std::uint64_t kSamplesPerBlock = 8;
constexpr std::uint64_t kCheckSamplesPerBlock = 1000;
constexpr std::uint64_t kExactCheckTag = 0x300;
constexpr std::uint64_t kOracleCheckTag = 0x301;

std::uint64_t tagged_stream(std::uint64_t tag, std::uint64_t sample) {
  if (sample >> 32) throw std::out_of_range("sample index must fit in 32 bits");
  return (tag << 32) | sample;
}

std::uint64_t block_count(std::uint64_t samples, std::uint64_t per_block) {
  return (samples + per_block - 1) / per_block;
}

template <class Fn>
auto with_sample_context(std::uint64_t sample, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SampleFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw SampleFailure(e.what(), sample);
  }
}

struct Moments {
  double mean;
  double variance;
  double fourth_central;
};

Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : v) {
    const double d = (x - mean) * (x - mean);
    m2 += d;
    m4 += d * d;
  }
  return {mean, m2 / (n - 1.0), m4 / n};
}

}  // namespace

// ---------------------------------------------------------------------------
// Test functions

TestFunction parse_test_function(std::string_view name) {
  if (name == "F1" || name == "f1") return TestFunction::F1;
  if (name == "F2" || name == "f2") return TestFunction::F2;
  throw std::invalid_argument("unknown test function '" + std::string(name) + "' (expected F1 | F2)");
}

std::string_view test_function_name(TestFunction tf) noexcept {
  return tf == TestFunction::F1 ? "F1" : "F2";
}

double test_function(TestFunction tf, const ModelSpec& model, double u) {
  if (std::isnan(u)) throw std::domain_error("test_function: NaN argument");
  double r = std::abs(model.to_working(u));
  if (r > 1.0) {
    if (r > 1.0 + 64.0 * std::numeric_limits<double>::epsilon()) {
      throw std::domain_error("test_function: argument outside the domain");
    }
    r = 1.0;
  }
  if (tf == TestFunction::F1) return std::exp(-r);
  return 0.5 * (std::sqrt((1.0 - r) * (1.0 + r)) * r + std::asin(r));
}

// ---------------------------------------------------------------------------
// Configuration

ModelSpec ExperimentConfig::model_spec() const { return ModelSpec::by_name(model, gamma); }

ExactSimOptions ExperimentConfig::exact_options() const {
  ExactSimOptions o;
  o.nu = nu;
  return o;
}

Grid ExperimentConfig::path_grid() const {
  if (!(dx > 0.0 && dt > 0.0 && T > 0.0)) throw std::invalid_argument("dx, dt and T must be > 0");
  const double n = std::round(1.0 / dx);
  const double m = std::round(T / dt);
  if (std::abs(n * dx - 1.0) > 1e-12 || n < 2.0) {
    throw std::invalid_argument("1/dx must be an integer >= 2");
  }
  if (std::abs(m * dt - T) > 1e-12 * T || m < 1.0) {
    throw std::invalid_argument("T/dt must be a positive integer");
  }
  return Grid(static_cast<int>(n), static_cast<int>(m), T);
}

unsigned ExperimentConfig::resolved_threads() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Grid level_grid(int level, double T) {
  if (level < 1 || level > 15) throw std::invalid_argument("level must lie in [1, 15]");
  return Grid(1 << level, 1 << (2 * level), T);
}

// ---------------------------------------------------------------------------
// Boundary table

bool path_in_domain(Scheme scheme, const ModelSpec& model, const Grid& grid, double lambda,
                    std::uint64_t seed, std::uint64_t sample_id, const ExactSimOptions& opts) {
  const Domain dom = model.original_domain();
  bool inside = true;
  const RngStream path = derive_stream(seed, path_stream_id(scheme, sample_id));
  try {
    run_path(scheme, model, grid, lambda, path,
             [&](int, std::span<const double> s) {
               for (double z : s) {
                 if (!dom.contains(model.from_working(z))) {
                   inside = false;
                   return false;
                 }
               }
               return true;
             },
             opts);
  } catch (const NonFiniteState&) {
    return false;
  }
  return inside;
}

BoundaryReport boundary_table(const ExperimentConfig& cfg) {
  const ModelSpec model = cfg.model_spec();
  const Grid grid = cfg.path_grid();
  const ExactSimOptions opts = cfg.exact_options();
  const unsigned threads = cfg.resolved_threads();
  BoundaryReport report;
  for (const std::string& name : cfg.schemes) {
    const Scheme scheme = parse_scheme(name);
    for (double lambda : cfg.lambdas) {
      if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
      BoundaryRow row{model.name(), std::string(scheme_name(scheme)), lambda, grid.dx(), grid.dt(),
                      grid.T(), cfg.samples, 0};
      detail::ordered_blocks(
          block_count(cfg.samples, kSamplesPerBlock), threads,
          [&](std::size_t b) {
            std::uint64_t count = 0;
            const std::uint64_t lo = b * kSamplesPerBlock;
            const std::uint64_t hi = std::min(cfg.samples, lo + kSamplesPerBlock);
            for (std::uint64_t s = lo; s < hi; ++s) {
              count += with_sample_context(s, [&] {
                return path_in_domain(scheme, model, grid, lambda, cfg.seed, s, opts);
              });
            }
            return count;
          },
          [&row](std::uint64_t c) { row.in_domain += c; });
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Weak error

double LevelStatistics::mean(std::size_t f, int row, int col) const {
  return sum.at(f).at(static_cast<std::size_t>(row) * cols + col) / static_cast<double>(samples);
}

double LevelStatistics::variance(std::size_t f, int row, int col) const {
  if (samples < 2) return 0.0;
  const std::size_t i = static_cast<std::size_t>(row) * cols + col;
  const double n = static_cast<double>(samples);
  const double m = sum.at(f)[i] / n;
  const double v = (sumsq.at(f)[i] - n * m * m) / (n - 1.0);
  return std::max(v, 0.0);
}

std::uint64_t level_run_tag(int level) { return 0x100 + static_cast<std::uint64_t>(level); }
std::uint64_t reference_run_tag(int level) { return 0x200 + static_cast<std::uint64_t>(level); }

LevelStatistics level_statistics(const ModelSpec& model, int level, int node_level, double T,
                                 double lambda, std::uint64_t samples, std::uint64_t seed,
                                 std::uint64_t run_tag, const std::vector<TestFunction>& functions,
                                 unsigned threads, const ExactSimOptions& opts) {
  if (node_level < 1 || node_level > level) {
    throw std::invalid_argument("node level must lie in [1, level]");
  }
  if (functions.empty()) throw std::invalid_argument("at least one test function is required");
  const Grid grid = level_grid(level, T);
  const int stride_x = 1 << (level - node_level);
  const int stride_t = 1 << (2 * (level - node_level));

  LevelStatistics st;
  st.level = level;
  st.node_level = node_level;
  st.rows = (1 << (2 * node_level)) + 1;
  st.cols = (1 << node_level) + 1;
  st.samples = samples;
  st.functions = functions;
  const std::size_t nodes = static_cast<std::size_t>(st.rows) * st.cols;
  st.sum.assign(functions.size(), std::vector<double>(nodes, 0.0));
  st.sumsq = st.sum;
  const std::vector<std::vector<double>> zeros = st.sum;

  struct Partial {
    std::vector<std::vector<double>> sum;
    std::vector<std::vector<double>> sumsq;
  };

  detail::ordered_blocks(
      block_count(samples, kSamplesPerBlock), threads,
      [&](std::size_t b) {
        Partial p{zeros, zeros};
        const std::uint64_t lo = b * kSamplesPerBlock;
        const std::uint64_t hi = std::min(samples, lo + kSamplesPerBlock);
        for (std::uint64_t s = lo; s < hi; ++s) {
          const RngStream path = derive_stream(seed, tagged_stream(run_tag, s));
          with_sample_context(s, [&] {
            run_path(Scheme::LTE, model, grid, lambda, path,
                     [&](int m, std::span<const double> state) {
                       if (m % stride_t != 0) return true;
                       const std::size_t base = static_cast<std::size_t>(m / stride_t) * st.cols;
                       for (int c = 0; c < st.cols; ++c) {
                         const int n = c * stride_x;
                         const double z = (n == 0 || n == grid.N()) ? 0.0 : state[n - 1];
                         const double u = model.from_working(z);
                         for (std::size_t f = 0; f < functions.size(); ++f) {
                           const double v = test_function(functions[f], model, u);
                           p.sum[f][base + c] += v;
                           p.sumsq[f][base + c] += v * v;
                         }
                       }
                       return true;
                     },
                     opts);
            return 0;
          });
        }
        return p;
      },
      [&st](Partial&& p) {
        for (std::size_t f = 0; f < st.sum.size(); ++f) {
          for (std::size_t i = 0; i < st.sum[f].size(); ++i) {
            st.sum[f][i] += p.sum[f][i];
            st.sumsq[f][i] += p.sumsq[f][i];
          }
        }
      });
  return st;
}

WeakErrorEstimate compare_statistics(const LevelStatistics& test, const LevelStatistics& ref,
                                     std::size_t function_index) {
  if (test.samples == 0 || ref.samples == 0) throw std::invalid_argument("no samples to compare");
  if (ref.node_level < test.node_level) {
    throw std::invalid_argument("reference nodes are coarser than the test nodes");
  }
  if (test.functions.at(function_index) != ref.functions.at(function_index)) {
    throw std::invalid_argument("test function mismatch between statistics");
  }
  const int gap = ref.node_level - test.node_level;
  const int sx = 1 << gap;
  const int st = 1 << (2 * gap);
  const double nt = static_cast<double>(test.samples);
  const double nr = static_cast<double>(ref.samples);
  WeakErrorEstimate out{0.0, 0.0};
  for (int r = 0; r < test.rows; ++r) {
    for (int c = 0; c < test.cols; ++c) {
      const double d = std::abs(test.mean(function_index, r, c) - ref.mean(function_index, r * st, c * sx));
      const double se = std::sqrt(test.variance(function_index, r, c) / nt +
                                  ref.variance(function_index, r * st, c * sx) / nr);
      out.error = std::max(out.error, d);
      out.std_error = std::max(out.std_error, se);
    }
  }
  return out;
}

SlopeFit fit_slope(const std::vector<double>& dts, const std::vector<double>& errors) {
  if (dts.size() != errors.size()) throw std::invalid_argument("fit_slope: size mismatch");
  if (dts.size() < 2) throw std::invalid_argument("fit_slope: need at least two points");
  const std::size_t n = dts.size();
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(dts[i] > 0.0) || !(errors[i] > 0.0) || !std::isfinite(dts[i]) || !std::isfinite(errors[i])) {
      throw std::invalid_argument("fit_slope: inputs must be positive and finite");
    }
    x[i] = std::log(dts[i]);
    y[i] = std::log(errors[i]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: all dt values are equal");
  SlopeFit fit{};
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss);
  return fit;
}

std::vector<WeakErrorReport> weak_error_experiment(const ExperimentConfig& cfg) {
  if (cfg.levels.empty()) throw std::invalid_argument("weak error: no levels given");
  if (cfg.samples == 0) throw std::invalid_argument("weak error: samples must be > 0");
  const int finest = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  const int coarsest = *std::min_element(cfg.levels.begin(), cfg.levels.end());
  if (coarsest < 1) throw std::invalid_argument("weak error: levels must be >= 1");
  if (cfg.reference_level <= finest) {
    throw std::invalid_argument("weak error: reference level must exceed every test level");
  }
  if (cfg.lambdas.empty()) throw std::invalid_argument("weak error: lambda missing");
  const double lambda = cfg.lambdas.front();
  const ModelSpec model = cfg.model_spec();
  const ExactSimOptions opts = cfg.exact_options();
  const unsigned threads = cfg.resolved_threads();
  std::vector<TestFunction> fns;
  for (const auto& name : cfg.test_functions) fns.push_back(parse_test_function(name));
  if (fns.empty()) throw std::invalid_argument("weak error: no test function given");

  const LevelStatistics ref =
      level_statistics(model, cfg.reference_level, finest, cfg.T, lambda, cfg.samples, cfg.seed,
                       reference_run_tag(cfg.reference_level), fns, threads, opts);

  std::vector<WeakErrorReport> reports(fns.size());
  for (std::size_t f = 0; f < fns.size(); ++f) {
    reports[f].model = model.name();
    reports[f].test_function = std::string(test_function_name(fns[f]));
  }
  for (int level : cfg.levels) {
    const auto t0 = std::chrono::steady_clock::now();
    const LevelStatistics st = level_statistics(model, level, level, cfg.T, lambda, cfg.samples,
                                                cfg.seed, level_run_tag(level), fns, threads, opts);
    const double wall =
        cfg.record_timing
            ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
            : 0.0;
    const Grid grid = level_grid(level, cfg.T);
    for (std::size_t f = 0; f < fns.size(); ++f) {
      const WeakErrorEstimate e = compare_statistics(st, ref, f);
      reports[f].rows.push_back(
          {level, grid.dx(), grid.dt(), reports[f].test_function, e.error, e.std_error, wall});
    }
  }
  for (auto& rep : reports) {
    if (rep.rows.size() < 2) continue;
    std::vector<double> dts;
    std::vector<double> errs;
    for (const auto& r : rep.rows) {
      dts.push_back(r.dt);
      errs.push_back(r.weak_error);
    }
    rep.fit = fit_slope(dts, errs);
    rep.has_fit = true;
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Exact-step oracle

bool MomentComparison::within(double k) const {
  return std::abs(exact - oracle) <= k * std_error;
}

double ks_statistic(std::vector<double>& a, std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

ExactSimCheck exactsim_check(const ModelSpec& model, double x0, double dt, double lambda,
                             std::uint64_t samples, double oracle_step, std::uint64_t seed,
                             unsigned threads, const ExactSimOptions& opts) {
  if (samples < 2) throw std::invalid_argument("exactsim_check: need at least two samples");
  if (!(oracle_step > 0.0 && oracle_step <= dt)) {
    throw std::invalid_argument("exactsim_check: oracle step must lie in (0, dt]");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("exactsim_check: lambda must be > 0");
  const auto steps = static_cast<std::uint64_t>(std::llround(dt / oracle_step));
  const double h = dt / static_cast<double>(steps);
  const double sqrt_h = std::sqrt(h);

  auto collect = [&](auto&& draw) {
    std::vector<double> out;
    out.reserve(samples);
    detail::ordered_blocks(
        block_count(samples, kCheckSamplesPerBlock), threads,
        [&](std::size_t b) {
          std::vector<double> v;
          const std::uint64_t lo = b * kCheckSamplesPerBlock;
          const std::uint64_t hi = std::min(samples, lo + kCheckSamplesPerBlock);
          for (std::uint64_t s = lo; s < hi; ++s) v.push_back(draw(s));
          return v;
        },
        [&out](std::vector<double>&& v) { out.insert(out.end(), v.begin(), v.end()); });
    return out;
  };

  std::vector<double> exact = collect([&](std::uint64_t s) {
    RngStream rng = derive_stream(seed, tagged_stream(kExactCheckTag, s));
    return exact_step(model, lambda, x0, dt, rng, opts);
  });
  std::vector<double> oracle = collect([&](std::uint64_t s) {
    RngStream rng = derive_stream(seed, tagged_stream(kOracleCheckTag, s));
    double x = x0;
    for (std::uint64_t k = 0; k < steps; ++k) {
      x += model.f(x) * h + lambda * model.g(x) * sqrt_h * rng.normal();
    }
    return x;
  });

  const Moments me = moments(exact);
  const Moments mo = moments(oracle);
  const double n = static_cast<double>(samples);
  ExactSimCheck out{};
  out.model = model.name();
  out.x0 = x0;
  out.dt = dt;
  out.lambda = lambda;
  out.samples = samples;
  out.mean = {me.mean, mo.mean, std::sqrt(me.variance / n + mo.variance / n)};
  const double var_se_e = std::sqrt(std::max(me.fourth_central - me.variance * me.variance, 0.0) / n);
  const double var_se_o = std::sqrt(std::max(mo.fourth_central - mo.variance * mo.variance, 0.0) / n);
  out.variance = {me.variance, mo.variance, std::hypot(var_se_e, var_se_o)};
  out.ks_distance = ks_statistic(exact, oracle);
  return out;
}

}  // namespace lte
