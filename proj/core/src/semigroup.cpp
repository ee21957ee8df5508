#include "lte/semigroup.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lte/error.hpp"

namespace lte {

namespace {

// The FFTW planner is not re-entrant; execution with fftw_execute_r2r is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

void check_mode(int N, int j) {
  if (N < 2) throw std::invalid_argument("semigroup: N must be >= 2");
  if (j < 1 || j > N - 1) {
    throw std::out_of_range("semigroup: mode index " + std::to_string(j) + " outside 1.." +
                            std::to_string(N - 1));
  }
}

}  // namespace

double laplacian_eigenvalue(int N, int j) {
  check_mode(N, j);
  const double s = std::sin(j * std::numbers::pi / (2.0 * N));
  return -4.0 * static_cast<double>(N) * N * s * s;
}

double sine_mode(int N, int j, int n) {
  check_mode(N, j);
  if (n < 0 || n > N) throw std::out_of_range("sine_mode: node index out of range");
  // Reduce j*n mod 2N so the argument stays in [0, 2 pi).
  const long k = (static_cast<long>(j) * n) % (2L * N);
  return std::numbers::sqrt2 * std::sin(k * std::numbers::pi / N);
}

SemigroupApplicator::SemigroupApplicator(int N, int fast_threshold) : N_(N) {
  if (N < 2) throw std::invalid_argument("SemigroupApplicator: N must be >= 2");
  const int n = N - 1;
  eig_.resize(n);
  for (int j = 1; j <= n; ++j) eig_[j - 1] = laplacian_eigenvalue(N, j);

  if (N >= fast_threshold) {
    std::vector<double> in(n), out(n);
    std::lock_guard lock(fftw_planner_mutex());
    // FFTW_ESTIMATE keeps the plan (and therefore rounding) identical across runs.
    plan_ = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00,
                             FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    if (plan_ == nullptr) throw std::runtime_error("SemigroupApplicator: FFTW planning failed");
  } else {
    basis_.resize(static_cast<std::size_t>(n) * n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int j = 1; j <= n; ++j) {
      for (int m = 1; m <= n; ++m) {
        basis_[static_cast<std::size_t>(j - 1) * n + (m - 1)] = scale * sine_mode(N, j, m);
      }
    }
  }
}

SemigroupApplicator::~SemigroupApplicator() {
  if (plan_ != nullptr) {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

void SemigroupApplicator::sine_transform(std::span<const double> in, std::span<double> out) const {
  const int n = size();
  if (static_cast<int>(in.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("sine_transform: length mismatch");
  }
  if (plan_ != nullptr) {
    // RODFT00 computes 2 sum_j x_j sin(pi (j+1)(k+1) / N); Q carries sqrt(2/N).
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), const_cast<double*>(in.data()), out.data());
    const double scale = 1.0 / std::sqrt(2.0 * N_);
    for (double& v : out) v *= scale;
    return;
  }
  for (int j = 0; j < n; ++j) {
    const double* row = basis_.data() + static_cast<std::size_t>(j) * n;
    double acc = 0.0;
    for (int m = 0; m < n; ++m) acc += row[m] * in[m];
    out[j] = acc;
  }
}

void SemigroupApplicator::apply_factors(std::span<const double> factors, std::span<const double> v,
                                        std::span<double> out) const {
  const int n = size();
  if (static_cast<int>(v.size()) != n || static_cast<int>(out.size()) != n) {
    throw std::invalid_argument("apply_semigroup: state length " + std::to_string(v.size()) +
                                " does not match N-1 = " + std::to_string(n));
  }
  std::vector<double> coeffs(n);
  sine_transform(v, coeffs);
  for (int j = 0; j < n; ++j) coeffs[j] *= factors[j];
  sine_transform(coeffs, out);
}

void SemigroupApplicator::apply(double t, std::span<const double> v, std::span<double> out) const {
  propagator(t).apply(v, out);
}

StateVector SemigroupApplicator::apply(double t, std::span<const double> v) const {
  StateVector out(v.size());
  apply(t, v, out);
  return out;
}

HeatPropagator SemigroupApplicator::propagator(double t) const { return HeatPropagator(*this, t); }

HeatPropagator::HeatPropagator(const SemigroupApplicator& app, double t) : app_(&app), t_(t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("apply_semigroup: t must be finite and >= 0");
  }
  factors_.resize(app.size());
  for (int j = 0; j < app.size(); ++j) factors_[j] = std::exp(app.eig_[j] * t);
}

void HeatPropagator::apply(std::span<const double> v, std::span<double> out) const {
  app_->apply_factors(factors_, v, out);
}

StateVector HeatPropagator::apply(std::span<const double> v) const {
  StateVector out(v.size());
  apply(v, out);
  return out;
}

std::shared_ptr<const SemigroupApplicator> shared_applicator(int N) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const SemigroupApplicator>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const SemigroupApplicator>(N);
  return slot;
}

StateVector apply_semigroup(const SemigroupApplicator& app, double t, std::span<const double> v) {
  return app.apply(t, v);
}

double clip_tolerance(const Domain& dom) {
  const double scale = std::max({std::abs(dom.a), std::abs(dom.b), 1.0});
  return 64.0 * (std::nextafter(scale, std::numeric_limits<double>::infinity()) - scale);
}

bool domain_clip_check(std::span<const double> v, const Domain& dom) {
  const double eta = clip_tolerance(dom);
  for (double x : v) {
    if (!(x >= dom.a - eta && x <= dom.b + eta)) return false;
  }
  return true;
}

void clip_to_domain(std::span<double> v, const Domain& dom) {
  const double eta = clip_tolerance(dom);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double& x = v[i];
    if (x < dom.a) {
      if (!(x >= dom.a - eta)) {
        throw InternalError("state left the invariant domain at index " + std::to_string(i) +
                            " (value " + std::to_string(x) + ")");
      }
      x = dom.a;
    } else if (x > dom.b) {
      if (!(x <= dom.b + eta)) {
        throw InternalError("state left the invariant domain at index " + std::to_string(i) +
                            " (value " + std::to_string(x) + ")");
      }
      x = dom.b;
    } else if (std::isnan(x)) {
      throw InternalError("NaN in state at index " + std::to_string(i));
    }
  }
}

double kernel_value(int N, double t, int i, int j) {
  check_mode(N, i);
  check_mode(N, j);
  if (!(t >= 0.0)) throw std::invalid_argument("kernel_value: t must be >= 0");
  double acc = 0.0;
  for (int k = 1; k <= N - 1; ++k) {
    acc += std::exp(laplacian_eigenvalue(N, k) * t) * sine_mode(N, k, i) * sine_mode(N, k, j);
  }
  // (exp(tA))_{ij} = (1/N) sum_k e^{lambda_k t} phi_k(x_i) phi_k(x_j); the 1/N cancels.
  return acc;
}

}  // namespace lte
