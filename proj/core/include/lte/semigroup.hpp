#pragma once

#include <memory>
#include <span>
#include <vector>

#include "lte/grid.hpp"

namespace lte {

/// j-th eigenvalue of N^2 D^N, where D^N = tridiag(1, -2, 1) of size N-1:
/// -4 N^2 sin^2(j pi / (2N)), j = 1..N-1.
double laplacian_eigenvalue(int N, int j);

/// Eigenvector component phi_j(x_n) = sqrt(2) sin(j pi n / N).
double sine_mode(int N, int j, int n);

class HeatPropagator;

/// Applies the heat semigroup exp(t N^2 D^N) in the sine eigenbasis.
///
/// Immutable after construction; safe to share across threads. Below
/// kFastThreshold the transform is an explicit O(N^2) product with the
/// orthonormal sine matrix, at and above it an FFTW DST-I.
class SemigroupApplicator {
 public:
  static constexpr int kFastThreshold = 128;

  explicit SemigroupApplicator(int N, int fast_threshold = kFastThreshold);
  ~SemigroupApplicator();
  SemigroupApplicator(const SemigroupApplicator&) = delete;
  SemigroupApplicator& operator=(const SemigroupApplicator&) = delete;

  int N() const noexcept { return N_; }
  int size() const noexcept { return N_ - 1; }
  bool uses_fast_transform() const noexcept { return plan_ != nullptr; }
  std::span<const double> eigenvalues() const noexcept { return eig_; }

  StateVector apply(double t, std::span<const double> v) const;
  void apply(double t, std::span<const double> v, std::span<double> out) const;

  /// Precomputes the spectral decay factors for a fixed t.
  HeatPropagator propagator(double t) const;

  /// out = Q in with Q_{jn} = sqrt(2/N) sin(j n pi / N). Q is symmetric and
  /// orthogonal, so it is its own inverse.
  void sine_transform(std::span<const double> in, std::span<double> out) const;

 private:
  friend class HeatPropagator;
  void apply_factors(std::span<const double> factors, std::span<const double> v,
                     std::span<double> out) const;

  int N_;
  std::vector<double> eig_;
  std::vector<double> basis_;  // row-major (N-1)x(N-1), direct path only
  void* plan_ = nullptr;       // fftw_plan, fast path only
};

/// exp(t N^2 D^N) for one fixed t.
class HeatPropagator {
 public:
  double t() const noexcept { return t_; }
  void apply(std::span<const double> v, std::span<double> out) const;
  StateVector apply(std::span<const double> v) const;

 private:
  friend class SemigroupApplicator;
  HeatPropagator(const SemigroupApplicator& app, double t);
  const SemigroupApplicator* app_;
  double t_;
  std::vector<double> factors_;
};

/// Process-wide cache of applicators keyed by N.
std::shared_ptr<const SemigroupApplicator> shared_applicator(int N);

StateVector apply_semigroup(const SemigroupApplicator& app, double t, std::span<const double> v);

/// Slack allowed outside [a,b]: 64 ulp of max(|a|, |b|, 1).
double clip_tolerance(const Domain& dom);

/// True iff every entry lies in [a - eta, b + eta], eta = clip_tolerance(dom).
bool domain_clip_check(std::span<const double> v, const Domain& dom);

/// Clamps entries that are outside [a,b] by at most clip_tolerance(dom).
/// Larger excursions throw InternalError.
void clip_to_domain(std::span<double> v, const Domain& dom);

/// G^N(t, x_i, x_j) = N * (exp(t N^2 D^N))_{ij}.
double kernel_value(int N, double t, int i, int j);

}  // namespace lte
