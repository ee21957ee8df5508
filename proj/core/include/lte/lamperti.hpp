#pragma once

#include <cmath>

namespace lte {

/// log(cosh(y)) without overflow.
inline double log_cosh(double y) noexcept {
  const double a = std::abs(y);
  return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453;
}

enum class EndpointSampler {
  /// Accept-reject from a two-component Gaussian mixture with tail parameter nu.
  MixtureRejection,
  /// The endpoint density is itself a Gaussian mixture; sampled directly.
  MixtureDirect,
};

/// Lamperti transform of the time-changed SDE  dX = f(X)/k^2 dt + (1 - X^2) dB
/// on (-1, 1), where k is the effective noise multiplier, together with the
/// drift of the transformed unit-noise process.
///
/// For every model in the catalog the transformed drift has the form
///   alpha(r) = slope * tanh(r + shift) + offset,
/// where shift = atanh(x0) puts the base point at r = 0. Phi^{-1} is evaluated
/// as tanh(r + shift), which cannot overflow.
class LampertiMachine {
 public:
  LampertiMachine(double x0, double slope, double offset, double k1, double k2,
                  EndpointSampler sampler);

  /// Base point x0 = Phi^{-1}(0).
  double base() const noexcept { return std::tanh(shift_); }
  double shift() const noexcept { return shift_; }
  double slope() const noexcept { return slope_; }
  double offset() const noexcept { return offset_; }
  double k1() const noexcept { return k1_; }
  double k2() const noexcept { return k2_; }
  EndpointSampler sampler() const noexcept { return sampler_; }

  double forward(double x) const { return std::atanh(x) - shift_; }
  double inverse(double r) const { return std::tanh(r + shift_); }

  double alpha(double r) const { return slope_ * inverse(r) + offset_; }
  /// alpha'(r) = slope * g(Phi^{-1}(r)) with g(x) = 1 - x^2.
  double alpha_prime(double r) const;
  /// phi(r) = alpha'(r)/2 + alpha(r)^2/2 - k1, in [0, k2 - k1].
  double phi(double r) const;
  /// A(r) = int_0^r alpha(w) dw.
  double drift_potential(double r) const;

  /// Same process, base point moved to Phi^{-1}(r). The shift is advanced in
  /// transformed coordinates, so no atanh of a rounded state is taken.
  LampertiMachine rebased(double r) const;

 private:
  LampertiMachine() = default;
  double shift_ = 0.0;
  double slope_ = 1.0;
  double offset_ = 0.0;
  double k1_ = 0.0;
  double k2_ = 0.0;
  EndpointSampler sampler_ = EndpointSampler::MixtureRejection;
};

}  // namespace lte
