#pragma once

#include <string>
#include <string_view>

#include "lte/grid.hpp"
#include "lte/lamperti.hpp"

namespace lte {

enum class ModelKind { AllenCahn, Nagumo, Sis, PureDiffusion };

struct Coefficients {
  double f;
  double g;
  double g_prime;
};

/// A semilinear SPDE  du = (u_xx + f(u)) dt + g(u) dW  with invariant domain.
///
/// Coefficients are given in working coordinates, where the boundary data
/// is homogeneous and the domain is [-1, 1]. Nagumo and SIS are mapped there
/// by z = 2(u - 1/2). In working coordinates every catalog model has
/// g(r) = c (1 - r^2); c is noise_shape_constant().
///
/// f and g are polynomials and are evaluated as such outside [-1, 1].
class ModelSpec {
 public:
  static constexpr double kDefaultNagumoGamma = 0.25;

  static ModelSpec allen_cahn();
  static ModelSpec nagumo(double gamma = kDefaultNagumoGamma);
  static ModelSpec sis();
  /// f = g = 0 on [-1, 1]: the plain heat equation. Used as a reference case.
  static ModelSpec pure_diffusion();
  /// "allen-cahn" | "nagumo" | "sis".
  static ModelSpec by_name(std::string_view name, double gamma = kDefaultNagumoGamma);

  const std::string& name() const noexcept { return name_; }
  ModelKind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }

  Domain working_domain() const { return Domain(-1.0, 1.0); }
  Domain original_domain() const;
  double boundary_value() const noexcept { return boundary_value_; }

  double f(double r) const noexcept;
  double g(double r) const noexcept;
  double g_prime(double r) const noexcept;
  /// Throws std::domain_error on NaN.
  Coefficients evaluate(double r) const;

  double noise_shape_constant() const noexcept { return noise_shape_; }
  bool has_noise() const noexcept { return noise_shape_ != 0.0; }

  /// Lamperti machinery for  dX = f(X) dt + kappa g(X) dB  started at x0 in
  /// (-1, 1). Internally uses the effective multiplier kappa * c.
  LampertiMachine lamperti(double x0, double kappa) const;
  EndpointSampler endpoint_sampler() const;

  double to_working(double u) const noexcept;
  double from_working(double z) const noexcept;

  /// u0(x) in original coordinates.
  double initial_profile(double x) const;

  /// Solution of the noise-free ODE  x' = f(x)  after time t (working coords).
  double drift_flow(double x0, double t) const;

 private:
  ModelSpec(std::string name, ModelKind kind, double gamma, double noise_shape,
            double boundary_value);

  std::string name_;
  ModelKind kind_;
  double gamma_;
  double noise_shape_;
  double boundary_value_;
};

}  // namespace lte
