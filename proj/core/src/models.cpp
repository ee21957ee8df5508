#include "lte/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace lte {

// ---------------------------------------------------------------------------
// LampertiMachine

LampertiMachine::LampertiMachine(double x0, double slope, double offset, double k1, double k2,
                                 EndpointSampler sampler)
    : slope_(slope), offset_(offset), k1_(k1), k2_(k2), sampler_(sampler) {
  if (!(x0 > -1.0 && x0 < 1.0)) {
    throw std::domain_error("LampertiMachine: base point must lie strictly inside (-1, 1)");
  }
  if (!(k2 >= k1)) throw std::invalid_argument("LampertiMachine: need k1 <= k2");
  shift_ = std::atanh(x0);
}

double LampertiMachine::alpha_prime(double r) const {
  // 1 - tanh^2 = sech^2; the sech form keeps precision when tanh saturates.
  const double c = std::cosh(r + shift_);
  return slope_ / (c * c);
}

double LampertiMachine::phi(double r) const {
  const double a = alpha(r);
  return 0.5 * alpha_prime(r) + 0.5 * a * a - k1_;
}

double LampertiMachine::drift_potential(double r) const {
  return slope_ * (log_cosh(r + shift_) - log_cosh(shift_)) + offset_ * r;
}

LampertiMachine LampertiMachine::rebased(double r) const {
  LampertiMachine out = *this;
  out.shift_ = shift_ + r;
  return out;
}

// ---------------------------------------------------------------------------
// ModelSpec

ModelSpec::ModelSpec(std::string name, ModelKind kind, double gamma, double noise_shape,
                     double boundary_value)
    : name_(std::move(name)),
      kind_(kind),
      gamma_(gamma),
      noise_shape_(noise_shape),
      boundary_value_(boundary_value) {}

ModelSpec ModelSpec::allen_cahn() { return ModelSpec("allen-cahn", ModelKind::AllenCahn, 0.0, 1.0, 0.0); }

ModelSpec ModelSpec::nagumo(double gamma) {
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("nagumo: gamma must lie in (0, 1/2)");
  }
  return ModelSpec("nagumo", ModelKind::Nagumo, gamma, 0.5, 0.5);
}

ModelSpec ModelSpec::sis() { return ModelSpec("sis", ModelKind::Sis, 0.0, 0.5, 0.5); }

ModelSpec ModelSpec::pure_diffusion() {
  return ModelSpec("pure-diffusion", ModelKind::PureDiffusion, 0.0, 0.0, 0.0);
}

ModelSpec ModelSpec::by_name(std::string_view name, double gamma) {
  if (name == "allen-cahn") return allen_cahn();
  if (name == "nagumo") return nagumo(gamma);
  if (name == "sis") return sis();
  throw std::invalid_argument("unknown model '" + std::string(name) +
                              "' (expected allen-cahn | nagumo | sis)");
}

Domain ModelSpec::original_domain() const {
  switch (kind_) {
    case ModelKind::Nagumo:
    case ModelKind::Sis:
      return Domain(0.0, 1.0);
    default:
      return Domain(-1.0, 1.0);
  }
}

double ModelSpec::f(double r) const noexcept {
  switch (kind_) {
    case ModelKind::AllenCahn:
      return r - r * r * r;
    case ModelKind::Nagumo:
      return 0.25 * (1.0 + r) * (1.0 - r) * (1.0 - 2.0 * gamma_ + r);
    case ModelKind::Sis:
      return 0.5 * (1.0 + r) * (1.0 - r);
    case ModelKind::PureDiffusion:
      return 0.0;
  }
  return 0.0;
}

double ModelSpec::g(double r) const noexcept { return noise_shape_ * (1.0 - r) * (1.0 + r); }

double ModelSpec::g_prime(double r) const noexcept { return -2.0 * noise_shape_ * r; }

Coefficients ModelSpec::evaluate(double r) const {
  if (std::isnan(r)) throw std::domain_error("evaluate_coefficients: NaN argument");
  return {f(r), g(r), g_prime(r)};
}

EndpointSampler ModelSpec::endpoint_sampler() const {
  switch (kind_) {
    case ModelKind::AllenCahn:
    case ModelKind::Nagumo:
      return EndpointSampler::MixtureRejection;
    case ModelKind::Sis:
      return EndpointSampler::MixtureDirect;
    case ModelKind::PureDiffusion:
      break;
  }
  throw std::logic_error("model '" + name_ + "' has no endpoint sampler");
}

LampertiMachine ModelSpec::lamperti(double x0, double kappa) const {
  if (!(kappa > 0.0)) throw std::invalid_argument("lamperti: kappa must be > 0");
  if (!has_noise()) throw std::logic_error("model '" + name_ + "' has no noise to transform");

  // With effective multiplier k = kappa c the transformed drift is
  //   alpha = x + k^-2 f(x)/(1 - x^2),  x = Phi^{-1}(r),
  // and f/(1 - x^2) is affine in x for all three models.
  const double k = kappa * noise_shape_;
  const double inv_k2 = 1.0 / (k * k);
  double slope = 1.0;
  double offset = 0.0;
  double k2 = 0.0;
  switch (kind_) {
    case ModelKind::AllenCahn: {
      slope = 1.0 + inv_k2;
      k2 = 0.5 * slope + 0.5 * slope * slope;
      break;
    }
    case ModelKind::Nagumo: {
      // In terms of kappa (not k): slope = 1 + 1/kappa^2, offset = (1 - 2 gamma)/kappa^2.
      const double il2 = 0.25 * inv_k2;
      slope = 1.0 + il2;
      offset = (1.0 - 2.0 * gamma_) * il2;
      const double hi = 1.0 + (2.0 - 2.0 * gamma_) * il2;
      const double lo = 1.0 + 2.0 * gamma_ * il2;
      k2 = 0.5 * slope + 0.5 * std::max(hi * hi, lo * lo);
      break;
    }
    case ModelKind::Sis: {
      offset = 0.5 * inv_k2;
      const double top = 1.0 + offset;
      k2 = 0.5 * top * top + 0.5;
      break;
    }
    case ModelKind::PureDiffusion:
      break;
  }
  return LampertiMachine(x0, slope, offset, 0.0, k2, endpoint_sampler());
}

double ModelSpec::to_working(double u) const noexcept {
  switch (kind_) {
    case ModelKind::Nagumo:
    case ModelKind::Sis:
      return 2.0 * (u - 0.5);
    default:
      return u;
  }
}

double ModelSpec::from_working(double z) const noexcept {
  switch (kind_) {
    case ModelKind::Nagumo:
    case ModelKind::Sis:
      return 0.5 * z + 0.5;
    default:
      return z;
  }
}

double ModelSpec::initial_profile(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("initial_profile: x must lie in [0,1]");
  switch (kind_) {
    case ModelKind::AllenCahn:
    case ModelKind::PureDiffusion:
      return std::sin(2.0 * std::numbers::pi * x);
    case ModelKind::Nagumo:
    case ModelKind::Sis:
      return 0.5 * (std::sin(std::numbers::pi * x) + 0.5);
  }
  return 0.0;
}

double ModelSpec::drift_flow(double x0, double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("drift_flow: t must be >= 0");
  switch (kind_) {
    case ModelKind::PureDiffusion:
      return x0;
    case ModelKind::AllenCahn: {
      // x' = x - x^3:  x(t) = x0 e^t / sqrt(1 + x0^2 (e^{2t} - 1)).
      const double e2 = std::expm1(2.0 * t);
      return x0 * std::exp(t) / std::sqrt(1.0 + x0 * x0 * e2);
    }
    case ModelKind::Sis: {
      // z' = (1 - z^2)/2:  z(t) = tanh(t/2 + atanh z0); z0 = +-1 are fixed points.
      if (x0 >= 1.0 || x0 <= -1.0) return x0;
      return std::tanh(0.5 * t + std::atanh(x0));
    }
    case ModelKind::Nagumo: {
      const int steps = std::max(16, static_cast<int>(std::ceil(t / 1e-3)));
      const double h = t / steps;
      double x = x0;
      for (int i = 0; i < steps; ++i) {
        const double a = f(x);
        const double b = f(x + 0.5 * h * a);
        const double c = f(x + 0.5 * h * b);
        const double d = f(x + h * c);
        x += h / 6.0 * (a + 2.0 * b + 2.0 * c + d);
      }
      return std::clamp(x, -1.0, 1.0);
    }
  }
  return x0;
}

}  // namespace lte
