#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lte/lamperti.hpp"
#include "lte/models.hpp"
#include "lte/rng.hpp"

namespace lte {

struct ExactSimOptions {
  /// Tail parameter of the Gaussian-mixture proposal, in (0, 1).
  double nu = 0.5;
  /// Retry cap for each rejection loop; hitting it indicates a wrong bound.
  std::uint64_t retry_cap = 1'000'000;
};

/// Candidate path of the transformed process on [0, horizon] started at 0.
struct Skeleton {
  double horizon = 0.0;
  std::vector<double> times;   // Poisson points in (0, horizon), increasing
  std::vector<double> values;  // bridge values at `times`
  double endpoint = 0.0;
  bool accepted = false;
};

/// Gaussian-mixture parameters used for the endpoint proposal (nu < 1) or
/// the exact endpoint law (nu = 1, when the slope is 1).
struct EndpointMixture {
  double weight_first;  // probability of the first component
  double mean_first;
  double mean_second;
  double variance;
};

/// Horizon of the unit-diffusion problem equivalent to integrating an SDE
/// with constant noise multiplier kappa over dt: kappa^2 dt.
double time_changed_horizon(double kappa, double dt);

/// Largest horizon for which the thinning acceptance is at least e^-1:
/// 1 / (k2 - k1), or +inf when phi is identically zero.
double max_exact_horizon(const LampertiMachine& machine);

EndpointMixture endpoint_mixture(const LampertiMachine& machine, double horizon, double nu);

/// log of the unnormalized endpoint density  exp(A(r) - r^2/(2 horizon)).
double log_endpoint_density(const LampertiMachine& machine, double r, double horizon);

/// log of the unnormalized proposal  S(r) e^{offset r} e^{-nu r^2/(2 horizon)},
/// S(r) = (1 + x0) e^r + (1 - x0) e^{-r}.
double log_proposal_density(const LampertiMachine& machine, double r, double horizon, double nu);

/// log of the unnormalized target h~(r) = S(r)^slope e^{offset r} e^{-r^2/(2 horizon)}.
/// Differs from log_endpoint_density by a constant only.
double log_target_density(const LampertiMachine& machine, double r, double horizon);

/// log of K~ = (2 e^{horizon eps / (2 (1 - nu))})^eps with eps = slope - 1,
/// an upper bound of h~/H~_nu over the real line.
double log_rejection_bound(const LampertiMachine& machine, double horizon, double nu);

/// Draws r from the endpoint density  h(r) ~ exp(A(r) - r^2/(2 horizon)).
double sample_endpoint(const LampertiMachine& machine, double horizon, RngStream& rng,
                       const ExactSimOptions& opts = {});
double sample_endpoint(const ModelSpec& model, double x0, double horizon, double kappa,
                       RngStream& rng, const ExactSimOptions& opts = {});

/// Brownian bridge from (0, y_start) to (horizon, y_end), sampled at the
/// increasing `times` in (0, horizon) by sequential conditioning.
std::vector<double> fill_bridge(double y_start, double y_end, double horizon,
                                std::span<const double> times, RngStream& rng);

/// Poisson thinning test of a bridge from 0 to y_end against phi.
Skeleton thinning_accept(const LampertiMachine& machine, double y_end, double horizon,
                         RngStream& rng);

/// One step of dX = f(X) dt + kappa g(X) dB of length dt, exact in law.
/// x0 on the boundary is returned unchanged. Attempt k of the accept-reject
/// loop draws from rng.child(k), so rng must have a free label slot.
double exact_step(const ModelSpec& model, double kappa, double x0, double dt, RngStream& rng,
                  const ExactSimOptions& opts = {});

namespace detail {

/// Start-independent constants of the endpoint sampler and the thinning.
struct EndpointPlan {
  bool direct = false;
  double odds_factor = 1.0;  // exp(log-odds of the first component - 2 shift)
  double mean_first = 0.0;
  double mean_second = 0.0;
  double sd = 0.0;
  double eps = 0.0;
  double tail = 0.0;
  double log_bound = 0.0;
  double span = 0.0;
  double poisson_mean = 0.0;
  double poisson_p0 = 1.0;
  std::uint64_t retry_cap = 0;
};

}  // namespace detail

/// exact_step for fixed (model, kappa, dt) with the start-independent
/// constants computed once. Produces the same draws as exact_step.
class ExactStepper {
 public:
  ExactStepper(const ModelSpec& model, double kappa, double dt, const ExactSimOptions& opts = {});

  double operator()(double x0, RngStream& rng) const;

  /// Number of sub-horizons the time-changed horizon is split into.
  std::uint64_t pieces() const noexcept { return pieces_; }
  double piece_horizon() const noexcept { return piece_; }

 private:
  const ModelSpec* model_;
  double kappa_;
  double dt_;
  ExactSimOptions opts_;
  bool drift_only_ = false;
  std::uint64_t pieces_ = 1;
  double piece_ = 0.0;
  std::optional<LampertiMachine> proto_;
  detail::EndpointPlan plan_;
};

}  // namespace lte
