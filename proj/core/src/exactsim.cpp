#include "lte/exactsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lte/error.hpp"

namespace lte {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// log((1 + x0) e^r + (1 - x0) e^{-r}) = log 2 + log cosh(r + s) - log cosh(s).
double log_mixture_shape(const LampertiMachine& m, double r) {
  return kLn2 + log_cosh(r + m.shift()) - log_cosh(m.shift());
}

void check_horizon(double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("exact simulation: horizon must be positive and finite");
  }
}

void check_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("exact simulation: nu must lie in (0,1)");
}

}  // namespace

double time_changed_horizon(double kappa, double dt) {
  if (!(kappa > 0.0)) throw std::invalid_argument("time_changed_horizon: kappa must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("time_changed_horizon: dt must be > 0");
  return kappa * kappa * dt;
}

double max_exact_horizon(const LampertiMachine& machine) {
  const double span = machine.k2() - machine.k1();
  if (span <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / span;
}

EndpointMixture endpoint_mixture(const LampertiMachine& machine, double horizon, double nu) {
  check_horizon(horizon);
  if (!(nu > 0.0 && nu <= 1.0)) throw std::invalid_argument("endpoint_mixture: nu must lie in (0,1]");
  // Completing the square in  e^{+-r} e^{offset r} e^{-nu r^2 / (2T)}  gives
  // N(+-(T/nu)(1 +- offset), T/nu) with mass factors e^{T (1 +- offset)^2 / (2 nu)}.
  const double a0 = machine.offset();
  const double log_odds = 2.0 * machine.shift() + 2.0 * horizon * a0 / nu;
  EndpointMixture mix{};
  mix.weight_first = 1.0 / (1.0 + std::exp(-log_odds));
  mix.mean_first = horizon * (1.0 + a0) / nu;
  mix.mean_second = -horizon * (1.0 - a0) / nu;
  mix.variance = horizon / nu;
  return mix;
}

double log_endpoint_density(const LampertiMachine& machine, double r, double horizon) {
  return machine.drift_potential(r) - r * r / (2.0 * horizon);
}

double log_proposal_density(const LampertiMachine& machine, double r, double horizon, double nu) {
  return log_mixture_shape(machine, r) + machine.offset() * r - nu * r * r / (2.0 * horizon);
}

double log_target_density(const LampertiMachine& machine, double r, double horizon) {
  return machine.slope() * log_mixture_shape(machine, r) + machine.offset() * r -
         r * r / (2.0 * horizon);
}

double log_rejection_bound(const LampertiMachine& machine, double horizon, double nu) {
  check_nu(nu);
  const double eps = machine.slope() - 1.0;
  return eps * (kLn2 + horizon * eps / (2.0 * (1.0 - nu)));
}

namespace {

detail::EndpointPlan make_plan(const LampertiMachine& machine, double horizon,
                               const ExactSimOptions& opts) {
  check_horizon(horizon);
  detail::EndpointPlan plan;
  plan.direct = machine.sampler() == EndpointSampler::MixtureDirect;
  double nu = 1.0;
  if (plan.direct) {
    if (machine.slope() != 1.0) {
      throw std::logic_error("sample_endpoint: direct mixture sampling needs unit slope");
    }
  } else {
    check_nu(opts.nu);
    nu = opts.nu;
    plan.eps = machine.slope() - 1.0;
    plan.tail = (1.0 - nu) / (2.0 * horizon);
    plan.log_bound = log_rejection_bound(machine, horizon, nu);
  }
  const EndpointMixture mix = endpoint_mixture(machine, horizon, nu);
  plan.odds_factor = std::exp(2.0 * horizon * machine.offset() / nu);
  plan.mean_first = mix.mean_first;
  plan.mean_second = mix.mean_second;
  plan.sd = std::sqrt(mix.variance);
  plan.span = machine.k2() - machine.k1();
  plan.poisson_mean = horizon * plan.span;
  plan.poisson_p0 = std::exp(-plan.poisson_mean);
  plan.retry_cap = opts.retry_cap;
  return plan;
}

// `base` is Phi^{-1}(0) = tanh(shift) of `machine`.
double draw_endpoint(const detail::EndpointPlan& plan, const LampertiMachine& machine, double base,
                     RngStream& rng) {
  // logistic(2 shift + c) = (1 + x) e^c / ((1 + x) e^c + 1 - x),  x = tanh(shift)
  const double up = (1.0 + base) * plan.odds_factor;
  const double weight = up / (up + (1.0 - base));
  auto draw = [&] {
    const double mean = rng.uniform() < weight ? plan.mean_first : plan.mean_second;
    return mean + plan.sd * rng.normal();
  };
  if (plan.direct) return draw();
  for (std::uint64_t i = 0; i < plan.retry_cap; ++i) {
    const double r = draw();
    const double u = rng.uniform();
    // log(h~/H~_nu) = eps log S(r) - (1 - nu) r^2 / (2T). Since log S(r) >= log 2 + x r
    // (convexity) and e^z >= 1 + z, accepting on the linear lower bound is exact.
    const double quad = plan.tail * r * r + plan.log_bound;
    if (u <= 1.0 + plan.eps * (kLn2 + base * r) - quad) return r;
    const double log_ratio = plan.eps * log_mixture_shape(machine, r);
    if (std::log(u) <= log_ratio - quad) return r;
  }
  throw RetryCapExceeded("sample_endpoint: rejection sampler exceeded " +
                         std::to_string(plan.retry_cap) + " proposals");
}

// Same draws as RngStream::poisson, with exp(-mean) supplied.
std::uint64_t poisson_count(const detail::EndpointPlan& plan, RngStream& rng) {
  if (!(plan.poisson_mean > 0.0)) return 0;
  if (plan.poisson_mean >= 16.0) return rng.poisson(plan.poisson_mean);
  double p = plan.poisson_p0;
  double cdf = p;
  const double u = rng.uniform();
  std::uint64_t k = 0;
  while (u > cdf && p > 0.0) {
    ++k;
    p *= plan.poisson_mean / static_cast<double>(k);
    cdf += p;
  }
  return k;
}

// Thinning given the Poisson count; fills sk when non-null.
bool thin(const LampertiMachine& machine, double span, double y_end, double horizon,
          std::uint64_t count, RngStream& rng, Skeleton* sk) {
  if (count == 0) return true;
  std::vector<double> times(count);
  for (double& t : times) t = horizon * rng.uniform();
  std::sort(times.begin(), times.end());
  std::vector<double> values = fill_bridge(0.0, y_end, horizon, times, rng);
  bool accepted = true;
  for (std::size_t i = 0; i < count; ++i) {
    const double mark = span * rng.uniform();
    if (mark < machine.phi(values[i])) accepted = false;
  }
  if (sk) {
    sk->times = std::move(times);
    sk->values = std::move(values);
  }
  return accepted;
}

}  // namespace

double sample_endpoint(const LampertiMachine& machine, double horizon, RngStream& rng,
                       const ExactSimOptions& opts) {
  return draw_endpoint(make_plan(machine, horizon, opts), machine, machine.base(), rng);
}

double sample_endpoint(const ModelSpec& model, double x0, double horizon, double kappa,
                       RngStream& rng, const ExactSimOptions& opts) {
  return sample_endpoint(model.lamperti(x0, kappa), horizon, rng, opts);
}

std::vector<double> fill_bridge(double y_start, double y_end, double horizon,
                                std::span<const double> times, RngStream& rng) {
  check_horizon(horizon);
  std::vector<double> out;
  out.reserve(times.size());
  double s = 0.0;
  double ys = y_start;
  for (double u : times) {
    if (!(u > 0.0 && u < horizon)) throw std::domain_error("fill_bridge: time outside (0, horizon)");
    if (u < s) throw std::invalid_argument("fill_bridge: times must be increasing");
    const double rest = horizon - s;
    const double mean = ys + (u - s) / rest * (y_end - ys);
    const double var = (u - s) * (horizon - u) / rest;
    ys = mean + std::sqrt(var) * rng.normal();
    s = u;
    out.push_back(ys);
  }
  return out;
}

Skeleton thinning_accept(const LampertiMachine& machine, double y_end, double horizon,
                         RngStream& rng) {
  check_horizon(horizon);
  Skeleton sk;
  sk.horizon = horizon;
  sk.endpoint = y_end;
  const double span = machine.k2() - machine.k1();
  if (span <= 0.0) {
    sk.accepted = true;
    return sk;
  }
  const std::uint64_t count = rng.poisson(horizon * span);
  sk.accepted = thin(machine, span, y_end, horizon, count, rng, &sk);
  return sk;
}

ExactStepper::ExactStepper(const ModelSpec& model, double kappa, double dt,
                           const ExactSimOptions& opts)
    : model_(&model), kappa_(kappa), dt_(dt), opts_(opts) {
  if (!(dt > 0.0)) throw std::invalid_argument("exact_step: dt must be > 0");
  if (!model.has_noise()) {
    drift_only_ = true;
    return;
  }
  if (!(kappa > 0.0)) throw std::invalid_argument("exact_step: kappa must be > 0");
  proto_.emplace(model.lamperti(0.0, kappa));
  const double horizon = time_changed_horizon(kappa * model.noise_shape_constant(), dt);
  const double span = proto_->k2() - proto_->k1();
  // Split so every piece satisfies horizon * (k2 - k1) <= 1.
  if (span > 0.0) {
    pieces_ = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(horizon * span)));
  }
  piece_ = horizon / static_cast<double>(pieces_);
  plan_ = make_plan(*proto_, piece_, opts);
}

double ExactStepper::operator()(double x0, RngStream& rng) const {
  if (std::isnan(x0)) throw std::domain_error("exact_step: NaN start value");
  const Domain dom = model_->working_domain();
  if (!dom.contains(x0)) throw std::domain_error("exact_step: start value outside the domain");
  // f and g vanish on the boundary, which is therefore absorbing.
  if (x0 == dom.a || x0 == dom.b) return x0;
  if (drift_only_) return model_->drift_flow(x0, dt_);

  LampertiMachine machine = proto_->rebased(std::atanh(x0));
  double base = x0;
  std::uint64_t attempt = 0;
  for (std::uint64_t p = 0;; ++p) {
    double y = 0.0;
    for (std::uint64_t tries = 0;; ++tries) {
      if (tries >= opts_.retry_cap) {
        throw RetryCapExceeded("exact_step: path rejection exceeded " +
                               std::to_string(opts_.retry_cap) + " attempts");
      }
      RngStream stream = rng.child(attempt++);
      y = draw_endpoint(plan_, machine, base, stream);
      if (!std::isfinite(y)) throw InternalError("exact_step: non-finite endpoint");
      if (plan_.span <= 0.0) break;
      if (thin(machine, plan_.span, y, piece_, poisson_count(plan_, stream), stream, nullptr)) break;
    }
    if (p + 1 == pieces_) return machine.inverse(y);
    machine = machine.rebased(y);
    base = machine.base();
  }
}

double exact_step(const ModelSpec& model, double kappa, double x0, double dt, RngStream& rng,
                  const ExactSimOptions& opts) {
  if (std::isnan(x0)) throw std::domain_error("exact_step: NaN start value");
  if (!model.working_domain().contains(x0)) {
    throw std::domain_error("exact_step: start value outside the domain");
  }
  if (x0 == -1.0 || x0 == 1.0) return x0;
  return ExactStepper(model, kappa, dt, opts)(x0, rng);
}

}  // namespace lte
