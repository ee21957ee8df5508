#include "lte/schemes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lte/error.hpp"

namespace lte {

namespace {

void check_state(const Grid& grid, std::span<const double> state) {
  if (static_cast<int>(state.size()) != grid.interior()) {
    throw std::invalid_argument("step: state size " + std::to_string(state.size()) +
                                " does not match N - 1 = " + std::to_string(grid.interior()));
  }
}

void check_finite(std::span<const double> v, int m) {
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (!std::isfinite(v[n])) {
      throw NonFiniteState("non-finite value at step " + std::to_string(m) + ", node " +
                               std::to_string(n + 1),
                           m, static_cast<int>(n + 1));
    }
  }
}

// u + dt f(u) + sqrt(N) lambda g(u) dW, the explicit part shared by the baselines.
void explicit_increment(const ModelSpec& model, const Grid& grid, std::span<const double> u,
                        const RngStream& rng, double noise_scale, std::span<double> out) {
  const double dt = grid.dt();
  const double amp = std::sqrt(static_cast<double>(grid.N())) * noise_scale * std::sqrt(dt);
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (std::isnan(u[n])) throw NonFiniteState("NaN in state", -1, static_cast<int>(n + 1));
    double v = u[n] + dt * model.f(u[n]);
    if (amp != 0.0 && model.has_noise()) {
      RngStream s = rng.child(n);
      v += amp * model.g(u[n]) * s.normal();
    }
    out[n] = v;
  }
}

void heat_explicit(const Grid& grid, std::span<const double> u, std::span<double> out) {
  const double r = grid.dt() * static_cast<double>(grid.N()) * grid.N();
  const std::size_t k = u.size();
  for (std::size_t n = 0; n < k; ++n) {
    const double left = n > 0 ? u[n - 1] : 0.0;
    const double right = n + 1 < k ? u[n + 1] : 0.0;
    out[n] += r * (left - 2.0 * u[n] + right);
  }
}

void exact_substep(const ModelSpec& model, const Grid& grid, const ExactStepper* stepper,
                   std::span<const double> u, const RngStream& rng, std::span<double> out) {
  const Domain dom = model.working_domain();
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (!dom.contains(u[n])) {
      throw InternalError("lte_step: input value " + std::to_string(u[n]) + " at node " +
                          std::to_string(n + 1) + " outside the domain");
    }
    if (stepper == nullptr) {
      out[n] = model.drift_flow(u[n], grid.dt());
    } else {
      RngStream s = rng.child(n);
      out[n] = (*stepper)(u[n], s);
    }
  }
}

std::optional<ExactStepper> make_exact_stepper(const ModelSpec& model, const Grid& grid,
                                               double noise_scale, const ExactSimOptions& opts) {
  const double kappa = std::sqrt(static_cast<double>(grid.N())) * noise_scale;
  if (kappa == 0.0 || !model.has_noise()) return std::nullopt;
  return ExactStepper(model, kappa, grid.dt(), opts);
}

}  // namespace

Scheme parse_scheme(std::string_view name) {
  if (name == "lte") return Scheme::LTE;
  if (name == "em") return Scheme::EM;
  if (name == "sem") return Scheme::SEM;
  if (name == "exp") return Scheme::EXP;
  throw std::invalid_argument("unknown scheme '" + std::string(name) +
                              "' (expected lte | em | sem | exp)");
}

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::LTE:
      return "lte";
    case Scheme::EM:
      return "em";
    case Scheme::SEM:
      return "sem";
    case Scheme::EXP:
      return "exp";
  }
  return "?";
}

void solve_symmetric_tridiagonal(double diag, double off, std::span<double> rhs) {
  const std::size_t k = rhs.size();
  if (k == 0) return;
  std::vector<double> c(k);
  double denom = diag;
  if (denom == 0.0) throw InternalError("tridiagonal solve: zero pivot");
  c[0] = off / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < k; ++i) {
    denom = diag - off * c[i - 1];
    if (denom == 0.0 || !std::isfinite(denom)) throw InternalError("tridiagonal solve: zero pivot");
    c[i] = off / denom;
    rhs[i] = (rhs[i] - off * rhs[i - 1]) / denom;
  }
  for (std::size_t i = k - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

StateVector lte_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const SemigroupApplicator& applicator, const RngStream& rng,
                     double noise_scale, const ExactSimOptions& opts) {
  check_state(grid, state);
  StateVector mid(state.size());
  const auto stepper = make_exact_stepper(model, grid, noise_scale, opts);
  exact_substep(model, grid, stepper ? &*stepper : nullptr, state, rng, mid);
  StateVector out = applicator.apply(grid.dt(), mid);
  clip_to_domain(out, model.working_domain());
  return out;
}

StateVector em_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                    const RngStream& rng, double noise_scale) {
  check_state(grid, state);
  StateVector out(state.size());
  explicit_increment(model, grid, state, rng, noise_scale, out);
  heat_explicit(grid, state, out);
  check_finite(out, -1);
  return out;
}

StateVector sem_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const RngStream& rng, double noise_scale) {
  check_state(grid, state);
  StateVector out(state.size());
  explicit_increment(model, grid, state, rng, noise_scale, out);
  const double r = grid.dt() * static_cast<double>(grid.N()) * grid.N();
  solve_symmetric_tridiagonal(1.0 + 2.0 * r, -r, out);
  check_finite(out, -1);
  return out;
}

StateVector exp_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const SemigroupApplicator& applicator, const RngStream& rng,
                     double noise_scale) {
  check_state(grid, state);
  StateVector mid(state.size());
  explicit_increment(model, grid, state, rng, noise_scale, mid);
  StateVector out = applicator.apply(grid.dt(), mid);
  check_finite(out, -1);
  return out;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(Scheme scheme, const ModelSpec& model, const Grid& grid, double noise_scale,
                 const ExactSimOptions& opts)
    : scheme_(scheme),
      model_(&model),
      grid_(grid),
      noise_scale_(noise_scale),
      scratch_(static_cast<std::size_t>(grid.interior())) {
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw std::invalid_argument("noise scale must be finite and >= 0");
  }
  if (scheme == Scheme::LTE || scheme == Scheme::EXP) {
    applicator_ = shared_applicator(grid.N());
    propagator_.emplace(applicator_->propagator(grid.dt()));
  }
  if (scheme == Scheme::LTE) exact_ = make_exact_stepper(model, grid, noise_scale, opts);
}

void Stepper::step(int m, std::span<double> state, const RngStream& path) {
  check_state(grid_, state);
  const RngStream step_stream = path.child(static_cast<std::uint64_t>(m));
  try {
    switch (scheme_) {
      case Scheme::LTE:
        exact_substep(*model_, grid_, exact_ ? &*exact_ : nullptr, state, step_stream, scratch_);
        propagator_->apply(scratch_, state);
        clip_to_domain(state, model_->working_domain());
        return;
      case Scheme::EM:
        explicit_increment(*model_, grid_, state, step_stream, noise_scale_, scratch_);
        heat_explicit(grid_, state, scratch_);
        std::copy(scratch_.begin(), scratch_.end(), state.begin());
        break;
      case Scheme::SEM: {
        explicit_increment(*model_, grid_, state, step_stream, noise_scale_, state);
        const double r = grid_.dt() * static_cast<double>(grid_.N()) * grid_.N();
        solve_symmetric_tridiagonal(1.0 + 2.0 * r, -r, state);
        break;
      }
      case Scheme::EXP:
        explicit_increment(*model_, grid_, state, step_stream, noise_scale_, scratch_);
        propagator_->apply(scratch_, state);
        break;
    }
  } catch (const NonFiniteState& e) {
    throw NonFiniteState("non-finite value at step " + std::to_string(m) + ", node " +
                             std::to_string(e.index()),
                         m, e.index());
  }
  check_finite(state, m);
}

StateVector initial_state(const ModelSpec& model, const Grid& grid) {
  StateVector u(static_cast<std::size_t>(grid.interior()));
  for (int n = 1; n < grid.N(); ++n) {
    u[n - 1] = model.to_working(model.initial_profile(grid.kappa(grid.x(n))));
  }
  return u;
}

std::uint64_t path_stream_id(Scheme scheme, std::uint64_t sample_id) {
  if (sample_id >> 32) throw std::out_of_range("sample id must fit in 32 bits");
  return ((static_cast<std::uint64_t>(scheme) + 1) << 32) | sample_id;
}

int run_path(Scheme scheme, const ModelSpec& model, const Grid& grid, double noise_scale,
             const RngStream& path, const PathObserver& observer, const ExactSimOptions& opts) {
  StateVector u = initial_state(model, grid);
  if (!observer(0, u)) return 0;
  Stepper stepper(scheme, model, grid, noise_scale, opts);
  for (int m = 0; m < grid.M(); ++m) {
    stepper.step(m, u, path);
    if (!observer(m + 1, u)) return m + 1;
  }
  return grid.M();
}

Trajectory simulate_path(Scheme scheme, const ModelSpec& model, const Grid& grid, double lambda,
                         std::uint64_t seed, std::uint64_t sample_id,
                         const ExactSimOptions& opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("simulate_path: lambda must be > 0");
  Trajectory tr{grid, {}, std::string(scheme_name(scheme)), model.name(), lambda, seed, sample_id};
  tr.states.reserve(static_cast<std::size_t>(grid.M()) + 1);
  const RngStream path = derive_stream(seed, path_stream_id(scheme, sample_id));
  run_path(scheme, model, grid, lambda, path,
           [&tr](int, std::span<const double> s) {
             tr.states.emplace_back(s.begin(), s.end());
             return true;
           },
           opts);
  return tr;
}

}  // namespace lte
