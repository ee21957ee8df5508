#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lte/exactsim.hpp"
#include "lte/grid.hpp"
#include "lte/models.hpp"
#include "lte/rng.hpp"
#include "lte/semigroup.hpp"

namespace lte {

enum class Scheme { LTE, EM, SEM, EXP };

Scheme parse_scheme(std::string_view name);
std::string_view scheme_name(Scheme s) noexcept;

/// One step of length grid.dt() for each scheme. `noise_scale` multiplies g
/// (the experiment lambda). The stream passed in is the per-step stream;
/// component n draws from rng.child(n).
///
/// LTE: exact sampling of the diagonal noise/reaction system with multiplier
/// sqrt(N) * noise_scale, componentwise, followed by the exact heat flow.
StateVector lte_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const SemigroupApplicator& applicator, const RngStream& rng,
                     double noise_scale = 1.0, const ExactSimOptions& opts = {});
StateVector em_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                    const RngStream& rng, double noise_scale = 1.0);
/// Implicit heat term, explicit drift and noise evaluated at the current iterate.
StateVector sem_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const RngStream& rng, double noise_scale = 1.0);
StateVector exp_step(const ModelSpec& model, const Grid& grid, std::span<const double> state,
                     const SemigroupApplicator& applicator, const RngStream& rng,
                     double noise_scale = 1.0);

/// Solves a tridiagonal system with constant bands (sub = super = off) by the
/// Thomas algorithm. rhs is overwritten with the solution.
void solve_symmetric_tridiagonal(double diag, double off, std::span<double> rhs);

/// Advances one path step by step, reusing the heat propagator and buffers.
/// Not thread-safe; use one per sample.
class Stepper {
 public:
  Stepper(Scheme scheme, const ModelSpec& model, const Grid& grid, double noise_scale,
          const ExactSimOptions& opts = {});

  /// Replaces `state` (values at t_m) with values at t_{m+1}.
  /// `path` is the sample's stream; step m draws from path.child(m).
  void step(int m, std::span<double> state, const RngStream& path);

  Scheme scheme() const noexcept { return scheme_; }

 private:
  Scheme scheme_;
  const ModelSpec* model_;
  Grid grid_;
  double noise_scale_;
  std::shared_ptr<const SemigroupApplicator> applicator_;
  std::optional<HeatPropagator> propagator_;
  std::optional<ExactStepper> exact_;
  std::vector<double> scratch_;
};

/// u0(kappa^N(x_n)) for n = 1..N-1, mapped to working coordinates.
StateVector initial_state(const ModelSpec& model, const Grid& grid);

/// Stream id of sample `sample_id` of a path experiment with `scheme`.
/// Different schemes never share noise.
std::uint64_t path_stream_id(Scheme scheme, std::uint64_t sample_id);

/// Called with (m, state at t_m) for m = 0..M; returning false stops the path.
using PathObserver = std::function<bool(int m, std::span<const double> state)>;

/// Runs one path from the initial profile; returns the last step index reached.
int run_path(Scheme scheme, const ModelSpec& model, const Grid& grid, double noise_scale,
             const RngStream& path, const PathObserver& observer, const ExactSimOptions& opts = {});

struct Trajectory {
  Grid grid;
  std::vector<StateVector> states;  // working coordinates, M + 1 entries
  std::string scheme;
  std::string model;
  double lambda = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t sample_id = 0;
};

Trajectory simulate_path(Scheme scheme, const ModelSpec& model, const Grid& grid, double lambda,
                         std::uint64_t seed, std::uint64_t sample_id,
                         const ExactSimOptions& opts = {});

}  // namespace lte
