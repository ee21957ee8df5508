#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lte {

/// Closed interval [a, b] that a solution is confined to.
struct Domain {
  double a;
  double b;

  Domain(double a_, double b_);

  bool contains(double v) const noexcept { return a <= v && v <= b; }
  double width() const noexcept { return b - a; }
};

/// Uniform space-time grid on [0,1] x [0,T].
///
/// Grid points are computed as n/N and m*T/M on every call rather than by
/// accumulation, so x(N) == 1 and t(M) == T hold exactly.
class Grid {
 public:
  Grid(int N, int M, double T);

  int N() const noexcept { return N_; }
  int M() const noexcept { return M_; }
  double T() const noexcept { return T_; }
  double dx() const noexcept { return dx_; }
  double dt() const noexcept { return dt_; }
  /// Number of interior nodes, N - 1.
  int interior() const noexcept { return N_ - 1; }

  double x(int n) const;
  double t(int m) const;

  /// Left grid point of the cell containing x; kappa(1) == 1.
  double kappa(double x) const;
  /// Left time point of the cell containing t; ell(T) == T.
  double ell(double t) const;

 private:
  int N_;
  int M_;
  double T_;
  double dx_;
  double dt_;
};

Grid build_grid(int N, int M, double T);

/// Interior values u_1..u_{N-1}; the Dirichlet nodes 0 and N are implicit.
using StateVector = std::vector<double>;

}  // namespace lte
