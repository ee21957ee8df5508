#include "lte/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lte {

Domain::Domain(double a_, double b_) : a(a_), b(b_) {
  if (!(a < b)) {
    throw std::invalid_argument("Domain requires a < b");
  }
}

Grid::Grid(int N, int M, double T) : N_(N), M_(M), T_(T) {
  if (N < 2) {
    throw std::invalid_argument("Grid: N must be >= 2 (got " + std::to_string(N) + ")");
  }
  if (M < 1) {
    throw std::invalid_argument("Grid: M must be >= 1 (got " + std::to_string(M) + ")");
  }
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw std::invalid_argument("Grid: T must be positive and finite");
  }
  dx_ = 1.0 / N_;
  dt_ = T_ / M_;
}

Grid build_grid(int N, int M, double T) { return Grid(N, M, T); }

double Grid::x(int n) const {
  if (n < 0 || n > N_) {
    throw std::out_of_range("Grid::x index out of range");
  }
  return static_cast<double>(n) / N_;
}

double Grid::t(int m) const {
  if (m < 0 || m > M_) {
    throw std::out_of_range("Grid::t index out of range");
  }
  if (m == M_) return T_;
  return static_cast<double>(m) * T_ / M_;
}

namespace {

// Largest k in [0, count] with point(k) <= v. The floor of v*count is only a
// first guess: (k/count)*count need not round back to k.
template <class Point>
int left_index(double v, int count, Point point) {
  int k = static_cast<int>(std::floor(v * count));
  if (k < 0) k = 0;
  if (k > count) k = count;
  while (k > 0 && point(k) > v) --k;
  while (k < count && point(k + 1) <= v) ++k;
  return k;
}

}  // namespace

double Grid::kappa(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error("kappa: x must lie in [0,1]");
  }
  return x(left_index(v, N_, [this](int k) { return x(k); }));
}

double Grid::ell(double v) const {
  if (!(v >= 0.0 && v <= T_)) {
    throw std::domain_error("ell: t must lie in [0,T]");
  }
  return t(left_index(v, M_, [this](int k) { return t(k); }));
}

}  // namespace lte
