#ifndef QEV_SCHRODINGER_HPP
#define QEV_SCHRODINGER_HPP

#include "qev/packet.hpp"

#include <functional>

namespace qev {

// One-dimensional spatial grid for the nonrelativistic oracle.
struct SpatialGrid1D {
  Real x0 = 0;     // leftmost sample
  Real dx = 0;
  Index n = 0;

  Real point(Index i) const { return x0 + dx * i; }
  Real length() const { return dx * n; }

  void validate() const {
    if (n < 8 || !(dx > 0)) throw Error("spatial grid too small");
  }

  bool same_as(const SpatialGrid1D& other, Real tol = 1e-12) const {
    return n == other.n && std::abs(x0 - other.x0) <= tol &&
           std::abs(dx - other.dx) <= tol;
  }
};

// Spatial wave function at a fixed time; an element of the factor space
// H = L^2(R) carried on the grid.
struct TimeProjectedState {
  Real time = 0;
  SpatialGrid1D grid;
  CVec values;

  Real norm_squared() const { return values.squaredNorm() * grid.dx; }
};

// l2 inner product with the grid measure
inline Complex state_inner(const TimeProjectedState& a,
                           const TimeProjectedState& b) {
  if (!a.grid.same_as(b.grid))
    throw DimensionMismatch("time-projected states live on different grids");
  return a.values.dot(b.values) * a.grid.dx;  // Eigen dot conjugates the left
}

using PotentialFn = std::function<Real(Real t, Real x)>;

// Unitary Schroedinger evolution oracle on the 1d grid.
//
//   split_step_fourier : Strang splitting, scalar potential only, periodic
//   crank_nicolson     : tridiagonal implicit step, Dirichlet walls, supports
//                        a vector potential through the symmetrized minimal
//                        coupling (p - A)^2 with midpoint time sampling
//
// Both steppers preserve the discrete norm to rounding; evolve() refuses
// steps whose phase per step exceeds pi (accuracy guard).
class SchrodingerOracle {
public:
  enum class Stepper { split_step_fourier, crank_nicolson };

  SchrodingerOracle(SpatialGrid1D grid, Real mass, Stepper stepper, Real dt,
                    PotentialFn scalar_potential = nullptr,
                    PotentialFn vector_potential = nullptr);

  const SpatialGrid1D& grid() const { return grid_; }
  Real mass() const { return mass_; }
  Real dt() const { return dt_; }
  Stepper stepper() const { return stepper_; }

  // evolve from state.time to t1 >= state.time in uniform internal steps
  TimeProjectedState evolve(const TimeProjectedState& initial, Real t1) const;

  // sample a Gaussian with given center, momentum and position spread
  TimeProjectedState gaussian_state(Real time, Real center, Real momentum,
                                    Real position_sigma) const;

private:
  SpatialGrid1D grid_;
  Real mass_;
  Stepper stepper_;
  Real dt_;
  PotentialFn scalar_;
  PotentialFn vector_;

  void step_split(CVec& values, Real t, Real dt) const;
  void step_crank_nicolson(CVec& values, Real t, Real dt) const;
};

}  // namespace qev

#endif
