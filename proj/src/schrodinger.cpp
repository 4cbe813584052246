#include "qev/schrodinger.hpp"

#include <unsupported/Eigen/FFT>

namespace qev {

SchrodingerOracle::SchrodingerOracle(SpatialGrid1D grid, Real mass,
                                     Stepper stepper, Real dt,
                                     PotentialFn scalar_potential,
                                     PotentialFn vector_potential)
    : grid_(grid),
      mass_(mass),
      stepper_(stepper),
      dt_(dt),
      scalar_(std::move(scalar_potential)),
      vector_(std::move(vector_potential)) {
  grid_.validate();
  if (!(mass > 0)) throw Error("oracle mass must be positive");
  if (!(dt > 0)) throw Error("oracle time step must be positive");
  if (stepper_ == Stepper::split_step_fourier && vector_)
    throw Error("split-step stepper handles scalar potentials only");
}

TimeProjectedState SchrodingerOracle::gaussian_state(Real time, Real center,
                                                     Real momentum,
                                                     Real position_sigma) const {
  TimeProjectedState state;
  state.time = time;
  state.grid = grid_;
  state.values.resize(grid_.n);
  const Real norm = std::pow(2.0 * pi * position_sigma * position_sigma, -0.25);
  for (Index i = 0; i < grid_.n; ++i) {
    const Real x = grid_.point(i) - center;
    state.values(i) =
        norm * std::exp(Complex(-x * x / (4.0 * position_sigma * position_sigma),
                                momentum * x));
  }
  return state;
}

void SchrodingerOracle::step_split(CVec& values, Real t, Real dt) const {
  const Index n = grid_.n;
  const Real t_mid = t + 0.5 * dt;

  if (scalar_) {
    for (Index i = 0; i < n; ++i)
      values(i) *= std::exp(Complex(0, -0.5 * dt * scalar_(t_mid, grid_.point(i))));
  }

  static thread_local Eigen::FFT<Real> fft;
  CVec freq(n);
  fft.fwd(freq, values);
  const Real dk = 2.0 * pi / grid_.length();
  for (Index j = 0; j < n; ++j) {
    const Real k = dk * (j <= n / 2 ? j : j - n);
    freq(j) *= std::exp(Complex(0, -dt * k * k / (2.0 * mass_)));
  }
  fft.inv(values, freq);

  if (scalar_) {
    for (Index i = 0; i < n; ++i)
      values(i) *= std::exp(Complex(0, -0.5 * dt * scalar_(t_mid, grid_.point(i))));
  }
}

void SchrodingerOracle::step_crank_nicolson(CVec& values, Real t,
                                            Real dt) const {
  // (1 + i dt/2 H) psi_new = (1 - i dt/2 H) psi_old with H sampled at the
  // midpoint time; H uses the symmetrized minimal coupling, so the
  // tridiagonal matrix is Hermitian and the step is unitary
  const Index n = grid_.n;
  const Real t_mid = t + 0.5 * dt;
  const Real dx = grid_.dx;
  const Real kin = 1.0 / (2.0 * mass_ * dx * dx);

  CVec lower(n), diag(n), upper(n);
  for (Index j = 0; j < n; ++j) {
    const Real x = grid_.point(j);
    const Real u = scalar_ ? scalar_(t_mid, x) : 0.0;
    const Real aj = vector_ ? vector_(t_mid, x) : 0.0;
    const Real a_up = vector_ && j + 1 < n ? vector_(t_mid, grid_.point(j + 1)) : 0.0;
    const Real a_dn = vector_ && j > 0 ? vector_(t_mid, grid_.point(j - 1)) : 0.0;

    diag(j) = Complex(2.0 * kin + u + aj * aj / (2.0 * mass_), 0);
    // coefficient of psi_{j+1}: -kin + i (A_{j+1} + A_j) / (4 m dx)
    upper(j) = Complex(-kin, (a_up + aj) / (4.0 * mass_ * dx));
    // coefficient of psi_{j-1}: -kin - i (A_{j-1} + A_j) / (4 m dx)
    lower(j) = Complex(-kin, -(a_dn + aj) / (4.0 * mass_ * dx));
  }

  const Complex half_step(0, 0.5 * dt);
  // right-hand side: (1 - i dt/2 H) psi
  CVec rhs(n);
  for (Index j = 0; j < n; ++j) {
    Complex h = diag(j) * values(j);
    if (j > 0) h += lower(j) * values(j - 1);
    if (j + 1 < n) h += upper(j) * values(j + 1);
    rhs(j) = values(j) - half_step * h;
  }

  // Thomas solve of (1 + i dt/2 H)
  CVec a(n), b(n), c(n);
  for (Index j = 0; j < n; ++j) {
    a(j) = half_step * lower(j);
    b(j) = Complex(1, 0) + half_step * diag(j);
    c(j) = half_step * upper(j);
  }
  CVec cp(n), dp(n);
  cp(0) = c(0) / b(0);
  dp(0) = rhs(0) / b(0);
  for (Index j = 1; j < n; ++j) {
    const Complex denom = b(j) - a(j) * cp(j - 1);
    cp(j) = c(j) / denom;
    dp(j) = (rhs(j) - a(j) * dp(j - 1)) / denom;
  }
  values(n - 1) = dp(n - 1);
  for (Index j = n - 2; j >= 0; --j) values(j) = dp(j) - cp(j) * values(j + 1);
}

TimeProjectedState SchrodingerOracle::evolve(const TimeProjectedState& initial,
                                             Real t1) const {
  if (!initial.grid.same_as(grid_))
    throw DimensionMismatch("state grid does not match the oracle grid");
  if (t1 < initial.time)
    throw StabilityError("evolution runs forward: t1 must be >= t0");
  if (t1 == initial.time) return initial;  // U(t,t) = 1

  const Real span = t1 - initial.time;
  const Index n_steps = std::max<Index>(1, static_cast<Index>(
                                               std::ceil(span / dt_ - 1e-12)));
  const Real dt = span / static_cast<Real>(n_steps);

  // accuracy guard: the per-step potential phase must stay below pi
  if (scalar_) {
    Real max_u = 0;
    for (Index i = 0; i < grid_.n; ++i)
      max_u = std::max(max_u, std::abs(scalar_(initial.time, grid_.point(i))));
    if (dt * max_u > pi)
      throw StabilityError("time step too large for the potential strength");
  }

  TimeProjectedState state = initial;
  for (Index s = 0; s < n_steps; ++s) {
    const Real t = initial.time + dt * static_cast<Real>(s);
    if (stepper_ == Stepper::split_step_fourier)
      step_split(state.values, t, dt);
    else
      step_crank_nicolson(state.values, t, dt);
  }
  state.time = t1;
  return state;
}

}  // namespace qev
