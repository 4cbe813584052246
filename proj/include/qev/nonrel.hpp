#ifndef QEV_NONREL_HPP
#define QEV_NONREL_HPP

#include "qev/propagator.hpp"
#include "qev/schrodinger.hpp"

#include <vector>

namespace qev {

// kappa = hbar / (4 pi m); the energy-axis reduction of the propagator in
// the sharp-time limit. It cancels in every probability, so only amplitude
// reporting carries it.
inline Real sharp_time_kappa(Real mass, const UnitSystem& units = {}) {
  const Real hbar = units.mode == UnitMode::si ? UnitSystem::hbar : 1.0;
  return hbar / (4.0 * pi * mass);
}

// kappa <Phi | U(t1, t0) | Psi> for sharply timed events
Complex nonrel_amplitude(const TimeProjectedState& phi_at_t1,
                         const TimeProjectedState& psi_at_t0,
                         const SchrodingerOracle& oracle,
                         const UnitSystem& units = {});

// |<Phi|U(t1,t0)|Psi>|^2 / (<Phi|Phi> <Psi|Psi>); kappa cancels
Real sharp_time_probability(const TimeProjectedState& phi_at_t1,
                            const TimeProjectedState& psi_at_t0,
                            const SchrodingerOracle& oracle);

// ---- nonrelativistic / sharp-time convergence study -------------------------

struct LimitStudyPoint {
  Real velocity;
  Real time_width;
  Real p_relativistic;
  Real p_nonrel;
  Real rel_error;
};

struct LimitStudyConfig {
  Real mass = 1.0;
  // packet momentum spread relative to the momentum centroid
  Real momentum_width_ratio = 0.25;
  // propagation time in units of the packet spreading time m / sigma_p^2
  Real spread_fraction = 0.125;
  int quadrature_nodes = 96;
  Index grid_points = 4096;
  Index time_steps = 8;
};

// For each (v, dt_width): builds free d=1 event packets with momentum
// centroid v*m and temporal width dt_width, compares the mass-shell
// probability (positive-energy shell, matching the limit derivation) with
// the Schroedinger sharp-time probability. Time-eigenstate inputs
// (dt_width = 0) are rejected by the packet invariant.
std::vector<LimitStudyPoint> limit_convergence_study(
    const std::vector<Real>& velocities, const std::vector<Real>& time_widths,
    const LimitStudyConfig& config = {});

// event packet pair used by one study cell; exposed for the CLI and tests
struct StudyPair {
  GaussianEventPacket psi;
  GaussianEventPacket phi;
  Real hop_time;
};

StudyPair make_study_pair(Real velocity, Real time_width,
                          const LimitStudyConfig& config);

}  // namespace qev

#endif
