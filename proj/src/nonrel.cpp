#include "qev/nonrel.hpp"

namespace qev {

Complex nonrel_amplitude(const TimeProjectedState& phi_at_t1,
                         const TimeProjectedState& psi_at_t0,
                         const SchrodingerOracle& oracle,
                         const UnitSystem& units) {
  const TimeProjectedState evolved = oracle.evolve(psi_at_t0, phi_at_t1.time);
  return sharp_time_kappa(oracle.mass(), units) *
         state_inner(phi_at_t1, evolved);
}

Real sharp_time_probability(const TimeProjectedState& phi_at_t1,
                            const TimeProjectedState& psi_at_t0,
                            const SchrodingerOracle& oracle) {
  const Real n_phi = phi_at_t1.norm_squared();
  const Real n_psi = psi_at_t0.norm_squared();
  if (n_phi <= 0 || n_psi <= 0)
    throw Error("sharp-time probability of a zero-norm state");
  const TimeProjectedState evolved = oracle.evolve(psi_at_t0, phi_at_t1.time);
  return std::norm(state_inner(phi_at_t1, evolved)) / (n_phi * n_psi);
}

StudyPair make_study_pair(Real velocity, Real time_width,
                          const LimitStudyConfig& config) {
  if (!(velocity > 0) || velocity >= 1)
    throw Error("study velocity must lie in (0, 1)");
  if (!(time_width > 0))
    throw Error("study time width must be positive: time eigenvectors are "
                "not event packets");

  const Real m = config.mass;
  const Real p0 = velocity * m;
  const Real sigma_p = config.momentum_width_ratio * p0;
  const Real sigma_e = 0.5 / time_width;
  // propagation long enough for visible dynamics: a fixed fraction of the
  // packet spreading time m / sigma_p^2
  const Real hop_time = config.spread_fraction * m / (sigma_p * sigma_p);
  const Real group_velocity = p0 / shell_energy(p0 * p0, m);

  Metric g(1);
  Vec cx0(2), cp(2), w(2), cx1(2);
  cx0 << 0.0, 0.0;
  cp << shell_energy(p0 * p0, m), p0;
  w << sigma_e, sigma_p;
  cx1 << hop_time, group_velocity * hop_time;
  return {GaussianEventPacket(g, cx0, cp, w),
          GaussianEventPacket(g, cx1, cp, w), hop_time};
}

std::vector<LimitStudyPoint> limit_convergence_study(
    const std::vector<Real>& velocities, const std::vector<Real>& time_widths,
    const LimitStudyConfig& config) {
  std::vector<LimitStudyPoint> table;
  Metric g(1);
  Propagator shell(g, config.mass);
  shell.selector = ShellSelector::positive_only;
  ShellQuadrature q;
  q.nodes_per_axis = config.quadrature_nodes;

  for (Real v : velocities) {
    for (Real tw : time_widths) {
      const StudyPair pair = make_study_pair(v, tw, config);
      const Real p_rel = transition_probability(pair.phi, pair.psi, shell, q);

      // matching Schroedinger setup: spatial factors of the same packets
      const Real p0 = v * config.mass;
      const Real sigma_p = config.momentum_width_ratio * p0;
      const Real sigma_x = 0.5 / sigma_p;
      const Real x_hop = pair.phi.center_x()(1);
      // domain covers source, target and the spread packet
      const Real spread =
          sigma_x * std::sqrt(1.0 + std::pow(pair.hop_time /
                                  (2.0 * config.mass * sigma_x * sigma_x), 2));
      const Real lo = std::min(0.0, x_hop) - 12.0 * spread;
      const Real hi = std::max(0.0, x_hop) + 12.0 * spread;
      SpatialGrid1D grid;
      grid.n = config.grid_points;
      grid.x0 = lo;
      grid.dx = (hi - lo) / static_cast<Real>(config.grid_points);
      SchrodingerOracle oracle(grid, config.mass,
                               SchrodingerOracle::Stepper::split_step_fourier,
                               pair.hop_time / config.time_steps);
      const TimeProjectedState psi0 =
          oracle.gaussian_state(0.0, 0.0, p0, sigma_x);
      const TimeProjectedState phi1 =
          oracle.gaussian_state(pair.hop_time, x_hop, p0, sigma_x);
      const Real p_nr = sharp_time_probability(phi1, psi0, oracle);

      table.push_back({v, tw, p_rel, p_nr,
                       std::abs(p_rel - p_nr) / std::max(p_nr, 1e-300)});
    }
  }
  return table;
}

}  // namespace qev
