#ifndef QEV_PROPAGATOR_HPP
#define QEV_PROPAGATOR_HPP

#include "qev/packet.hpp"
#include "qev/rng.hpp"

#include <cstdint>
#include <vector>

namespace qev {

enum class ShellSelector { both, positive_only, negative_only };

// Mass-shell measure specification. The delta on the kinetic mass square is
// realized exactly as the shell reduction
//
//   sum_{s=+-} Int d^d p / (2 E'_p)  evaluated at  p^0 = q A^0 + s E'_p,
//   E'_p = sqrt(|p_spatial - q A_spatial|^2 + m^2),  q = charge sign,
//
// which is diagonal in momentum for a constant 4-potential. No smearing
// parameter exists on this path.
struct Propagator {
  Propagator(const Metric& metric_in, Real mass_in)
      : metric(metric_in),
        mass(mass_in),
        constant_potential(Vec::Zero(metric_in.dim())) {
    if (!(mass > 0.0))
      throw Error("propagator mass must be strictly positive");
  }

  Metric metric;
  Real mass;
  Vec constant_potential;  // constant A, zero for the free propagator
  ShellSelector selector = ShellSelector::both;
  int charge_sign = 1;

  Vec effective_potential() const {
    return static_cast<Real>(charge_sign) * constant_potential;
  }

  Propagator with_potential(const Vec& a) const {
    Propagator out = *this;
    out.metric.check_dim(a.size(), "constant potential");
    out.constant_potential = a;
    return out;
  }

  Propagator with_selector(ShellSelector s) const {
    Propagator out = *this;
    out.selector = s;
    return out;
  }

  Propagator conjugated_charge() const {
    Propagator out = *this;
    out.charge_sign = -out.charge_sign;
    return out;
  }

  std::vector<int> branches() const {
    switch (selector) {
      case ShellSelector::both: return {+1, -1};
      case ShellSelector::positive_only: return {+1};
      case ShellSelector::negative_only: return {-1};
    }
    return {};
  }
};

// E_p = sqrt(|p|^2 + m^2)
inline Real shell_energy(Real p_spatial_norm2, Real m) {
  return std::sqrt(p_spatial_norm2 + m * m);
}

template <typename Derived>
Real shell_energy(const Eigen::MatrixBase<Derived>& p_spatial, Real m) {
  return shell_energy(p_spatial.squaredNorm(), m);
}

struct ShellQuadrature {
  enum class Scheme { tensor_gauss_legendre, monte_carlo };

  Scheme scheme = Scheme::tensor_gauss_legendre;
  int nodes_per_axis = 64;
  long sample_count = 1000000;
  Real truncation_sigmas = 8.0;
  std::uint64_t mc_seed = 0x5eedULL;
  // when > 0, evaluate again with doubled nodes and fail if the relative
  // difference exceeds this value
  Real convergence_check_rel = 0.0;

  static ShellQuadrature gauss_legendre_default(int dim_space) {
    ShellQuadrature q;
    q.nodes_per_axis = dim_space == 1 ? 64 : (dim_space == 2 ? 32 : 24);
    return q;
  }
};

// Gauss-Legendre rule on [-1, 1], via the eigendecomposition of the Jacobi
// matrix (Golub-Welsch). Cached per node count.
void gauss_legendre_rule(int n, Vec& nodes, Vec& weights);

// integration window per spatial momentum axis
struct MomentumBox {
  Vec lo, hi;  // size d
};

MomentumBox packet_support(const GaussianEventPacket& a, Real sigmas);
MomentumBox combined_support(const GaussianEventPacket& a,
                             const GaussianEventPacket& b, Real sigmas);

namespace detail {

// flattened tensor Gauss-Legendre grid over the box; invokes
// f(p_spatial, weight) for every node in a fixed row-major order
template <typename F>
void for_each_tensor_node(const MomentumBox& box, int nodes_per_axis, F&& f) {
  const Index d = box.lo.size();
  Vec nodes, weights;
  gauss_legendre_rule(nodes_per_axis, nodes, weights);

  std::vector<Index> idx(d, 0);
  Vec p(d);
  const Index total = static_cast<Index>(std::pow(nodes_per_axis, d) + 0.5);
  for (Index flat = 0; flat < total; ++flat) {
    Index rem = flat;
    Real w = 1.0;
    for (Index k = d - 1; k >= 0; --k) {
      const Index i = rem % nodes_per_axis;
      rem /= nodes_per_axis;
      const Real half = 0.5 * (box.hi(k) - box.lo(k));
      const Real mid = 0.5 * (box.hi(k) + box.lo(k));
      p(k) = mid + half * nodes(i);
      w *= half * weights(i);
    }
    f(p, w);
  }
}

}  // namespace detail

// <bra| G |ket> restricted to the selected shell branches, tensor
// Gauss-Legendre over the given spatial-momentum box. Node contributions are
// accumulated in a buffer and pairwise-reduced, so the result is bit-stable.
template <typename Bra, typename Ket>
Complex shell_pairing(const Bra& bra, const Ket& ket, const Propagator& G,
                      const ShellQuadrature& q, const MomentumBox& box) {
  const Index d = G.metric.dim_space();
  const Vec qa = G.effective_potential();
  const auto branches = G.branches();

  std::vector<Complex> contributions;
  contributions.reserve(static_cast<std::size_t>(
      std::pow(q.nodes_per_axis, d) * branches.size()));

  Vec p(d + 1);
  detail::for_each_tensor_node(box, q.nodes_per_axis, [&](const Vec& ps, Real w) {
    const Real e = shell_energy((ps - qa.tail(d)).eval(), G.mass);
    p.tail(d) = ps;
    for (int s : branches) {
      p(0) = qa(0) + s * e;
      contributions.push_back(w / (2.0 * e) *
                              std::conj(bra.momentum_value(p)) *
                              ket.momentum_value(p));
    }
  });
  return pairwise_sum(contributions);
}

struct MonteCarloEstimate {
  Complex value;
  Real std_error = 0.0;  // combined: sqrt((var_re + var_im) / n)
  long samples = 0;
};

// Same pairing, estimated by importance sampling from a per-axis two-Gaussian
// mixture built from the bra/ket momentum marginals. Entirely independent of
// the Gauss-Legendre path; used as a cross-check oracle.
MonteCarloEstimate shell_pairing_monte_carlo(const GaussianEventPacket& bra,
                                             const GaussianEventPacket& ket,
                                             const Propagator& G, long samples,
                                             std::uint64_t seed,
                                             Real widen = 1.5);

// tau(phi, psi) = <phi| G |psi>
Complex transition_amplitude(const GaussianEventPacket& phi,
                             const GaussianEventPacket& psi,
                             const Propagator& G, const ShellQuadrature& q);

Complex transition_amplitude(const EnergySignProjection& phi,
                             const EnergySignProjection& psi,
                             const Propagator& G, const ShellQuadrature& q);

inline constexpr Real default_allowed_threshold = 1e-12;

// tau(psi,psi) / <psi|psi> > threshold
bool is_physically_allowed(const GaussianEventPacket& psi, const Propagator& G,
                           const ShellQuadrature& q,
                           Real threshold = default_allowed_threshold);

// P(phi, psi) = |tau(phi,psi)|^2 / (tau(phi,phi) tau(psi,psi));
// throws PhysicallyDisallowed when a self-amplitude is at or below threshold.
Real transition_probability(const GaussianEventPacket& phi,
                            const GaussianEventPacket& psi,
                            const Propagator& G, const ShellQuadrature& q,
                            Real threshold = default_allowed_threshold);

// Event orbit Psi(x) = <x| G |psi> on a list of spacetime points.
std::vector<Complex> evaluate_orbit(const GaussianEventPacket& psi,
                                    const Propagator& G,
                                    const std::vector<Vec>& points,
                                    const ShellQuadrature& q);

// Truncated propagator kernel G(x, x') over a symmetric spatial-momentum box
// centered on the shifted shell; the same truncation maps onto itself under
// charge conjugation, which makes kernel symmetry checks exact.
Complex propagator_kernel(const Propagator& G, const Vec& x, const Vec& x_prime,
                          int nodes_per_axis, Real box_halfwidth);

}  // namespace qev

#endif
