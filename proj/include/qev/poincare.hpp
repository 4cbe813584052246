#ifndef QEV_POINCARE_HPP
#define QEV_POINCARE_HPP

#include "qev/packet.hpp"
#include "qev/propagator.hpp"

#include <vector>

namespace qev {

// Poincare transformation x -> Lambda x + a acting on event packets through
// the unitary U: psi(p) -> exp(i p.a) psi(Lambda^{-1} p).
//
// Boost convention, fixed by boost_element: a boost by rapidity theta along
// +x maps (1,0) to (cosh theta, -sinh theta); theta = artanh(v). Rotations
// are the active right-handed ones. Parity and time reversal enter as the
// diagonal Lorentz matrices diag(1,-1,..) and diag(-1,1,..).
struct PoincareElement {
  Mat lorentz;
  Vec translation;
  bool parity = false;
  bool time_reversal = false;

  Index dim() const { return lorentz.rows(); }
};

bool is_valid_lorentz(const Mat& lambda, Real tol = 1e-12);

PoincareElement identity_element(const Metric& g);
PoincareElement translation_element(const Metric& g, const Vec& a);

// rapidity is a d-vector theta = theta * direction
PoincareElement boost_element(const Metric& g, const Vec& rapidity);

// d = 3: angles = phi * axis (Rodrigues); d = 2: single angle about the
// out-of-plane direction
PoincareElement rotation_element(const Metric& g, const Vec& angles);

PoincareElement parity_element(const Metric& g);
PoincareElement time_reversal_element(const Metric& g);

// (g1 o g2): x -> Lambda1 (Lambda2 x + a2) + a1
PoincareElement compose(const PoincareElement& g1, const PoincareElement& g2);
PoincareElement inverse(const PoincareElement& g);

// Lorentz inverse via the metric: Lambda^{-1} = g Lambda^T g
Mat lorentz_inverse(const Mat& lambda);

GaussianEventPacket apply(const PoincareElement& g,
                          const GaussianEventPacket& psi);

// ---- generator actions in momentum representation --------------------------
// x^0 -> -i d/dp^0 and x^k -> +i d/dp^k, so with the packet's analytic
// derivatives every action below is closed form.

// (a.p) psi -- the translation generator contracted with a
Complex translation_generator_action(const GaussianEventPacket& psi,
                                     const Vec& a, const Vec& p);

// L_i psi = i eps_{ijk} p^k d/dp^j psi
Complex rotation_generator_action(const GaussianEventPacket& psi, Index axis,
                                  const Vec& p);

// K_i psi = i (p^i d/dp^0 + p^0 d/dp^i) psi; generates boost_element
Complex boost_generator_action(const GaussianEventPacket& psi, Index axis,
                               const Vec& p);

// [L_i, L_j] psi, from analytic first and second derivatives
Complex rotation_commutator_action(const GaussianEventPacket& psi, Index i,
                                   Index j, const Vec& p);

enum class GeneratorKind { translation, rotation, boost };

// Compares apply(g_epsilon) against the first-order generator expansion on
// the sample points; returns the max deviation relative to the packet scale.
// The Taylor remainder makes this O(epsilon^2).
Real generator_check(const GaussianEventPacket& psi, GeneratorKind kind,
                     Index axis, Real epsilon,
                     const std::vector<Vec>& sample_points);

// ---- Poincare invariance of transition amplitudes ---------------------------

struct InvarianceReport {
  Complex tau_before;
  Complex tau_after;
  Real relative_error;
};

// tau(phi, psi) under G versus tau(U phi, U psi) under the transformed
// constant potential A -> Lambda A. The quadrature box follows the
// transformed momentum covariance, so boosted packets stay resolved.
InvarianceReport invariance_report(const GaussianEventPacket& phi,
                                   const GaussianEventPacket& psi,
                                   const Propagator& G,
                                   const PoincareElement& g,
                                   const ShellQuadrature& q);

}  // namespace qev

#endif
