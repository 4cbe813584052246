#ifndef QEV_PACKET_HPP
#define QEV_PACKET_HPP

#include "qev/metric.hpp"
#include "qev/units.hpp"

namespace qev {

// Complex Gaussian event wave function, parametrized in momentum space:
//
//   psi(p) = amplitude * exp(-(p - c)^T M (p - c)) * exp(+i p.X)
//
// with c the momentum centroid, X the spacetime centroid, p.X the Minkowski
// dot, and M symmetric positive definite. Axis-aligned packets have
// M = diag(1/(4 sigma_a^2)) with sigma_a the per-axis momentum standard
// deviation; Lorentz transforms fold M into a general quadratic form.
//
// The spacetime representation follows the convention
// <x|p> = (2 pi)^{-(d+1)/2} exp(-i p.x), shared by every module.
class GaussianEventPacket {
public:
  // axis-aligned constructor; widths_p are the momentum standard deviations
  GaussianEventPacket(const Metric& metric, Vec center_x, Vec center_p,
                      const Vec& widths_p, Complex amplitude = Complex(1, 0),
                      UnitMode mode = UnitMode::natural);

  // general quadratic form (must be symmetric positive definite)
  GaussianEventPacket(const Metric& metric, Vec center_x, Vec center_p,
                      Mat quadratic_form, Complex amplitude = Complex(1, 0),
                      UnitMode mode = UnitMode::natural);

  const Metric& metric() const { return metric_; }
  Index dim() const { return metric_.dim(); }
  UnitMode unit_mode() const { return mode_; }

  Complex amplitude() const { return amplitude_; }
  const Vec& center_x() const { return center_x_; }
  const Vec& center_p() const { return center_p_; }
  const Mat& quadratic_form() const { return form_; }
  bool axis_aligned() const { return axis_aligned_; }

  // momentum standard deviation along one axis (marginal for general forms)
  Real momentum_std(Index axis) const;
  // position standard deviation along one axis; 1/(2 sigma_a) when aligned
  Real position_std(Index axis) const;

  Complex momentum_value(const Vec& p) const;
  CVec momentum_gradient(const Vec& p) const;  // d psi / d p^a
  CMat momentum_hessian(const Vec& p) const;

  Complex position_value(const Vec& x) const;

  Real norm_squared() const;  // <psi|psi>, closed form

  GaussianEventPacket scaled(Complex factor) const;

  // multiplication by exp(i b.x) in position space: shifts the momentum
  // centroid by -b and rotates the amplitude phase
  GaussianEventPacket gauge_shifted(const Vec& b) const;

  // packet with the momentum centroid moved to center_p + delta (no phase)
  GaussianEventPacket momentum_shifted(const Vec& delta) const;

private:
  Metric metric_;
  Complex amplitude_;
  Vec center_x_;
  Vec center_p_;
  Mat form_;            // M
  UnitMode mode_ = UnitMode::natural;
  bool axis_aligned_;   // M diagonal
  Eigen::LLT<Mat> form_llt_;
  Real log_det_form_;   // log det M

  void finish_init();
};

// <phi|psi> = integral over R^{d+1} of conj(phi(x)) psi(x); evaluated in
// momentum space (Parseval) as a closed-form complex Gaussian integral.
Complex inner_product(const GaussianEventPacket& phi,
                      const GaussianEventPacket& psi);

// ---- Postulate-3 style characterizations ----------------------------------

enum class ObservableKind {
  coordinate,        // t (axis 0) or x_k
  momentum,          // E (axis 0) or p_k
  angular_momentum,  // L_i, spatial axis index, d = 3 (L_3 also valid d = 2)
  boost              // K_i
};

struct ObservableSpec {
  ObservableKind kind;
  Index axis = 0;
};

struct Moments {
  Real center;
  Real uncertainty;
};

// Closed-form center and uncertainty for axis-aligned packets. Coordinate
// and momentum observables are plain Gaussian moments; L and K use the
// factorized moment algebra of independent axes.
Moments observable_center_and_uncertainty(const GaussianEventPacket& psi,
                                          const ObservableSpec& obs);

// ---- energy-sign restriction ----------------------------------------------

// Pointwise evaluator for Theta(sign * E) psi; zero whenever sign * p^0 < 0.
class EnergySignProjection {
public:
  EnergySignProjection(const GaussianEventPacket& packet, int sign)
      : packet_(&packet), sign_(sign) {
    if (sign != 1 && sign != -1)
      throw Error("energy sign projection: sign must be +1 or -1");
  }

  const GaussianEventPacket& packet() const { return *packet_; }
  int sign() const { return sign_; }

  Complex momentum_value(const Vec& p) const {
    if (sign_ * p(0) < 0) return Complex(0, 0);
    return packet_->momentum_value(p);
  }

private:
  const GaussianEventPacket* packet_;
  int sign_;
};

inline EnergySignProjection energy_sign_project(const GaussianEventPacket& psi,
                                                int sign) {
  return EnergySignProjection(psi, sign);
}

// <psi| Theta(sign E) |psi>, closed form via the normal CDF (axis-aligned
// packets only).
Real projected_norm_squared(const GaussianEventPacket& psi, int sign);

}  // namespace qev

#endif
