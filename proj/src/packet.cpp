#include "qev/packet.hpp"

#include <cmath>

namespace qev {

namespace {

// per-axis metric-signed phase vector: (eta o v)_a = g_aa v_a
Vec metric_weighted(const Metric& g, const Vec& v) {
  Vec out = v;
  for (Index a = 1; a < v.size(); ++a) out(a) = -out(a);
  (void)g;
  return out;
}

bool is_diagonal(const Mat& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

}  // namespace

GaussianEventPacket::GaussianEventPacket(const Metric& metric, Vec center_x,
                                         Vec center_p, const Vec& widths_p,
                                         Complex amplitude, UnitMode mode)
    : metric_(metric),
      amplitude_(amplitude),
      center_x_(std::move(center_x)),
      center_p_(std::move(center_p)),
      mode_(mode) {
  metric_.check_dim(center_x_.size(), "packet center_x");
  metric_.check_dim(center_p_.size(), "packet center_p");
  metric_.check_dim(widths_p.size(), "packet widths_p");
  for (Index a = 0; a < widths_p.size(); ++a)
    if (!(widths_p(a) > 0.0) || !std::isfinite(widths_p(a)))
      throw Error("packet widths must be strictly positive (point events are "
                  "improper vectors)");
  form_ = Mat::Zero(metric_.dim(), metric_.dim());
  for (Index a = 0; a < widths_p.size(); ++a)
    form_(a, a) = 1.0 / (4.0 * widths_p(a) * widths_p(a));
  finish_init();
}

GaussianEventPacket::GaussianEventPacket(const Metric& metric, Vec center_x,
                                         Vec center_p, Mat quadratic_form,
                                         Complex amplitude, UnitMode mode)
    : metric_(metric),
      amplitude_(amplitude),
      center_x_(std::move(center_x)),
      center_p_(std::move(center_p)),
      form_(std::move(quadratic_form)),
      mode_(mode) {
  metric_.check_dim(center_x_.size(), "packet center_x");
  metric_.check_dim(center_p_.size(), "packet center_p");
  if (form_.rows() != metric_.dim() || form_.cols() != metric_.dim())
    throw DimensionMismatch("packet quadratic form has wrong shape");
  if (!form_.isApprox(form_.transpose(), 1e-12))
    throw Error("packet quadratic form must be symmetric");
  form_ = 0.5 * (form_ + form_.transpose().eval());
  finish_init();
}

void GaussianEventPacket::finish_init() {
  axis_aligned_ = is_diagonal(form_);
  form_llt_.compute(form_);
  if (form_llt_.info() != Eigen::Success)
    throw Error("packet quadratic form must be positive definite");
  log_det_form_ = 0.0;
  const auto& l = form_llt_.matrixL();
  for (Index a = 0; a < form_.rows(); ++a)
    log_det_form_ += 2.0 * std::log(l(a, a));
}

Real GaussianEventPacket::momentum_std(Index axis) const {
  // covariance of |psi(p)|^2 is (4M)^{-1}
  const Vec e = Vec::Unit(dim(), axis);
  const Vec col = form_llt_.solve(e);
  return 0.5 * std::sqrt(col(axis));
}

Real GaussianEventPacket::position_std(Index axis) const {
  // position-space covariance is eta M eta; the diagonal is just M_aa
  return std::sqrt(form_(axis, axis));
}

Complex GaussianEventPacket::momentum_value(const Vec& p) const {
  metric_.check_dim(p.size(), "momentum argument");
  const Vec dp = p - center_p_;
  const Real quad = dp.dot(form_ * dp);
  const Real phase = minkowski_dot(p, center_x_);
  return amplitude_ * std::exp(Complex(-quad, phase));
}

CVec GaussianEventPacket::momentum_gradient(const Vec& p) const {
  const Complex value = momentum_value(p);
  const Vec dp = p - center_p_;
  const Vec real_part = -2.0 * (form_ * dp);
  const Vec imag_part = metric_weighted(metric_, center_x_);
  CVec g(dim());
  for (Index a = 0; a < dim(); ++a)
    g(a) = value * Complex(real_part(a), imag_part(a));
  return g;
}

CMat GaussianEventPacket::momentum_hessian(const Vec& p) const {
  const Complex value = momentum_value(p);
  const Vec dp = p - center_p_;
  const Vec real_part = -2.0 * (form_ * dp);
  const Vec imag_part = metric_weighted(metric_, center_x_);
  CVec g(dim());
  for (Index a = 0; a < dim(); ++a) g(a) = Complex(real_part(a), imag_part(a));
  CMat h(dim(), dim());
  for (Index a = 0; a < dim(); ++a)
    for (Index b = 0; b < dim(); ++b)
      h(a, b) = value * (g(a) * g(b) - 2.0 * form_(a, b));
  return h;
}

Complex GaussianEventPacket::position_value(const Vec& x) const {
  metric_.check_dim(x.size(), "position argument");
  // psi(x) = A (2 pi)^{-n/2} Int exp(-(p-c)^T M (p-c) + i p.(X - x)) d^n p
  const Index n = dim();
  const Vec shift = metric_weighted(metric_, center_x_ - x);
  const Vec lin_re = 2.0 * (form_ * center_p_);
  const Vec& lin_im = shift;
  const Vec sol_re = form_llt_.solve(lin_re);
  const Vec sol_im = form_llt_.solve(lin_im);
  // (1/4) d^T M^{-1} d with d = lin_re + i lin_im (plain, not conjugated)
  const Complex quad(0.25 * (lin_re.dot(sol_re) - lin_im.dot(sol_im)),
                     0.25 * (lin_re.dot(sol_im) + lin_im.dot(sol_re)));
  const Real const_term = -center_p_.dot(form_ * center_p_);
  const Real log_prefactor =
      -0.5 * static_cast<Real>(n) * std::log(2.0) - 0.5 * log_det_form_;
  return amplitude_ * std::exp(quad + const_term + log_prefactor);
}

Real GaussianEventPacket::norm_squared() const {
  const Index n = dim();
  const Real log_val = 0.5 * static_cast<Real>(n) * std::log(pi / 2.0) -
                       0.5 * log_det_form_;
  return std::norm(amplitude_) * std::exp(log_val);
}

GaussianEventPacket GaussianEventPacket::scaled(Complex factor) const {
  GaussianEventPacket out = *this;
  out.amplitude_ *= factor;
  return out;
}

GaussianEventPacket GaussianEventPacket::gauge_shifted(const Vec& b) const {
  metric_.check_dim(b.size(), "gauge shift");
  // exp(i b.x) psi has momentum representation psi(p + b)
  GaussianEventPacket out = *this;
  out.center_p_ = center_p_ - b;
  out.amplitude_ = amplitude_ * std::exp(Complex(0, minkowski_dot(b, center_x_)));
  return out;
}

GaussianEventPacket GaussianEventPacket::momentum_shifted(const Vec& delta) const {
  metric_.check_dim(delta.size(), "momentum shift");
  GaussianEventPacket out = *this;
  out.center_p_ = center_p_ + delta;
  return out;
}

Complex inner_product(const GaussianEventPacket& phi,
                      const GaussianEventPacket& psi) {
  if (!(phi.metric() == psi.metric()))
    throw DimensionMismatch("inner_product: metric mismatch");
  require_same_mode(phi.unit_mode(), psi.unit_mode(), "inner_product");

  const Index n = phi.dim();
  const Mat c_form = phi.quadratic_form() + psi.quadratic_form();
  Eigen::LLT<Mat> llt(c_form);
  if (llt.info() != Eigen::Success)
    throw Error("inner_product: degenerate combined form");

  const Vec& a = phi.center_p();
  const Vec& b = psi.center_p();
  Vec s = psi.center_x() - phi.center_x();
  for (Index k = 1; k < n; ++k) s(k) = -s(k);  // metric signs in the phase

  const Vec lin_re = 2.0 * (phi.quadratic_form() * a + psi.quadratic_form() * b);
  const Vec& lin_im = s;
  const Vec sol_re = llt.solve(lin_re);
  const Vec sol_im = llt.solve(lin_im);
  const Complex quad(0.25 * (lin_re.dot(sol_re) - lin_im.dot(sol_im)),
                     0.25 * (lin_re.dot(sol_im) + lin_im.dot(sol_re)));
  const Real const_term = -a.dot(phi.quadratic_form() * a) -
                          b.dot(psi.quadratic_form() * b);

  Real log_det = 0.0;
  const auto& l = llt.matrixL();
  for (Index k = 0; k < n; ++k) log_det += 2.0 * std::log(l(k, k));
  const Real log_prefactor =
      0.5 * static_cast<Real>(n) * std::log(pi) - 0.5 * log_det;

  return std::conj(phi.amplitude()) * psi.amplitude() *
         std::exp(quad + const_term + log_prefactor);
}

namespace {

struct AxisMoments {
  Real x, p;        // centers
  Real dx2, dp2;    // variances
};

AxisMoments axis_moments(const GaussianEventPacket& psi, Index a) {
  const Real sigma = 0.5 / std::sqrt(psi.quadratic_form()(a, a));
  AxisMoments m;
  m.x = psi.center_x()(a);
  m.p = psi.center_p()(a);
  m.dp2 = sigma * sigma;
  m.dx2 = 1.0 / (4.0 * sigma * sigma);
  return m;
}

// cyclic successor pair of a spatial axis index i in {1..3}
void cyclic_pair(Index i, Index& j, Index& k) {
  j = (i % 3) + 1;
  k = (j % 3) + 1;
}

}  // namespace

Moments observable_center_and_uncertainty(const GaussianEventPacket& psi,
                                          const ObservableSpec& obs) {
  if (std::norm(psi.amplitude()) == 0.0)
    throw Error("observable moments: zero-norm packet");
  if (!psi.axis_aligned())
    throw Error("observable moments require an axis-aligned packet");

  const Index n = psi.dim();
  switch (obs.kind) {
    case ObservableKind::coordinate: {
      if (obs.axis < 0 || obs.axis >= n)
        throw DimensionMismatch("observable axis out of range");
      const AxisMoments m = axis_moments(psi, obs.axis);
      return {m.x, std::sqrt(m.dx2)};
    }
    case ObservableKind::momentum: {
      if (obs.axis < 0 || obs.axis >= n)
        throw DimensionMismatch("observable axis out of range");
      const AxisMoments m = axis_moments(psi, obs.axis);
      return {m.p, std::sqrt(m.dp2)};
    }
    case ObservableKind::angular_momentum: {
      Index j, k;
      cyclic_pair(obs.axis, j, k);
      if (j >= n || k >= n)
        throw DimensionMismatch("angular momentum needs both transverse axes");
      const AxisMoments mj = axis_moments(psi, j);
      const AxisMoments mk = axis_moments(psi, k);
      // L_i = x^j p^k - x^k p^j on independent axes
      const Real center = mj.x * mk.p - mk.x * mj.p;
      const Real second =
          (mj.x * mj.x + mj.dx2) * (mk.p * mk.p + mk.dp2) +
          (mk.x * mk.x + mk.dx2) * (mj.p * mj.p + mj.dp2) -
          2.0 * mj.x * mj.p * mk.x * mk.p - 0.5;
      const Real var = std::max(second - center * center, 0.0);
      return {center, std::sqrt(var)};
    }
    case ObservableKind::boost: {
      if (obs.axis < 1 || obs.axis >= n)
        throw DimensionMismatch("boost axis out of range");
      const AxisMoments mt = axis_moments(psi, 0);
      const AxisMoments mi = axis_moments(psi, obs.axis);
      // K_i = x^i E - t p^i; time axis carries [t,E] = -i, spatial [x,p] = +i,
      // so the commutator halves add instead of cancelling
      const Real center = mi.x * mt.p - mt.x * mi.p;
      const Real second =
          (mi.x * mi.x + mi.dx2) * (mt.p * mt.p + mt.dp2) +
          (mt.x * mt.x + mt.dx2) * (mi.p * mi.p + mi.dp2) -
          2.0 * mi.x * mi.p * mt.x * mt.p + 0.5;
      const Real var = std::max(second - center * center, 0.0);
      return {center, std::sqrt(var)};
    }
  }
  throw Error("unknown observable kind");
}

Real projected_norm_squared(const GaussianEventPacket& psi, int sign) {
  if (!psi.axis_aligned())
    throw Error("projected norm implemented for axis-aligned packets");
  if (sign != 1 && sign != -1)
    throw Error("projected norm: sign must be +1 or -1");
  const Real sigma_e = 0.5 / std::sqrt(psi.quadratic_form()(0, 0));
  const Real z = sign * psi.center_p()(0) / (sigma_e * std::sqrt(2.0));
  return psi.norm_squared() * 0.5 * std::erfc(-z);
}

}  // namespace qev
