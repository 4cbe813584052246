#include "qev/poincare.hpp"

#include <cmath>

namespace qev {

namespace {

Mat metric_matrix(Index n) {
  Vec d = -Vec::Ones(n);
  d(0) = 1.0;
  return d.asDiagonal();
}

void require_valid(const PoincareElement& g) {
  if (!is_valid_lorentz(g.lorentz))
    throw Error("Poincare element does not preserve the metric");
}

}  // namespace

bool is_valid_lorentz(const Mat& lambda, Real tol) {
  const Index n = lambda.rows();
  if (lambda.cols() != n) return false;
  const Mat g = metric_matrix(n);
  if (((lambda.transpose() * g * lambda) - g).cwiseAbs().maxCoeff() > tol)
    return false;
  return std::abs(std::abs(lambda.determinant()) - 1.0) <= tol * n;
}

PoincareElement identity_element(const Metric& g) {
  return {Mat::Identity(g.dim(), g.dim()), Vec::Zero(g.dim()), false, false};
}

PoincareElement translation_element(const Metric& g, const Vec& a) {
  g.check_dim(a.size(), "translation");
  return {Mat::Identity(g.dim(), g.dim()), a, false, false};
}

PoincareElement boost_element(const Metric& g, const Vec& rapidity) {
  const int d = g.dim_space();
  if (rapidity.size() != d)
    throw DimensionMismatch("boost rapidity must have d components");
  const Real theta = rapidity.norm();
  Mat lambda = Mat::Identity(d + 1, d + 1);
  if (theta > 0) {
    const Vec m = rapidity / theta;  // unit direction
    const Real ch = std::cosh(theta);
    const Real sh = std::sinh(theta);
    lambda(0, 0) = ch;
    for (int j = 0; j < d; ++j) {
      lambda(0, j + 1) = -sh * m(j);
      lambda(j + 1, 0) = -sh * m(j);
      for (int k = 0; k < d; ++k)
        lambda(j + 1, k + 1) = (j == k ? 1.0 : 0.0) + (ch - 1.0) * m(j) * m(k);
    }
  }
  return {lambda, Vec::Zero(d + 1), false, false};
}

PoincareElement rotation_element(const Metric& g, const Vec& angles) {
  const int d = g.dim_space();
  Mat lambda = Mat::Identity(d + 1, d + 1);
  if (d == 1) {
    if (angles.size() != 0 && angles.norm() != 0)
      throw DimensionMismatch("no rotations exist in one spatial dimension");
    return {lambda, Vec::Zero(2), false, false};
  }
  if (d == 2) {
    if (angles.size() != 1)
      throw DimensionMismatch("planar rotation takes a single angle");
    const Real c = std::cos(angles(0)), s = std::sin(angles(0));
    lambda(1, 1) = c;
    lambda(1, 2) = -s;
    lambda(2, 1) = s;
    lambda(2, 2) = c;
    return {lambda, Vec::Zero(3), false, false};
  }
  if (angles.size() != 3)
    throw DimensionMismatch("spatial rotation takes three angle components");
  const Real phi = angles.norm();
  if (phi > 0) {
    const Vec n = angles / phi;
    Mat cross = Mat::Zero(3, 3);
    cross(0, 1) = -n(2);
    cross(0, 2) = n(1);
    cross(1, 0) = n(2);
    cross(1, 2) = -n(0);
    cross(2, 0) = -n(1);
    cross(2, 1) = n(0);
    const Mat r = Mat::Identity(3, 3) + std::sin(phi) * cross +
                  (1.0 - std::cos(phi)) * cross * cross;
    lambda.block(1, 1, 3, 3) = r;
  }
  return {lambda, Vec::Zero(4), false, false};
}

PoincareElement parity_element(const Metric& g) {
  Vec d = -Vec::Ones(g.dim());
  d(0) = 1.0;
  return {Mat(d.asDiagonal()), Vec::Zero(g.dim()), true, false};
}

PoincareElement time_reversal_element(const Metric& g) {
  Vec d = Vec::Ones(g.dim());
  d(0) = -1.0;
  return {Mat(d.asDiagonal()), Vec::Zero(g.dim()), false, true};
}

PoincareElement compose(const PoincareElement& g1, const PoincareElement& g2) {
  if (g1.dim() != g2.dim())
    throw DimensionMismatch("compose: dimension mismatch");
  PoincareElement out;
  out.lorentz = g1.lorentz * g2.lorentz;
  out.translation = g1.lorentz * g2.translation + g1.translation;
  out.parity = g1.parity != g2.parity;
  out.time_reversal = g1.time_reversal != g2.time_reversal;
  return out;
}

Mat lorentz_inverse(const Mat& lambda) {
  const Mat g = metric_matrix(lambda.rows());
  return g * lambda.transpose() * g;
}

PoincareElement inverse(const PoincareElement& g) {
  PoincareElement out;
  out.lorentz = lorentz_inverse(g.lorentz);
  out.translation = -(out.lorentz * g.translation);
  out.parity = g.parity;
  out.time_reversal = g.time_reversal;
  return out;
}

GaussianEventPacket apply(const PoincareElement& g,
                          const GaussianEventPacket& psi) {
  require_valid(g);
  psi.metric().check_dim(g.dim(), "Poincare element");

  // U psi(p) = exp(i p.a) psi(Lambda^{-1} p): the centroids transform as
  // vectors, the quadratic form by congruence with Lambda^{-1}, and the
  // translation phase is absorbed into the spacetime centroid.
  const Mat inv = lorentz_inverse(g.lorentz);
  const Vec center_p = g.lorentz * psi.center_p();
  const Vec center_x = g.lorentz * psi.center_x() + g.translation;
  const Mat form = inv.transpose() * psi.quadratic_form() * inv;
  return GaussianEventPacket(psi.metric(), center_x, center_p, form,
                             psi.amplitude(), psi.unit_mode());
}

Complex translation_generator_action(const GaussianEventPacket& psi,
                                     const Vec& a, const Vec& p) {
  return minkowski_dot(a, p) * psi.momentum_value(p);
}

Complex rotation_generator_action(const GaussianEventPacket& psi, Index axis,
                                  const Vec& p) {
  if (psi.metric().dim_space() < 2)
    throw DimensionMismatch("rotation generator needs at least two spatial axes");
  Index j = (axis % 3) + 1;
  Index k = (j % 3) + 1;
  if (j >= psi.dim() || k >= psi.dim())
    throw DimensionMismatch("rotation generator axis out of range");
  const CVec grad = psi.momentum_gradient(p);
  return Complex(0, 1) * (p(k) * grad(j) - p(j) * grad(k));
}

Complex boost_generator_action(const GaussianEventPacket& psi, Index axis,
                               const Vec& p) {
  if (axis < 1 || axis >= psi.dim())
    throw DimensionMismatch("boost generator axis out of range");
  const CVec grad = psi.momentum_gradient(p);
  return Complex(0, 1) * (p(axis) * grad(0) + p(0) * grad(axis));
}

Complex rotation_commutator_action(const GaussianEventPacket& psi, Index i,
                                   Index j, const Vec& p) {
  // L_i L_j psi = - eps_{iab} eps_{jcd} p^b (delta_{ad} d_c + p^d d_a d_c) psi
  const auto eps = [](Index a, Index b, Index c) -> Real {
    if (a == b || b == c || a == c) return 0;
    if ((a == 1 && b == 2 && c == 3) || (a == 2 && b == 3 && c == 1) ||
        (a == 3 && b == 1 && c == 2))
      return 1;
    return -1;
  };
  const CVec grad = psi.momentum_gradient(p);
  const CMat hess = psi.momentum_hessian(p);
  const auto apply_pair = [&](Index first, Index second) {
    Complex acc(0, 0);
    for (Index a = 1; a <= 3; ++a)
      for (Index b = 1; b <= 3; ++b)
        for (Index c = 1; c <= 3; ++c)
          for (Index d = 1; d <= 3; ++d) {
            const Real e = eps(first, a, b) * eps(second, c, d);
            if (e == 0) continue;
            Complex term = (a == d) ? grad(c) : Complex(0, 0);
            term += p(d) * hess(a, c);
            acc += e * p(b) * term;
          }
    return -acc;
  };
  return apply_pair(i, j) - apply_pair(j, i);
}

Real generator_check(const GaussianEventPacket& psi, GeneratorKind kind,
                     Index axis, Real epsilon,
                     const std::vector<Vec>& sample_points) {
  const Metric& g = psi.metric();
  PoincareElement element = identity_element(g);
  switch (kind) {
    case GeneratorKind::translation: {
      Vec a = Vec::Zero(g.dim());
      a(axis) = epsilon;
      element = translation_element(g, a);
      break;
    }
    case GeneratorKind::rotation: {
      Vec angles = Vec::Zero(g.dim_space() == 2 ? 1 : 3);
      if (g.dim_space() == 2)
        angles(0) = epsilon;
      else
        angles(axis - 1) = epsilon;
      element = rotation_element(g, angles);
      break;
    }
    case GeneratorKind::boost: {
      Vec theta = Vec::Zero(g.dim_space());
      theta(axis - 1) = epsilon;
      element = boost_element(g, theta);
      break;
    }
  }
  const GaussianEventPacket transformed = apply(element, psi);

  Real scale = 0;
  for (const Vec& p : sample_points)
    scale = std::max(scale, std::abs(psi.momentum_value(p)));
  if (scale == 0) return 0;

  Real worst = 0;
  for (const Vec& p : sample_points) {
    Complex first_order = psi.momentum_value(p);
    switch (kind) {
      case GeneratorKind::translation: {
        // U_T(a) = exp(+i a.p)
        Vec a = Vec::Zero(g.dim());
        a(axis) = 1.0;
        first_order += Complex(0, epsilon) *
                       translation_generator_action(psi, a, p);
        break;
      }
      case GeneratorKind::rotation:
        // U = exp(-i phi L)
        first_order += Complex(0, -epsilon) *
                       rotation_generator_action(
                           psi, g.dim_space() == 2 ? 3 : axis, p);
        break;
      case GeneratorKind::boost:
        // U = exp(-i theta K)
        first_order +=
            Complex(0, -epsilon) * boost_generator_action(psi, axis, p);
        break;
    }
    worst = std::max(worst,
                     std::abs(transformed.momentum_value(p) - first_order));
  }
  return worst / scale;
}

InvarianceReport invariance_report(const GaussianEventPacket& phi,
                                   const GaussianEventPacket& psi,
                                   const Propagator& G,
                                   const PoincareElement& g,
                                   const ShellQuadrature& q) {
  require_valid(g);
  const Complex before = transition_amplitude(phi, psi, G, q);
  const Propagator transformed =
      G.with_potential((g.lorentz * G.constant_potential).eval());
  const Complex after =
      transition_amplitude(apply(g, phi), apply(g, psi), transformed, q);
  const Real scale = std::max(std::abs(before), std::abs(after));
  InvarianceReport report{before, after, 0.0};
  report.relative_error = scale > 0 ? std::abs(after - before) / scale : 0.0;
  return report;
}

}  // namespace qev
