#ifndef QEV_TESTS_SUPPORT_HPP
#define QEV_TESTS_SUPPORT_HPP

// Shared helpers for the test suites: a seeded packet factory and
// independent quadrature oracles. The oracles integrate defining integrals
// directly and never reuse the library's closed forms or its Gauss-Legendre
// shell path.

#include "qev/packet.hpp"
#include "qev/propagator.hpp"
#include "qev/rng.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace qev_test {

using qev::Complex;
using qev::Index;
using qev::Mat;
using qev::Real;
using qev::Vec;

// Gauss-Hermite rule for weight exp(-y^2), by eigendecomposition of the
// Hermite Jacobi matrix (kept separate from the library's Legendre rule).
inline void gauss_hermite_rule(int n, Vec& nodes, Vec& weights) {
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const Real b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
  nodes = solver.eigenvalues();
  weights.resize(n);
  const Real sqrt_pi = std::sqrt(qev::pi);
  for (int k = 0; k < n; ++k) {
    const Real v0 = solver.eigenvectors()(0, k);
    weights(k) = sqrt_pi * v0 * v0;
  }
}

// Tensor-product Gauss-Hermite integration of f over R^n. Per axis a the
// integrand is assumed to decay like exp(-alpha_a (x_a - mu_a)^2); the
// substitution x = mu + y/sqrt(alpha) folds that decay into the GH weight.
inline Complex gauss_hermite_integrate(
    const Vec& mu, const Vec& alpha, int nodes_per_axis,
    const std::function<Complex(const Vec&)>& f) {
  const Index n = mu.size();
  Vec nodes, weights;
  gauss_hermite_rule(nodes_per_axis, nodes, weights);

  Complex total(0, 0);
  std::vector<Index> idx(n, 0);
  Vec x(n);
  while (true) {
    Real w = 1.0;
    for (Index a = 0; a < n; ++a) {
      const Real scale = 1.0 / std::sqrt(alpha(a));
      x(a) = mu(a) + scale * nodes(idx[a]);
      // compensate the implicit GH weight exp(-y^2)
      w *= scale * weights(idx[a]) *
           std::exp(nodes(idx[a]) * nodes(idx[a]));
    }
    total += w * f(x);
    Index a = 0;
    for (; a < n; ++a) {
      if (++idx[a] < nodes_per_axis) break;
      idx[a] = 0;
    }
    if (a == n) break;
  }
  return total;
}

// Seeded factory for random test packets (axis-aligned, natural units).
class PacketFactory {
public:
  explicit PacketFactory(std::uint64_t seed) : rng_(seed) {}

  qev::SplitMix64& rng() { return rng_; }

  // random packet with momentum centroid pinned to the free mass shell
  qev::GaussianEventPacket shell_packet(const qev::Metric& g, Real mass,
                                        int energy_sign,
                                        Real width_lo = 0.05,
                                        Real width_hi = 0.3) {
    const int n = g.dim();
    Vec center_p(n), center_x(n), widths(n);
    for (int k = 1; k < n; ++k) center_p(k) = 0.6 * mass * rng_.normal();
    center_p(0) = energy_sign *
                  qev::shell_energy(center_p.tail(n - 1).eval(), mass);
    for (int a = 0; a < n; ++a) {
      center_x(a) = rng_.uniform(-2.0, 2.0);
      widths(a) = mass * rng_.uniform(width_lo, width_hi);
    }
    const Complex amp = std::polar(rng_.uniform(0.5, 2.0),
                                   rng_.uniform(0.0, 2.0 * qev::pi));
    return qev::GaussianEventPacket(g, center_x, center_p, widths, amp);
  }

  // moderate widths and centers: keeps oscillation scales resolvable by the
  // Gauss-Hermite oracles
  qev::GaussianEventPacket tame_packet(const qev::Metric& g) {
    const int n = g.dim();
    Vec center_p(n), center_x(n), widths(n);
    for (int a = 0; a < n; ++a) {
      center_p(a) = 0.8 * rng_.normal();
      center_x(a) = rng_.uniform(-1.0, 1.0);
      widths(a) = rng_.uniform(0.25, 0.6);
    }
    const Complex amp = std::polar(rng_.uniform(0.5, 2.0),
                                   rng_.uniform(0.0, 2.0 * qev::pi));
    return qev::GaussianEventPacket(g, center_x, center_p, widths, amp);
  }

  // fully random packet, not necessarily near any shell
  qev::GaussianEventPacket random_packet(const qev::Metric& g,
                                         Real scale = 1.0) {
    const int n = g.dim();
    Vec center_p(n), center_x(n), widths(n);
    for (int a = 0; a < n; ++a) {
      center_p(a) = scale * rng_.normal();
      center_x(a) = rng_.uniform(-2.0, 2.0);
      widths(a) = scale * rng_.uniform(0.05, 0.5);
    }
    const Complex amp = std::polar(rng_.uniform(0.5, 2.0),
                                   rng_.uniform(0.0, 2.0 * qev::pi));
    return qev::GaussianEventPacket(g, center_x, center_p, widths, amp);
  }

private:
  qev::SplitMix64 rng_;
};

// Monte Carlo estimate of <psi| Op |psi> / <psi|psi> where the operator
// action op(p) already includes the packet value. Samples from the packet's
// own momentum density.
inline Complex monte_carlo_expectation(
    const qev::GaussianEventPacket& psi,
    const std::function<Complex(const Vec&)>& op_times_psi, long samples,
    std::uint64_t seed) {
  qev::SplitMix64 rng(seed);
  const Index n = psi.dim();
  Vec sigma(n);
  for (Index a = 0; a < n; ++a) sigma(a) = psi.momentum_std(a);

  Complex num(0, 0);
  Real den = 0;
  Vec p(n);
  for (long i = 0; i < samples; ++i) {
    Real density = 1.0;
    for (Index a = 0; a < n; ++a) {
      p(a) = psi.center_p()(a) + sigma(a) * rng.normal();
      const Real z = (p(a) - psi.center_p()(a)) / sigma(a);
      density *= std::exp(-0.5 * z * z) / (sigma(a) * std::sqrt(2 * qev::pi));
    }
    num += std::conj(psi.momentum_value(p)) * op_times_psi(p) / density;
    den += std::norm(psi.momentum_value(p)) / density;
  }
  return num / den;
}

}  // namespace qev_test

#endif
