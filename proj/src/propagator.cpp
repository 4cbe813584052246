#include "qev/propagator.hpp"

#include <map>
#include <mutex>

namespace qev {

void gauss_legendre_rule(int n, Vec& nodes, Vec& weights) {
  if (n < 1) throw QuadratureError("gauss_legendre_rule: need n >= 1");

  static std::mutex cache_mutex;
  static std::map<int, std::pair<Vec, Vec>> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }

  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes and
  // the squared first eigenvector components give the weights.
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const Real b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
  nodes = solver.eigenvalues();
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const Real v0 = solver.eigenvectors()(0, k);
    weights(k) = 2.0 * v0 * v0;
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace(n, std::make_pair(nodes, weights));
}

MomentumBox packet_support(const GaussianEventPacket& a, Real sigmas) {
  const Index d = a.dim() - 1;
  MomentumBox box{Vec(d), Vec(d)};
  for (Index k = 0; k < d; ++k) {
    const Real s = a.momentum_std(k + 1);
    box.lo(k) = a.center_p()(k + 1) - sigmas * s;
    box.hi(k) = a.center_p()(k + 1) + sigmas * s;
  }
  return box;
}

MomentumBox combined_support(const GaussianEventPacket& a,
                             const GaussianEventPacket& b, Real sigmas) {
  const MomentumBox ba = packet_support(a, sigmas);
  const MomentumBox bb = packet_support(b, sigmas);
  MomentumBox box = ba;
  box.lo = ba.lo.cwiseMin(bb.lo);
  box.hi = ba.hi.cwiseMax(bb.hi);
  return box;
}

namespace {

void require_compatible(const GaussianEventPacket& phi,
                        const GaussianEventPacket& psi, const Propagator& G) {
  if (!(phi.metric() == psi.metric()) || !(phi.metric() == G.metric))
    throw DimensionMismatch("transition amplitude: metric mismatch");
  require_same_mode(phi.unit_mode(), psi.unit_mode(), "transition amplitude");
  if (phi.unit_mode() != UnitMode::natural)
    throw UnitMismatch(
        "propagator evaluation expects natural units; convert inputs first");
}

Complex amplitude_gl(const GaussianEventPacket& phi,
                     const GaussianEventPacket& psi, const Propagator& G,
                     const ShellQuadrature& q) {
  const MomentumBox box = combined_support(phi, psi, q.truncation_sigmas);
  const Complex value = shell_pairing(phi, psi, G, q, box);
  if (q.convergence_check_rel > 0.0) {
    ShellQuadrature finer = q;
    finer.nodes_per_axis = 2 * q.nodes_per_axis;
    finer.convergence_check_rel = 0.0;
    const Complex refined = shell_pairing(phi, psi, G, finer, box);
    // tail-level amplitudes are judged against the natural scale of a full
    // shell overlap, not against themselves
    const Real reference =
        std::sqrt(phi.norm_squared() * psi.norm_squared()) / (2.0 * G.mass);
    const Real scale = std::max({std::abs(value), std::abs(refined),
                                 1e-10 * reference});
    if (std::abs(value - refined) > q.convergence_check_rel * scale)
      throw QuadratureError(
          "shell quadrature did not converge: node doubling moved the result "
          "by " +
          format_full(std::abs(value - refined) / scale) + " relative");
  }
  return value;
}

}  // namespace

MonteCarloEstimate shell_pairing_monte_carlo(const GaussianEventPacket& bra,
                                             const GaussianEventPacket& ket,
                                             const Propagator& G, long samples,
                                             std::uint64_t seed, Real widen) {
  require_compatible(bra, ket, G);
  if (samples < 2) throw QuadratureError("monte carlo: need at least 2 samples");

  const Index d = G.metric.dim_space();
  const Vec qa = G.effective_potential();
  const auto branches = G.branches();

  Vec mean_a(d), std_a(d), mean_b(d), std_b(d);
  for (Index k = 0; k < d; ++k) {
    mean_a(k) = bra.center_p()(k + 1);
    std_a(k) = widen * bra.momentum_std(k + 1);
    mean_b(k) = ket.center_p()(k + 1);
    std_b(k) = widen * ket.momentum_std(k + 1);
  }

  const auto mixture_density = [](Real x, Real m1, Real s1, Real m2, Real s2) {
    const Real inv_sqrt_2pi = 0.3989422804014326779399461;
    const Real z1 = (x - m1) / s1;
    const Real z2 = (x - m2) / s2;
    return 0.5 * inv_sqrt_2pi *
           (std::exp(-0.5 * z1 * z1) / s1 + std::exp(-0.5 * z2 * z2) / s2);
  };

  SplitMix64 rng(seed);
  Vec p(d + 1);
  Vec ps(d);
  Real sum_re = 0, sum_im = 0, sum_re2 = 0, sum_im2 = 0;
  for (long i = 0; i < samples; ++i) {
    Real density = 1.0;
    for (Index k = 0; k < d; ++k) {
      const bool pick_a = rng.uniform() < 0.5;
      const Real draw = pick_a ? mean_a(k) + std_a(k) * rng.normal()
                               : mean_b(k) + std_b(k) * rng.normal();
      ps(k) = draw;
      density *= mixture_density(draw, mean_a(k), std_a(k), mean_b(k), std_b(k));
    }
    const Real e = shell_energy((ps - qa.tail(d)).eval(), G.mass);
    p.tail(d) = ps;
    Complex f(0, 0);
    for (int s : branches) {
      p(0) = qa(0) + s * e;
      f += std::conj(bra.momentum_value(p)) * ket.momentum_value(p);
    }
    f /= (2.0 * e) * density;
    sum_re += f.real();
    sum_im += f.imag();
    sum_re2 += f.real() * f.real();
    sum_im2 += f.imag() * f.imag();
  }

  const Real n = static_cast<Real>(samples);
  const Real mean_re = sum_re / n;
  const Real mean_im = sum_im / n;
  const Real var_re = std::max(sum_re2 / n - mean_re * mean_re, 0.0);
  const Real var_im = std::max(sum_im2 / n - mean_im * mean_im, 0.0);

  MonteCarloEstimate est;
  est.value = Complex(mean_re, mean_im);
  est.std_error = std::sqrt((var_re + var_im) / (n - 1.0));
  est.samples = samples;
  return est;
}

Complex transition_amplitude(const GaussianEventPacket& phi,
                             const GaussianEventPacket& psi,
                             const Propagator& G, const ShellQuadrature& q) {
  require_compatible(phi, psi, G);
  if (q.scheme == ShellQuadrature::Scheme::monte_carlo)
    return shell_pairing_monte_carlo(phi, psi, G, q.sample_count, q.mc_seed)
        .value;
  return amplitude_gl(phi, psi, G, q);
}

Complex transition_amplitude(const EnergySignProjection& phi,
                             const EnergySignProjection& psi,
                             const Propagator& G, const ShellQuadrature& q) {
  require_compatible(phi.packet(), psi.packet(), G);
  const MomentumBox box =
      combined_support(phi.packet(), psi.packet(), q.truncation_sigmas);
  return shell_pairing(phi, psi, G, q, box);
}

bool is_physically_allowed(const GaussianEventPacket& psi, const Propagator& G,
                           const ShellQuadrature& q, Real threshold) {
  const Complex self = transition_amplitude(psi, psi, G, q);
  return self.real() / psi.norm_squared() > threshold;
}

Real transition_probability(const GaussianEventPacket& phi,
                            const GaussianEventPacket& psi,
                            const Propagator& G, const ShellQuadrature& q,
                            Real threshold) {
  const Real self_phi = transition_amplitude(phi, phi, G, q).real();
  const Real self_psi = transition_amplitude(psi, psi, G, q).real();
  if (!(self_phi / phi.norm_squared() > threshold))
    throw PhysicallyDisallowed("event phi is not physically allowed: "
                               "self-amplitude " +
                               format_full(self_phi));
  if (!(self_psi / psi.norm_squared() > threshold))
    throw PhysicallyDisallowed("event psi is not physically allowed: "
                               "self-amplitude " +
                               format_full(self_psi));
  const Complex cross = transition_amplitude(phi, psi, G, q);
  return std::norm(cross) / (self_phi * self_psi);
}

std::vector<Complex> evaluate_orbit(const GaussianEventPacket& psi,
                                    const Propagator& G,
                                    const std::vector<Vec>& points,
                                    const ShellQuadrature& q) {
  require_compatible(psi, psi, G);
  const Index d = G.metric.dim_space();
  const Vec qa = G.effective_potential();
  const auto branches = G.branches();
  const MomentumBox box = packet_support(psi, q.truncation_sigmas);

  // precompute shell nodes and measure-weighted packet values once
  struct Node {
    Vec p;       // full (d+1)-momentum on the shell
    Complex fw;  // w / (2E') * psi(p)
  };
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(std::pow(q.nodes_per_axis, d)) *
                branches.size());
  Vec p(d + 1);
  detail::for_each_tensor_node(box, q.nodes_per_axis, [&](const Vec& ps, Real w) {
    const Real e = shell_energy((ps - qa.tail(d)).eval(), G.mass);
    p.tail(d) = ps;
    for (int s : branches) {
      p(0) = qa(0) + s * e;
      nodes.push_back({p, w / (2.0 * e) * psi.momentum_value(p)});
    }
  });

  const Real fourier_norm =
      std::pow(2.0 * pi, -0.5 * static_cast<Real>(d + 1));
  std::vector<Complex> out;
  out.reserve(points.size());
  std::vector<Complex> contributions(nodes.size());
  for (const Vec& x : points) {
    G.metric.check_dim(x.size(), "orbit point");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Real phase = -minkowski_dot(nodes[i].p, x);
      contributions[i] = nodes[i].fw * std::exp(Complex(0, phase));
    }
    out.push_back(fourier_norm * pairwise_sum(contributions));
  }
  return out;
}

Complex propagator_kernel(const Propagator& G, const Vec& x, const Vec& x_prime,
                          int nodes_per_axis, Real box_halfwidth) {
  G.metric.check_dim(x.size(), "kernel point");
  G.metric.check_dim(x_prime.size(), "kernel point");
  const Index d = G.metric.dim_space();
  const Vec qa = G.effective_potential();
  const auto branches = G.branches();

  MomentumBox box{Vec(d), Vec(d)};
  for (Index k = 0; k < d; ++k) {
    box.lo(k) = qa(k + 1) - box_halfwidth;
    box.hi(k) = qa(k + 1) + box_halfwidth;
  }

  const Vec dx = x - x_prime;
  std::vector<Complex> contributions;
  Vec p(d + 1);
  detail::for_each_tensor_node(box, nodes_per_axis, [&](const Vec& ps, Real w) {
    const Real e = shell_energy((ps - qa.tail(d)).eval(), G.mass);
    p.tail(d) = ps;
    for (int s : branches) {
      p(0) = qa(0) + s * e;
      const Real phase = -minkowski_dot(p, dx);
      contributions.push_back(w / (2.0 * e) * std::exp(Complex(0, phase)));
    }
  });
  const Real fourier_norm = std::pow(2.0 * pi, -static_cast<Real>(d + 1));
  return fourier_norm * pairwise_sum(contributions);
}

}  // namespace qev
