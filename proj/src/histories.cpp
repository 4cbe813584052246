#include "qev/histories.hpp"

#include "json.hpp"

#include <fstream>
#include <thread>

namespace qev {

namespace {

struct StepDistribution {
  std::vector<GaussianEventPacket> candidates;
  std::vector<Real> self_amplitudes;  // tau(c, c), allowed candidates only
  std::vector<Real> raw;              // P(c, current)
  std::vector<Real> normalized;
  Real flip_probability = 0;
};

// candidate set and its probabilities around the current event
StepDistribution step_distribution(const GaussianEventPacket& current,
                                   Real current_self,
                                   const CandidateLattice& lattice,
                                   const Propagator& G,
                                   const ShellQuadrature& q,
                                   const HistorySamplerConfig& config) {
  StepDistribution dist;
  const int current_sign = current.center_p()(0) >= 0 ? 1 : -1;

  for (const Vec& dx : lattice.spacetime_offsets)
    for (const Vec& dp : lattice.momentum_offsets) {
      GaussianEventPacket candidate(current.metric(),
                                    current.center_x() + dx,
                                    current.center_p() + dp, lattice.widths);
      const Real self = transition_amplitude(candidate, candidate, G, q).real();
      if (!(self / candidate.norm_squared() > config.threshold))
        continue;  // not physically allowed at this threshold
      const Complex cross = transition_amplitude(candidate, current, G, q);
      const Real raw = std::norm(cross) / (self * current_self);
      dist.candidates.push_back(std::move(candidate));
      dist.self_amplitudes.push_back(self);
      dist.raw.push_back(raw);
    }

  Real total = 0;
  for (Real r : dist.raw) total += r;
  if (dist.candidates.empty() || !(total > config.probability_floor))
    throw AllCandidatesDisallowed(
        "no candidate event carries probability above the floor");

  dist.normalized.resize(dist.raw.size());
  for (std::size_t i = 0; i < dist.raw.size(); ++i) {
    dist.normalized[i] = dist.raw[i] / total;
    const int sign = dist.candidates[i].center_p()(0) >= 0 ? 1 : -1;
    if (sign != current_sign) dist.flip_probability += dist.normalized[i];
  }
  return dist;
}

std::size_t draw_candidate(const StepDistribution& dist, SplitMix64& rng,
                           const HistorySamplerConfig& config) {
  if (config.mode == SelectionMode::normalize)
    return rng.discrete(dist.normalized);

  // independent Bernoulli thinning: sweep the candidates in order, accepting
  // each with its raw probability, until one accepts
  for (int round = 0; round < config.max_bernoulli_rounds; ++round)
    for (std::size_t i = 0; i < dist.raw.size(); ++i)
      if (rng.uniform() < std::min(dist.raw[i], 1.0)) return i;
  throw AllCandidatesDisallowed(
      "bernoulli thinning accepted no candidate within the round budget");
}

}  // namespace

EventHistory sample_history(const GaussianEventPacket& start,
                            const CandidateLattice& lattice,
                            const Propagator& G, const ShellQuadrature& q,
                            Index n_steps, std::uint64_t seed,
                            const HistorySamplerConfig& config) {
  lattice.validate(start.metric());
  EventHistory history;
  history.seed = seed;
  history.widths = lattice.widths;
  history.steps.reserve(static_cast<std::size_t>(n_steps));

  SplitMix64 rng(seed);
  GaussianEventPacket current = start;
  Real current_self = transition_amplitude(current, current, G, q).real();
  if (!(current_self / current.norm_squared() > config.threshold))
    throw PhysicallyDisallowed("start event is not physically allowed");

  for (Index step = 0; step < n_steps; ++step) {
    const StepDistribution dist =
        step_distribution(current, current_self, lattice, G, q, config);
    const std::size_t pick = draw_candidate(dist, rng, config);

    HistoryStep record;
    record.center_x = dist.candidates[pick].center_x();
    record.center_p = dist.candidates[pick].center_p();
    record.energy_sign = record.center_p(0) >= 0 ? 1 : -1;
    record.p_norm = dist.normalized[pick];
    record.p_raw = dist.raw[pick];
    record.flip_probability = dist.flip_probability;
    history.steps.push_back(std::move(record));

    current = dist.candidates[pick];
    current_self = dist.self_amplitudes[pick];
  }
  return history;
}

std::vector<EventHistory> sample_ensemble(const GaussianEventPacket& start,
                                          const CandidateLattice& lattice,
                                          const Propagator& G,
                                          const ShellQuadrature& q,
                                          Index n_steps, Index n_histories,
                                          std::uint64_t base_seed, int threads,
                                          const HistorySamplerConfig& config) {
  std::vector<EventHistory> out(static_cast<std::size_t>(n_histories));
  const int workers = std::max(1, threads);
  std::vector<std::thread> pool;
  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(workers);

  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const Index i = next.fetch_add(1);
          if (i >= n_histories) break;
          out[static_cast<std::size_t>(i)] =
              sample_history(start, lattice, G, q, n_steps,
                             base_seed + static_cast<std::uint64_t>(i), config);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Real pair_transition_frequency(std::span<const EventHistory> histories) {
  if (histories.empty()) throw ConfigError("no histories given");
  long flips = 0, transitions = 0;
  for (const EventHistory& h : histories)
    for (std::size_t i = 1; i < h.steps.size(); ++i) {
      ++transitions;
      if (h.steps[i].energy_sign != h.steps[i - 1].energy_sign) ++flips;
    }
  return transitions == 0 ? 0.0
                          : static_cast<Real>(flips) /
                                static_cast<Real>(transitions);
}

FlipStatistics flip_statistics(std::span<const EventHistory> histories) {
  FlipStatistics stats;
  for (const EventHistory& h : histories)
    for (std::size_t i = 1; i < h.steps.size(); ++i) {
      ++stats.transitions;
      if (h.steps[i].energy_sign != h.steps[i - 1].energy_sign) ++stats.flips;
      const Real p = h.steps[i].flip_probability;
      stats.expected += p;
      stats.variance += p * (1 - p);
    }
  stats.z = stats.variance > 0
                ? (static_cast<Real>(stats.flips) - stats.expected) /
                      std::sqrt(stats.variance)
                : 0.0;
  return stats;
}

FrequencyCheck frequency_consistency_check(const GaussianEventPacket& current,
                                           const CandidateLattice& lattice,
                                           Index target_candidate,
                                           long n_trials, std::uint64_t seed,
                                           const Propagator& G,
                                           const ShellQuadrature& q,
                                           Real threshold) {
  if (n_trials <= 0)
    throw ConfigError("frequency check needs a positive trial count");
  lattice.validate(current.metric());

  HistorySamplerConfig config;
  config.threshold = threshold;
  const Real current_self =
      transition_amplitude(current, current, G, q).real();
  const StepDistribution dist =
      step_distribution(current, current_self, lattice, G, q, config);
  if (target_candidate < 0 ||
      target_candidate >= static_cast<Index>(dist.normalized.size()))
    throw ConfigError("target candidate index out of range");

  SplitMix64 rng(seed);
  long hits = 0;
  for (long i = 0; i < n_trials; ++i)
    if (static_cast<Index>(rng.discrete(dist.normalized)) == target_candidate)
      ++hits;

  FrequencyCheck check;
  check.trials = n_trials;
  check.empirical = static_cast<Real>(hits) / static_cast<Real>(n_trials);
  check.analytic = dist.normalized[static_cast<std::size_t>(target_candidate)];
  const Real sigma =
      std::sqrt(check.analytic * (1 - check.analytic) /
                static_cast<Real>(n_trials));
  check.z = sigma > 0 ? (check.empirical - check.analytic) / sigma : 0.0;
  return check;
}

void write_history_jsonl(const std::string& path, const EventHistory& history) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < history.steps.size(); ++i) {
    const HistoryStep& s = history.steps[i];
    nlohmann::ordered_json line;
    line["step"] = i;
    line["t"] = s.center_x(0);
    line["x"] = std::vector<Real>(s.center_x.data() + 1,
                                  s.center_x.data() + s.center_x.size());
    line["E"] = s.center_p(0);
    line["p"] = std::vector<Real>(s.center_p.data() + 1,
                                  s.center_p.data() + s.center_p.size());
    line["energy_sign"] = s.energy_sign;
    line["p_norm"] = s.p_norm;
    line["p_raw"] = s.p_raw;
    out << line.dump() << "\n";
  }
}

}  // namespace qev
