#ifndef QEV_HISTORIES_HPP
#define QEV_HISTORIES_HPP

#include "qev/propagator.hpp"
#include "qev/rng.hpp"

#include <span>
#include <string>
#include <vector>

namespace qev {

class AllCandidatesDisallowed : public Error {
public:
  using Error::Error;
};

// Proposal mechanism for the jump process: candidate events are generated
// around the current one from the cross product of spacetime and momentum
// displacements, all with the same widths. The paper defines transition
// probabilities for given pairs but no proposal set; this lattice is the
// artifact's own construction.
struct CandidateLattice {
  std::vector<Vec> spacetime_offsets;
  std::vector<Vec> momentum_offsets;
  Vec widths;

  Index candidate_count() const {
    return static_cast<Index>(spacetime_offsets.size() *
                              momentum_offsets.size());
  }

  void validate(const Metric& g) const {
    if (spacetime_offsets.empty() || momentum_offsets.empty())
      throw ConfigError("candidate lattice must not be empty");
    for (const Vec& v : spacetime_offsets)
      g.check_dim(v.size(), "lattice spacetime offset");
    for (const Vec& v : momentum_offsets)
      g.check_dim(v.size(), "lattice momentum offset");
    g.check_dim(widths.size(), "lattice widths");
  }
};

struct HistoryStep {
  Vec center_x;
  Vec center_p;
  int energy_sign;         // sign of the accepted packet's energy centroid
  Real p_norm;             // normalized step probability of the accepted event
  Real p_raw;              // raw P(accepted, previous)
  Real flip_probability;   // analytic probability that this step flips sign
};

struct EventHistory {
  std::uint64_t seed = 0;
  Vec widths;
  std::vector<HistoryStep> steps;
};

// How one candidate is drawn from the computed raw probabilities. The paper's
// P values are not mutually exclusive; `normalize` turns each step's
// candidate set into a categorical distribution, `bernoulli` thins the
// candidates independently with their raw P until one accepts.
enum class SelectionMode { normalize, bernoulli };

struct HistorySamplerConfig {
  Real threshold = default_allowed_threshold;
  SelectionMode mode = SelectionMode::normalize;
  Real probability_floor = 1e-300;  // avoids denormal division
  int max_bernoulli_rounds = 64;
};

EventHistory sample_history(const GaussianEventPacket& start,
                            const CandidateLattice& lattice,
                            const Propagator& G, const ShellQuadrature& q,
                            Index n_steps, std::uint64_t seed,
                            const HistorySamplerConfig& config = {});

// per-history seeds are base_seed + history index
std::vector<EventHistory> sample_ensemble(const GaussianEventPacket& start,
                                          const CandidateLattice& lattice,
                                          const Propagator& G,
                                          const ShellQuadrature& q,
                                          Index n_steps, Index n_histories,
                                          std::uint64_t base_seed, int threads,
                                          const HistorySamplerConfig& config = {});

// fraction of steps whose energy sign differs from the preceding step's;
// single-step histories contribute no transitions
Real pair_transition_frequency(std::span<const EventHistory> histories);

struct FlipStatistics {
  long flips = 0;
  long transitions = 0;
  Real expected = 0;   // sum of per-step analytic flip probabilities
  Real variance = 0;   // sum p (1 - p)
  Real z = 0;          // (flips - expected) / sqrt(variance)
};

FlipStatistics flip_statistics(std::span<const EventHistory> histories);

struct FrequencyCheck {
  Real empirical = 0;
  Real analytic = 0;
  Real z = 0;
  long trials = 0;
};

// repeated single-step draws from a fixed candidate set; compares the
// empirical pick frequency of the target candidate with its normalized
// probability
FrequencyCheck frequency_consistency_check(const GaussianEventPacket& current,
                                           const CandidateLattice& lattice,
                                           Index target_candidate,
                                           long n_trials, std::uint64_t seed,
                                           const Propagator& G,
                                           const ShellQuadrature& q,
                                           Real threshold =
                                               default_allowed_threshold);

// one step per line: {step, t, x[], E, p[], energy_sign, p_norm, p_raw}
void write_history_jsonl(const std::string& path, const EventHistory& history);

}  // namespace qev

#endif
