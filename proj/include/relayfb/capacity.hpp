#pragma once

#include <cstdint>

#include "relayfb/channel.hpp"
#include "relayfb/phases.hpp"

namespace relayfb {

/// Target outage probability for the epsilon-outage capacity.
struct OutageTarget {
  explicit OutageTarget(double epsilon_);
  double epsilon;
};

struct CapacityResult {
  double rate = 0.0;             // delivered rate, bits per channel use
  double expected_phases = 0.0;  // E(N) at the solution
  int iterations = 0;
  double residual = 0.0;         // |rate * E(N) - log_term| / log_term

  /// Source rate that puts the protocol simulator at this capacity operating
  /// point. The log term equals the in-phase spectral efficiency
  /// rate * E(N), and the simulator's in-phase rate is twice its rate
  /// argument, hence rate * E(N) / 2.
  double sim_rate() const { return rate * expected_phases / 2.0; }
};

/// The rate-independent log factor of the DF capacity:
/// log2(1 + SNR * sqrt(2 s_sd s_sr s_rd eps / (2 s_rd + s_sr))).
double df_log_term(const ChannelParams& params, const OutageTarget& target);

/// Same for bursty AF, with denominator (s_rd + s_sr).
double baf_log_term(const ChannelParams& params, const OutageTarget& target);

/// Epsilon-outage capacity of one-relay DF incremental relaying under
/// feedback reliability p. E(N) depends on the rate through the source
/// outage probability, so the capacity is the fixed point
/// R * E(N; R, p) = log_term, solved by bisection on [0, log_term].
CapacityResult df_capacity(const ChannelParams& params, const OutageTarget& target,
                           const BscParam& bsc);

/// Bursty-AF counterpart of df_capacity.
CapacityResult baf_capacity(const ChannelParams& params, const OutageTarget& target,
                            const BscParam& bsc);

struct OutageEstimate {
  double probability = 0.0;
  double std_error = 0.0;
};

/// Fraction of simulated blocks that end without the destination decoding,
/// with binomial standard error. Delegates to the protocol simulator.
OutageEstimate outage_probability_empirical(const ChannelParams& params,
                                            const Rate& rate, const BscParam& bsc,
                                            Strategy strategy, std::uint64_t trials,
                                            std::uint64_t seed);

}  // namespace relayfb
