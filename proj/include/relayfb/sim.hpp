#pragma once

#include <cstdint>
#include <vector>

#include "relayfb/channel.hpp"
#include "relayfb/phases.hpp"

namespace relayfb {

/// Who sees the destination's feedback symbol.
///
/// shared               one (possibly flipped) observation per phase, seen by
///                      every transmitting node alike.
/// independent_per_node the source and the acting relay each observe their
///                      own independently flipped copy. Disagreements where
///                      the relay retransmits while the source already starts
///                      the next message are counted as collision blocks but
///                      not physically resolved.
enum class FeedbackObservation { shared, independent_per_node };

struct SimConfig {
  ChannelParams channel;
  Rate rate;
  BscParam feedback;
  Strategy strategy = Strategy::df;
  std::uint64_t blocks = 1;
  std::uint64_t seed = 0;
  FeedbackObservation observation = FeedbackObservation::shared;
  /// Number of worker substreams the blocks are split across. Results are
  /// deterministic for a fixed (seed, partitions) pair.
  unsigned partitions = 1;
};

struct SimReport {
  double mean_phases = 0.0;
  double phases_std_error = 0.0;
  double outage_rate = 0.0;
  double outage_std_error = 0.0;
  /// phase_histogram[i] counts blocks that consumed i+1 phases; size K+1.
  std::vector<std::uint64_t> phase_histogram;
  std::uint64_t blocks_run = 0;
  /// Blocks where source and relay acted on contradictory feedback
  /// observations; always 0 in shared mode.
  std::uint64_t collision_blocks = 0;

  friend bool operator==(const SimReport&, const SimReport&) = default;
};

/// Simulates the incremental relaying protocol block by block.
///
/// Per block: the source transmits at twice config.rate; the destination
/// tests its accumulated gains against the decode threshold and answers
/// truthfully with ACK or NACK; each observation of that symbol is flipped
/// with probability 1 - p. While NACK is observed and relays remain, the next
/// relay transmits (a DF relay that failed to decode the source stays silent
/// but still consumes its phase) and the test repeats with the accumulated
/// gains. A block where the destination decoded but the ACK was misread
/// still pays for the extra phase.
SimReport run(const SimConfig& config);

/// Level decode probabilities measured on the simulated process itself:
/// entry k is the fraction of blocks that, having observed NACK k times and
/// thus reached the level-(k+1) feedback decision, had decoded by then. Fed
/// into the phase tree, these reproduce the simulated mean phase count.
/// Entries whose conditioning path was hit fewer than 100 times are flagged
/// low-confidence (a path never hit reports 0.5 +- 0.5).
ProfileEstimate empirical_decode_profile(const SimConfig& config);

}  // namespace relayfb
