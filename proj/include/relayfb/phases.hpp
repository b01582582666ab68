#pragma once

#include <cstdint>
#include <vector>

#include "relayfb/matrix.hpp"

namespace relayfb {

/// Reliability of the binary symmetric feedback channel:
/// p = Pr(ACK observed | ACK sent) = Pr(NACK observed | NACK sent).
struct BscParam {
  explicit BscParam(double p_correct);
  double p;
};

/// Per-level decode success probabilities consumed by the phase tree.
/// levels[0] is the probability the destination decodes from the source
/// transmission alone; levels[k] is the probability it decodes once relays
/// 1..k have also transmitted.
struct DecodeProfile {
  explicit DecodeProfile(std::vector<double> level_probs);
  std::vector<double> levels;
};

/// The 2x2 row-stochastic channel matrix [[p, 1-p], [1-p, p]] mapping the
/// true feedback symbol to the observed one.
Matrix feedback_matrix(const BscParam& bsc);

/// Closed form for the one-relay network: (2*p_bar_sd - 1)*p + 2 - p_bar_sd,
/// where p_bar_sd is the source-to-destination outage probability.
/// Always lies in [1, 2].
double expected_phases_one_relay(double p_bar_sd, const BscParam& bsc);

enum class SlopeSign { decreasing, flat, increasing };

/// Sign of d E(N) / dp for the one-relay closed form (= 2*p_bar_sd - 1).
SlopeSign phase_derivative_sign(double p_bar_sd);

/// Explicit tree of positive/negative blocks, one pair spawned per level.
///
/// A positive block represents a successful decode at its level, a negative
/// block a failed one. Each block has two branches: the feedback symbol is
/// observed as ACK (everyone stops; path terminated with multiplier equal to
/// the level) or as NACK (the next relay transmits; at the deepest level this
/// terminates with multiplier num_relays + 1, otherwise it spawns the next
/// level's positive and negative blocks).
struct PhaseTree {
  enum class BlockKind : std::uint8_t { positive, negative };

  struct Block {
    double path_probability;  // mass of entering this block, decode factor included
    std::uint32_t kind_mask;  // bit l-1 set <=> level-l block on this path is positive
    std::int32_t terminate_leaf;   // leaf index; multiplier == level
    std::int32_t extend_leaf;      // leaf index at the deepest level, else -1
    std::int32_t extend_positive;  // child block indices at level+1, else -1
    std::int32_t extend_negative;
    std::int16_t level;  // 1-based
    BlockKind kind;
  };

  struct Leaf {
    double path_probability;
    std::uint32_t kind_mask;   // block kinds along the path, bit l-1 for level l
    std::int16_t level;        // level at which the path left the tree
    std::int16_t multiplier;   // phase count: level, or num_relays + 1
  };

  int num_relays = 0;
  double feedback_p = 0.0;
  std::vector<Block> blocks;  // blocks[0], blocks[1] are the level-1 pair
  std::vector<Leaf> leaves;
};

/// Largest supported tree depth; leaf count grows as 3 * 2^K.
inline constexpr int kMaxTreeRelays = 30;

/// Builds the explicit tree for a network with num_relays >= 1 relays.
/// profile must supply at least num_relays level probabilities.
PhaseTree build_phase_tree(const DecodeProfile& profile, const BscParam& bsc,
                           int num_relays);

/// E(N) as the probability-weighted sum of leaf multipliers. Checks that the
/// leaf masses form a probability distribution first.
double expected_phases_tree(const PhaseTree& tree);

/// E(N) in the matrix formulation: the phase-count vector [1, ..., K+1]
/// applied to the per-level terminated masses, which are accumulated with the
/// feedback matrix and Hadamard products. Agrees with expected_phases_tree
/// for every input; for one relay it is the literal product
/// [1, 2] * P * [P_SD, P_bar_SD]^T.
double expected_phases_matrix(const DecodeProfile& profile, const BscParam& bsc,
                              int num_relays);

/// Total E(N) evaluator used by sweeps: num_relays == 0 means pure direct
/// transmission and returns 1 exactly; otherwise the matrix route.
double expected_phases(const DecodeProfile& profile, const BscParam& bsc,
                       int num_relays);

}  // namespace relayfb
