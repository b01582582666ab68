#include "relayfb/phases.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "relayfb/errors.hpp"

namespace relayfb {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}

// Compensated (Neumaier) summation. Tree sums touch millions of leaves at
// depth 20 and the route-agreement tolerance is 1e-12, which naive
// accumulation does not reliably meet.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace

BscParam::BscParam(double p_correct) : p(p_correct) {
  check_probability(p, "feedback reliability p");
}

DecodeProfile::DecodeProfile(std::vector<double> level_probs)
    : levels(std::move(level_probs)) {
  if (levels.empty())
    throw std::invalid_argument("decode profile needs at least one level");
  for (double q : levels) check_probability(q, "decode profile entry");
}

Matrix feedback_matrix(const BscParam& bsc) {
  return Matrix::from_rows({{bsc.p, 1.0 - bsc.p}, {1.0 - bsc.p, bsc.p}});
}

double expected_phases_one_relay(double p_bar_sd, const BscParam& bsc) {
  check_probability(p_bar_sd, "p_bar_sd");
  return (2.0 * p_bar_sd - 1.0) * bsc.p + 2.0 - p_bar_sd;
}

SlopeSign phase_derivative_sign(double p_bar_sd) {
  check_probability(p_bar_sd, "p_bar_sd");
  if (p_bar_sd < 0.5) return SlopeSign::decreasing;
  if (p_bar_sd > 0.5) return SlopeSign::increasing;
  return SlopeSign::flat;
}

PhaseTree build_phase_tree(const DecodeProfile& profile, const BscParam& bsc,
                           int num_relays) {
  if (num_relays < 1)
    throw std::invalid_argument("phase tree needs at least one relay level");
  if (num_relays > kMaxTreeRelays)
    throw std::invalid_argument("phase tree depth limited to " +
                                std::to_string(kMaxTreeRelays) + " relays");
  if (static_cast<int>(profile.levels.size()) < num_relays)
    throw std::invalid_argument("decode profile shorter than tree depth");

  const double p = bsc.p;
  const int K = num_relays;

  PhaseTree tree;
  tree.num_relays = K;
  tree.feedback_p = p;
  tree.blocks.reserve((std::size_t{2} << K) - 2);
  tree.leaves.reserve(3 * (std::size_t{1} << K) - 2);

  const auto add_block = [&tree](PhaseTree::BlockKind kind, int level, double mass,
                                 std::uint32_t mask) {
    PhaseTree::Block block;
    block.kind = kind;
    block.level = static_cast<std::int16_t>(level);
    block.path_probability = mass;
    block.kind_mask = mask;
    block.terminate_leaf = -1;
    block.extend_leaf = -1;
    block.extend_positive = -1;
    block.extend_negative = -1;
    tree.blocks.push_back(block);
    return static_cast<std::int32_t>(tree.blocks.size() - 1);
  };
  const auto add_leaf = [&tree](double mass, std::uint32_t mask, int level,
                                int multiplier) {
    tree.leaves.push_back({mass, mask, static_cast<std::int16_t>(level),
                           static_cast<std::int16_t>(multiplier)});
    return static_cast<std::int32_t>(tree.leaves.size() - 1);
  };

  const double q0 = profile.levels[0];
  add_block(PhaseTree::BlockKind::positive, 1, q0, 0x1u);
  add_block(PhaseTree::BlockKind::negative, 1, 1.0 - q0, 0x0u);

  // Blocks are appended level by level, so a single index sweep visits each
  // one after its children slots exist.
  for (std::size_t i = 0; i < tree.blocks.size(); ++i) {
    const int level = tree.blocks[i].level;
    const double mass = tree.blocks[i].path_probability;
    const std::uint32_t mask = tree.blocks[i].kind_mask;
    const bool positive = tree.blocks[i].kind == PhaseTree::BlockKind::positive;

    // Observed ACK ends the exchange; a positive block's true symbol is ACK,
    // a negative block's is NACK.
    const double terminate_prob = positive ? p : 1.0 - p;
    const double extend_prob = positive ? 1.0 - p : p;

    tree.blocks[i].terminate_leaf = add_leaf(mass * terminate_prob, mask, level, level);

    const double extend_mass = mass * extend_prob;
    if (level == K) {
      tree.blocks[i].extend_leaf = add_leaf(extend_mass, mask, level, K + 1);
    } else {
      const double q = profile.levels[level];
      const std::uint32_t child_bit = 1u << level;
      tree.blocks[i].extend_positive = add_block(
          PhaseTree::BlockKind::positive, level + 1, extend_mass * q, mask | child_bit);
      tree.blocks[i].extend_negative = add_block(
          PhaseTree::BlockKind::negative, level + 1, extend_mass * (1.0 - q), mask);
    }
  }
  return tree;
}

double expected_phases_tree(const PhaseTree& tree) {
  KahanSum total_mass;
  KahanSum phases;
  for (const auto& leaf : tree.leaves) {
    total_mass.add(leaf.path_probability);
    phases.add(leaf.path_probability * leaf.multiplier);
  }
  if (std::abs(total_mass.value() - 1.0) > 1e-9)
    throw InternalError("phase tree leaf probabilities do not sum to 1");
  return phases.value();
}

double expected_phases_matrix(const DecodeProfile& profile, const BscParam& bsc,
                              int num_relays) {
  if (num_relays < 1)
    throw std::invalid_argument("matrix form needs at least one relay level");
  if (static_cast<int>(profile.levels.size()) < num_relays)
    throw std::invalid_argument("decode profile shorter than relay count");

  const int K = num_relays;
  const Matrix P = feedback_matrix(bsc);

  // Row vector of [positive, negative] block masses at the current level.
  Matrix block(1, 2);
  block(0, 0) = profile.levels[0];
  block(0, 1) = 1.0 - profile.levels[0];

  // Column of per-level terminated masses; the last entry is the mass that
  // runs past the deepest level.
  Matrix terminated(K + 1, 1);
  for (int level = 1; level <= K; ++level) {
    const Matrix observed = block * P;  // [mass observed ACK, mass observed NACK]
    terminated(level - 1, 0) = observed(0, 0);
    if (level == K) {
      terminated(K, 0) = observed(0, 1);
      break;
    }
    Matrix carry(1, 2, observed(0, 1));
    Matrix split(1, 2);
    split(0, 0) = profile.levels[level];
    split(0, 1) = 1.0 - profile.levels[level];
    block = hadamard(carry, split);
  }

  Matrix phase_counts(1, K + 1);  // K_{K+1} = [1, 2, ..., K+1]
  for (int i = 0; i <= K; ++i) phase_counts(0, i) = i + 1;
  return (phase_counts * terminated)(0, 0);
}

double expected_phases(const DecodeProfile& profile, const BscParam& bsc,
                       int num_relays) {
  if (num_relays < 0) throw std::invalid_argument("negative relay count");
  if (num_relays == 0) return 1.0;  // direct transmission, no feedback consumed
  return expected_phases_matrix(profile, bsc, num_relays);
}

}  // namespace relayfb
