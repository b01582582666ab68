#include "relayfb/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace relayfb {

namespace {

// Integer accumulators only, so partition merging is exact and the merged
// result does not depend on thread scheduling.
struct Accumulator {
  std::uint64_t blocks = 0;
  std::uint64_t phase_sum = 0;
  std::uint64_t phase_sq_sum = 0;
  std::uint64_t outages = 0;
  std::uint64_t collisions = 0;
  std::vector<std::uint64_t> histogram;        // index i: blocks with N == i+1
  std::vector<std::uint64_t> level_reached;    // feedback decision at level l+1 happened
  std::vector<std::uint64_t> level_decoded;    // ...and the destination had decoded

  explicit Accumulator(int num_relays)
      : histogram(num_relays + 1, 0),
        level_reached(num_relays, 0),
        level_decoded(num_relays, 0) {}

  void merge(const Accumulator& other) {
    blocks += other.blocks;
    phase_sum += other.phase_sum;
    phase_sq_sum += other.phase_sq_sum;
    outages += other.outages;
    collisions += other.collisions;
    for (std::size_t i = 0; i < histogram.size(); ++i) histogram[i] += other.histogram[i];
    for (std::size_t i = 0; i < level_reached.size(); ++i) {
      level_reached[i] += other.level_reached[i];
      level_decoded[i] += other.level_decoded[i];
    }
  }
};

void validate(const SimConfig& config) {
  if (config.blocks == 0) throw std::invalid_argument("simulation needs blocks >= 1");
  if (config.partitions == 0) throw std::invalid_argument("partitions must be >= 1");
}

void simulate_partition(const SimConfig& config, std::uint64_t blocks,
                        RandomStream rng, Accumulator& acc) {
  const int K = config.channel.num_relays();
  const double threshold = decode_threshold(config.rate, config.channel.snr);
  const double flip_prob = 1.0 - config.feedback.p;
  const bool shared = config.observation == FeedbackObservation::shared;

  for (std::uint64_t b = 0; b < blocks; ++b) {
    const FadingRealization g = draw_realization(config.channel, rng);

    double accumulated = g.g_sd;
    bool decoded = accumulated >= threshold;
    int phases = 1;
    bool collided = false;

    for (int level = 1; level <= K; ++level) {
      acc.level_reached[level - 1] += 1;
      acc.level_decoded[level - 1] += decoded ? 1 : 0;

      // The destination answers truthfully; observations may flip.
      const bool truth_ack = decoded;
      bool relay_ack;
      if (shared) {
        relay_ack = truth_ack != rng.bernoulli(flip_prob);
      } else {
        const bool source_ack = truth_ack != rng.bernoulli(flip_prob);
        relay_ack = truth_ack != rng.bernoulli(flip_prob);
        // Relay retransmits while the source already moves on: collision.
        if (!relay_ack && source_ack) collided = true;
      }
      if (relay_ack) break;

      // Relay `level` takes the next phase. A DF relay that could not decode
      // the source stays silent but its phase is spent regardless.
      const int k = level - 1;
      if (config.strategy == Strategy::df) {
        if (g.g_sr[k] >= threshold) accumulated += g.g_rd[k];
      } else {
        accumulated += af_relay_term(g, k, config.channel.snr);
      }
      ++phases;
      decoded = accumulated >= threshold;
    }

    acc.blocks += 1;
    acc.phase_sum += static_cast<std::uint64_t>(phases);
    acc.phase_sq_sum += static_cast<std::uint64_t>(phases) * phases;
    acc.histogram[phases - 1] += 1;
    acc.outages += decoded ? 0 : 1;
    acc.collisions += collided ? 1 : 0;
  }
}

Accumulator simulate(const SimConfig& config) {
  validate(config);
  const int K = config.channel.num_relays();
  const unsigned parts = config.partitions;

  std::vector<Accumulator> partial(parts, Accumulator(K));
  if (parts == 1) {
    simulate_partition(config, config.blocks, RandomStream::substream(config.seed, 0),
                       partial[0]);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(parts);
    for (unsigned i = 0; i < parts; ++i) {
      const std::uint64_t share =
          config.blocks / parts + (i < config.blocks % parts ? 1 : 0);
      workers.emplace_back([&config, &partial, i, share] {
        simulate_partition(config, share, RandomStream::substream(config.seed, i),
                           partial[i]);
      });
    }
    for (auto& w : workers) w.join();
  }

  Accumulator total(K);
  for (const auto& acc : partial) total.merge(acc);  // fixed merge order
  return total;
}

}  // namespace

SimReport run(const SimConfig& config) {
  const Accumulator acc = simulate(config);
  const double n = static_cast<double>(acc.blocks);

  SimReport report;
  report.blocks_run = acc.blocks;
  report.collision_blocks = acc.collisions;
  report.phase_histogram = acc.histogram;
  report.mean_phases = static_cast<double>(acc.phase_sum) / n;
  if (acc.blocks > 1) {
    const double mean = report.mean_phases;
    const double var =
        (static_cast<double>(acc.phase_sq_sum) - n * mean * mean) / (n - 1.0);
    report.phases_std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  report.outage_rate = static_cast<double>(acc.outages) / n;
  report.outage_std_error =
      std::sqrt(report.outage_rate * (1.0 - report.outage_rate) / n);
  return report;
}

ProfileEstimate empirical_decode_profile(const SimConfig& config) {
  const Accumulator acc = simulate(config);
  const int K = config.channel.num_relays();

  ProfileEstimate estimate;
  estimate.levels.resize(std::max(K, 1));
  if (K == 0) {
    // No feedback decisions happen; report the direct-link success rate.
    auto& level = estimate.levels[0];
    level.samples = acc.blocks;
    level.value = 1.0 - static_cast<double>(acc.outages) / static_cast<double>(acc.blocks);
    level.std_error =
        std::sqrt(level.value * (1.0 - level.value) / static_cast<double>(acc.blocks));
    return estimate;
  }

  for (int k = 0; k < K; ++k) {
    auto& level = estimate.levels[k];
    level.samples = acc.level_reached[k];
    if (level.samples == 0) {
      level.value = 0.5;
      level.std_error = 0.5;
      level.low_confidence = true;
      continue;
    }
    const double n = static_cast<double>(level.samples);
    level.value = static_cast<double>(acc.level_decoded[k]) / n;
    level.std_error = std::sqrt(level.value * (1.0 - level.value) / n);
    level.low_confidence = level.samples < 100;
  }
  return estimate;
}

}  // namespace relayfb
