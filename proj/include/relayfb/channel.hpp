#pragma once

#include <cstdint>
#include <vector>

#include "relayfb/phases.hpp"
#include "relayfb/random.hpp"

namespace relayfb {

/// Spectral efficiency in bits per channel use. Every in-phase transmission
/// runs at twice this rate, so the decode threshold on accumulated squared
/// gains is (2^(2r) - 1) / SNR.
struct Rate {
  explicit Rate(double bits_per_use);
  double r;
};

/// Rayleigh fading environment: per-link variances of the complex channel
/// gains plus the common transmit SNR (linear P/N0).
struct ChannelParams {
  ChannelParams(double var_sd_, std::vector<double> var_sr_,
                std::vector<double> var_rd_, double snr_);

  double var_sd;
  std::vector<double> var_sr;  // source -> relay k
  std::vector<double> var_rd;  // relay k -> destination
  double snr;

  int num_relays() const { return static_cast<int>(var_sr.size()); }
};

/// One block's squared channel gains |h|^2.
struct FadingRealization {
  double g_sd = 0.0;
  std::vector<double> g_sr;
  std::vector<double> g_rd;
};

enum class Strategy { df, af };

/// (2^(2r) - 1) / snr, the accumulated-gain level the destination needs.
double decode_threshold(const Rate& rate, double snr);

/// Draws the squared gains; each is exponential with mean equal to the
/// corresponding variance (squared magnitude of a circularly-symmetric
/// complex Gaussian).
FadingRealization draw_realization(const ChannelParams& params, RandomStream& rng);

/// P_bar_SD = Pr(|h_sd|^2 < threshold) = 1 - exp(-threshold / var_sd).
double source_outage_prob(const ChannelParams& params, const Rate& rate);

/// Decode test after relay k has retransmitted under decode-and-forward:
/// g_sd + g_rd[k] >= threshold. Only meaningful when relay k itself decoded.
bool df_decode_after_relay(const FadingRealization& realization, int relay_index,
                           const Rate& rate, double snr);

/// The amplify-and-forward relay contribution
/// g_sr * g_rd / (g_sr + g_rd + 1/snr) for relay k.
double af_relay_term(const FadingRealization& realization, int relay_index, double snr);

/// Decode test after relay k under amplify-and-forward:
/// g_sd + af_relay_term(k) >= threshold.
bool af_decode_after_relay(const FadingRealization& realization, int relay_index,
                           const Rate& rate, double snr);

/// How the per-level decode probabilities are conditioned.
///
/// The tree analysis needs one probability per level, but the decode event at
/// level k is correlated with the earlier levels. Two readings are supported:
///   unconditional      Pr(destination decodes once relays 1..k have
///                      transmitted), with no conditioning at all.
///   path_conditional   the same event conditioned on the destination NOT
///                      having decoded at any earlier level, i.e. on the
///                      history that actually reaches relay k when feedback
///                      is perfect.
/// Neither is declared "the" right one; the simulator's
/// empirical_decode_profile additionally conditions on the noisy-feedback
/// survival path, which is what makes tree predictions match simulation.
enum class Conditioning { path_conditional, unconditional };

struct LevelEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;      // 0 for analytically exact entries
  bool low_confidence = false;    // too few conditioning samples to trust
};

/// A decode profile together with the uncertainty of each level estimate.
struct ProfileEstimate {
  std::vector<LevelEstimate> levels;

  DecodeProfile profile() const;
};

/// Estimates the level probabilities for the phase tree. Entry 0 is the
/// exact P_SD = 1 - source_outage_prob; entries 1..K-1 are Monte Carlo
/// estimates over `trials` fading draws. Under DF a relay that cannot decode
/// the source stays silent and contributes nothing.
ProfileEstimate decode_profile(const ChannelParams& params, const Rate& rate,
                               Strategy strategy, std::uint64_t trials,
                               RandomStream& rng,
                               Conditioning conditioning = Conditioning::path_conditional);

}  // namespace relayfb
