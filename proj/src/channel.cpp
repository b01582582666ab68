#include "relayfb/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace relayfb {

namespace {

void check_positive(double value, const char* name) {
  if (!(value > 0.0)) throw std::invalid_argument(std::string(name) + " must be > 0");
}

int checked_relay_index(int relay_index, int num_relays) {
  if (relay_index < 0 || relay_index >= num_relays)
    throw std::out_of_range("relay index refers to no relay in this topology");
  return relay_index;
}

}  // namespace

Rate::Rate(double bits_per_use) : r(bits_per_use) {
  if (!(r >= 0.0)) throw std::invalid_argument("rate must be >= 0");
}

ChannelParams::ChannelParams(double var_sd_, std::vector<double> var_sr_,
                             std::vector<double> var_rd_, double snr_)
    : var_sd(var_sd_), var_sr(std::move(var_sr_)), var_rd(std::move(var_rd_)), snr(snr_) {
  check_positive(var_sd, "var_sd");
  check_positive(snr, "snr");
  if (var_sr.size() != var_rd.size())
    throw std::invalid_argument("var_sr and var_rd must have one entry per relay");
  for (double v : var_sr) check_positive(v, "var_sr entry");
  for (double v : var_rd) check_positive(v, "var_rd entry");
}

double decode_threshold(const Rate& rate, double snr) {
  check_positive(snr, "snr");
  return std::expm1(2.0 * rate.r * M_LN2) / snr;  // (2^(2r) - 1) / snr
}

FadingRealization draw_realization(const ChannelParams& params, RandomStream& rng) {
  FadingRealization out;
  out.g_sd = rng.exponential(params.var_sd);
  out.g_sr.reserve(params.var_sr.size());
  out.g_rd.reserve(params.var_rd.size());
  for (double v : params.var_sr) out.g_sr.push_back(rng.exponential(v));
  for (double v : params.var_rd) out.g_rd.push_back(rng.exponential(v));
  return out;
}

double source_outage_prob(const ChannelParams& params, const Rate& rate) {
  const double threshold = decode_threshold(rate, params.snr);
  return -std::expm1(-threshold / params.var_sd);
}

bool df_decode_after_relay(const FadingRealization& realization, int relay_index,
                           const Rate& rate, double snr) {
  const int k = checked_relay_index(relay_index, static_cast<int>(realization.g_rd.size()));
  return realization.g_sd + realization.g_rd[k] >= decode_threshold(rate, snr);
}

double af_relay_term(const FadingRealization& realization, int relay_index, double snr) {
  const int k = checked_relay_index(relay_index, static_cast<int>(realization.g_rd.size()));
  const double g_sr = realization.g_sr[k];
  const double g_rd = realization.g_rd[k];
  return g_sr * g_rd / (g_sr + g_rd + 1.0 / snr);
}

bool af_decode_after_relay(const FadingRealization& realization, int relay_index,
                           const Rate& rate, double snr) {
  return realization.g_sd + af_relay_term(realization, relay_index, snr) >=
         decode_threshold(rate, snr);
}

DecodeProfile ProfileEstimate::profile() const {
  std::vector<double> values;
  values.reserve(levels.size());
  for (const auto& level : levels) values.push_back(level.value);
  return DecodeProfile(std::move(values));
}

ProfileEstimate decode_profile(const ChannelParams& params, const Rate& rate,
                               Strategy strategy, std::uint64_t trials,
                               RandomStream& rng, Conditioning conditioning) {
  if (trials == 0) throw std::invalid_argument("decode profile needs trials >= 1");

  const int K = params.num_relays();
  const double threshold = decode_threshold(rate, params.snr);

  ProfileEstimate estimate;
  estimate.levels.resize(std::max(K, 1));
  estimate.levels[0].value = 1.0 - source_outage_prob(params, rate);

  if (K <= 1) return estimate;

  // decode_count[k] / sample_count[k] estimate the level-(k+1) probability.
  std::vector<std::uint64_t> decode_count(K - 1, 0), sample_count(K - 1, 0);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const FadingRealization g = draw_realization(params, rng);
    double accumulated = g.g_sd;
    bool decoded = accumulated >= threshold;
    for (int k = 0; k < K - 1; ++k) {
      const bool eligible =
          conditioning == Conditioning::unconditional || !decoded;
      if (strategy == Strategy::df) {
        if (g.g_sr[k] >= threshold) accumulated += g.g_rd[k];
      } else {
        accumulated += af_relay_term(g, k, params.snr);
      }
      decoded = accumulated >= threshold;
      if (eligible) {
        ++sample_count[k];
        decode_count[k] += decoded ? 1 : 0;
      }
    }
  }

  for (int k = 0; k < K - 1; ++k) {
    auto& level = estimate.levels[k + 1];
    level.samples = sample_count[k];
    if (sample_count[k] == 0) {
      level.value = 0.5;
      level.std_error = 0.5;
      level.low_confidence = true;
      continue;
    }
    const double n = static_cast<double>(sample_count[k]);
    level.value = static_cast<double>(decode_count[k]) / n;
    level.std_error = std::sqrt(level.value * (1.0 - level.value) / n);
    level.low_confidence = sample_count[k] < 100;
  }
  return estimate;
}

}  // namespace relayfb
