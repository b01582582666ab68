#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "relayfb/channel.hpp"
#include "relayfb/random.hpp"

using namespace relayfb;

namespace {

ChannelParams one_relay(double var_sd, double var_sr, double var_rd, double snr) {
  return ChannelParams(var_sd, {var_sr}, {var_rd}, snr);
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ChannelParams(0.0, {}, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams(1.0, {}, {}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams(1.0, {1.0}, {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ChannelParams(1.0, {1.0}, {-1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Rate(-0.1), std::invalid_argument);
  CHECK(one_relay(1, 1, 1, 1).num_relays() == 1);
}

TEST_CASE("decode threshold") {
  CHECK(decode_threshold(Rate(0.0), 2.0) == 0.0);
  CHECK(decode_threshold(Rate(0.5), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(decode_threshold(Rate(1.0), 2.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("squared gains are exponential with the right median and mean") {
  const std::uint64_t n = 1'000'000;
  ChannelParams params(1.0, {2.0}, {1.0}, 1.0);
  RandomStream rng(1234);
  std::uint64_t below_median = 0;
  double sr_sum = 0.0;
  const double median = std::log(2.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const FadingRealization g = draw_realization(params, rng);
    if (g.g_sd < median) ++below_median;
    sr_sum += g.g_sr[0];
  }
  CHECK(std::abs(static_cast<double>(below_median) / n - 0.5) < 0.002);
  CHECK(sr_sum / n == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("draws are deterministic per seed") {
  ChannelParams params(1.0, {0.5, 2.0}, {1.5, 3.0}, 2.0);
  RandomStream a(99), b(99);
  for (int i = 0; i < 100; ++i) {
    const FadingRealization ga = draw_realization(params, a);
    const FadingRealization gb = draw_realization(params, b);
    CHECK(ga.g_sd == gb.g_sd);
    CHECK(ga.g_sr == gb.g_sr);
    CHECK(ga.g_rd == gb.g_rd);
  }
}

TEST_CASE("source outage probability") {
  ChannelParams params = one_relay(1.0, 1.0, 1.0, 1.0);
  CHECK(source_outage_prob(params, Rate(0.0)) == 0.0);
  // threshold (2^1 - 1)/1 = 1, so P_bar = 1 - exp(-1)
  CHECK(source_outage_prob(params, Rate(0.5)) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

  // Monte Carlo cross-check of the same value.
  RandomStream rng(7);
  std::uint64_t outages = 0;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i)
    if (draw_realization(params, rng).g_sd < 1.0) ++outages;
  const double p_hat = static_cast<double>(outages) / n;
  const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
  CHECK(std::abs(p_hat - (1.0 - std::exp(-1.0))) < 3.0 * se);
}

TEST_CASE("source outage probability is monotone in rate, SNR, and variance") {
  double previous = -1.0;
  for (double r = 0.0; r <= 2.0; r += 0.1) {
    const double value = source_outage_prob(one_relay(1, 1, 1, 1), Rate(r));
    CHECK(value >= previous);
    previous = value;
  }
  previous = 2.0;
  for (double snr = 0.25; snr <= 16.0; snr *= 2.0) {
    const double value = source_outage_prob(one_relay(1, 1, 1, snr), Rate(0.5));
    CHECK(value < previous);
    previous = value;
  }
  previous = 2.0;
  for (double var = 0.25; var <= 16.0; var *= 2.0) {
    const double value = source_outage_prob(one_relay(var, 1, 1, 1), Rate(0.5));
    CHECK(value < previous);
    previous = value;
  }
  CHECK(source_outage_prob(one_relay(1, 1, 1, 1e12), Rate(0.5)) < 1e-11);
}

TEST_CASE("DF decode test after the relay") {
  FadingRealization g{0.6, {1.0}, {0.5}};
  CHECK(df_decode_after_relay(g, 0, Rate(0.5), 1.0));  // 1.1 >= 1
  FadingRealization zero{0.0, {1.0}, {0.0}};
  CHECK_FALSE(df_decode_after_relay(zero, 0, Rate(0.5), 1.0));
  CHECK(df_decode_after_relay(zero, 0, Rate(0.0), 1.0));  // zero rate always decodes
  CHECK_THROWS_AS(df_decode_after_relay(g, 1, Rate(0.5), 1.0), std::out_of_range);
  CHECK_THROWS_AS(df_decode_after_relay(g, -1, Rate(0.5), 1.0), std::out_of_range);
}

TEST_CASE("DF decode is monotone in every gain") {
  oracles::TestRng rng(17);
  for (int i = 0; i < 2000; ++i) {
    FadingRealization g{rng.uniform(0, 2), {rng.uniform(0, 2)}, {rng.uniform(0, 2)}};
    const Rate rate(rng.uniform(0.1, 1.0));
    const bool before = df_decode_after_relay(g, 0, rate, 1.0);
    g.g_sd += rng.uniform(0, 1);
    g.g_rd[0] += rng.uniform(0, 1);
    if (before) CHECK(df_decode_after_relay(g, 0, rate, 1.0));
  }
}

TEST_CASE("DF decode rate matches the sum-of-exponentials tail") {
  const ChannelParams params = one_relay(1.0, 1.0, 2.0, 1.0);
  const Rate rate(0.5);  // threshold 1
  RandomStream rng(321);
  const std::uint64_t n = 1'000'000;
  std::uint64_t decoded = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    if (df_decode_after_relay(draw_realization(params, rng), 0, rate, params.snr))
      ++decoded;
  const double p_hat = static_cast<double>(decoded) / n;
  const double expected = oracles::hypoexponential_tail(1.0, 1.0, 2.0);
  const double se = std::sqrt(expected * (1.0 - expected) / n);
  CHECK(std::abs(p_hat - expected) < 3.0 * se);
}

TEST_CASE("AF decode test") {
  // Dead source-relay link: the relay contributes nothing.
  FadingRealization dead{1.2, {0.0}, {5.0}};
  CHECK(af_decode_after_relay(dead, 0, Rate(0.5), 1.0) == (dead.g_sd >= 1.0));
  dead.g_sd = 0.9;
  CHECK_FALSE(af_decode_after_relay(dead, 0, Rate(0.5), 1.0));

  // 0.5 + 1/(1+1+1) < 1
  FadingRealization g{0.5, {1.0}, {1.0}};
  CHECK(af_relay_term(g, 0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK_FALSE(af_decode_after_relay(g, 0, Rate(0.5), 1.0));
  CHECK_THROWS_AS(af_decode_after_relay(g, 2, Rate(0.5), 1.0), std::out_of_range);
}

TEST_CASE("AF relay term is bounded by the weaker hop and grows with SNR") {
  oracles::TestRng rng(19);
  for (int i = 0; i < 2000; ++i) {
    const FadingRealization g{rng.uniform(0, 3), {rng.uniform(0, 3)}, {rng.uniform(0, 3)}};
    const double snr_low = rng.uniform(0.1, 1.0);
    const double snr_high = snr_low * rng.uniform(1.0, 50.0);
    const double term = af_relay_term(g, 0, snr_low);
    CHECK(term <= std::min(g.g_sr[0], g.g_rd[0]) + 1e-15);
    CHECK(af_relay_term(g, 0, snr_high) >= term);
  }
}

TEST_CASE("decode profile basics") {
  RandomStream rng(5);
  const ChannelParams direct(1.0, {}, {}, 1.0);
  const ProfileEstimate only_source =
      decode_profile(direct, Rate(0.5), Strategy::af, 10, rng);
  REQUIRE(only_source.levels.size() == 1);
  CHECK(only_source.levels[0].value ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(decode_profile(direct, Rate(0.5), Strategy::df, 0, rng),
                  std::invalid_argument);
}

TEST_CASE("unconditional DF level matches the Erlang-2 tail when the relay always decodes") {
  // A huge source-relay variance forces the relay decode event.
  const ChannelParams params(1.0, {1e9, 1e9}, {1.0, 1.0}, 1.0);
  RandomStream rng(77);
  const std::uint64_t trials = 400'000;
  const ProfileEstimate estimate = decode_profile(
      params, Rate(0.5), Strategy::df, trials, rng, Conditioning::unconditional);
  REQUIRE(estimate.levels.size() == 2);
  const double expected = oracles::hypoexponential_tail(1.0, 1.0, 1.0);  // (1+t)e^{-t}
  CHECK(expected == doctest::Approx(0.7358).epsilon(1e-4));
  CHECK(std::abs(estimate.levels[1].value - expected) <
        3.0 * std::max(estimate.levels[1].std_error, 1e-12));
  CHECK(estimate.levels[1].samples == trials);
}

TEST_CASE("path-conditional DF level matches brute-force joint sampling") {
  const ChannelParams params(1.0, {1e9, 1e9}, {1.0, 1.0}, 1.0);
  RandomStream rng(78);
  const std::uint64_t trials = 400'000;
  const ProfileEstimate estimate = decode_profile(
      params, Rate(0.5), Strategy::df, trials, rng, Conditioning::path_conditional);

  // Independent rejection sampler over the joint distribution.
  oracles::TestRng ref(2024);
  std::uint64_t kept = 0, decoded = 0;
  std::exponential_distribution<double> unit_exp(1.0);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const double g_sd = unit_exp(ref.engine);
    const double g_rd = unit_exp(ref.engine);
    if (g_sd >= 1.0) continue;  // conditioning: source phase failed
    ++kept;
    if (g_sd + g_rd >= 1.0) ++decoded;
  }
  const double ref_value = static_cast<double>(decoded) / static_cast<double>(kept);
  const double ref_se = std::sqrt(ref_value * (1.0 - ref_value) / kept);
  const double combined =
      std::sqrt(ref_se * ref_se +
                estimate.levels[1].std_error * estimate.levels[1].std_error);
  CHECK(std::abs(estimate.levels[1].value - ref_value) < 3.0 * combined);

  // Closed form for the same conditional probability: 1 / (e - 1).
  CHECK(std::abs(estimate.levels[1].value - 1.0 / (M_E - 1.0)) <
        3.0 * estimate.levels[1].std_error);
}

TEST_CASE("decode profile estimates are probabilities with bounded standard error") {
  const ChannelParams params(1.0, {0.8, 1.2, 0.6}, {1.0, 0.7, 1.4}, 2.0);
  for (const auto conditioning :
       {Conditioning::unconditional, Conditioning::path_conditional}) {
    RandomStream rng(31);
    const std::uint64_t trials = 50'000;
    const ProfileEstimate estimate =
        decode_profile(params, Rate(0.6), Strategy::af, trials, rng, conditioning);
    REQUIRE(estimate.levels.size() == 3);
    for (const auto& level : estimate.levels) {
      CHECK(level.value >= 0.0);
      CHECK(level.value <= 1.0);
      if (conditioning == Conditioning::unconditional && level.samples > 0) {
        CHECK(level.samples == trials);
        CHECK(level.std_error <= 0.5 / std::sqrt(static_cast<double>(trials)));
      }
    }
  }
}

TEST_CASE("unconditional DF levels are monotone in the relay count") {
  const ChannelParams params(1.0, {1e9, 1e9, 1e9, 1e9}, {1.0, 1.0, 1.0, 1.0}, 1.0);
  RandomStream rng(41);
  const ProfileEstimate estimate = decode_profile(
      params, Rate(0.5), Strategy::df, 100'000, rng, Conditioning::unconditional);
  for (std::size_t k = 1; k < estimate.levels.size(); ++k)
    CHECK(estimate.levels[k].value >= estimate.levels[k - 1].value - 1e-12);
}

TEST_CASE("halving the standard error needs four times the trials") {
  const ChannelParams params(1.0, {1.0, 1.0}, {1.0, 1.0}, 1.0);
  RandomStream rng_a(51), rng_b(52);
  const auto small = decode_profile(params, Rate(0.5), Strategy::df, 10'000, rng_a,
                                    Conditioning::unconditional);
  const auto large = decode_profile(params, Rate(0.5), Strategy::df, 40'000, rng_b,
                                    Conditioning::unconditional);
  CHECK(large.levels[1].std_error < 0.6 * small.levels[1].std_error);
}
