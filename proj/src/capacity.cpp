#include "relayfb/capacity.hpp"

#include <cmath>
#include <stdexcept>

#include "relayfb/errors.hpp"
#include "relayfb/sim.hpp"

namespace relayfb {

namespace {

constexpr double kRelativeTol = 1e-10;
constexpr int kMaxIterations = 200;

void require_one_relay(const ChannelParams& params) {
  if (params.num_relays() != 1)
    throw std::invalid_argument("capacity expressions hold for exactly one relay");
}

double log_term(const ChannelParams& params, const OutageTarget& target,
                double denominator) {
  require_one_relay(params);
  if (target.epsilon <= 0.0 || target.epsilon >= 1.0)
    throw std::domain_error("outage target must lie strictly inside (0, 1)");
  const double radicand = 2.0 * params.var_sd * params.var_sr[0] * params.var_rd[0] *
                          target.epsilon / denominator;
  return std::log2(1.0 + params.snr * std::sqrt(radicand));
}

// E(N) at candidate rate R: the one-relay closed form evaluated at the source
// outage probability this rate induces.
double phases_at(const ChannelParams& params, double rate, const BscParam& bsc) {
  return expected_phases_one_relay(source_outage_prob(params, Rate(rate)), bsc);
}

// Solves R * E(N; R) = L by bisection. E(N) >= 1 brackets the root in [0, L]:
// the defect is -L at 0 and L * (E(N) - 1) >= 0 at L.
CapacityResult solve_fixed_point(const ChannelParams& params, const OutageTarget& target,
                                 const BscParam& bsc, double L) {
  CapacityResult result;
  double lo = 0.0;
  double hi = L;
  double mid = L / phases_at(params, L, bsc);  // decent initial candidate
  int iterations = 0;
  double defect = mid * phases_at(params, mid, bsc) - L;

  while (std::abs(defect) > kRelativeTol * L && iterations < kMaxIterations) {
    if (defect > 0.0)
      hi = mid;
    else
      lo = mid;
    mid = 0.5 * (lo + hi);
    defect = mid * phases_at(params, mid, bsc) - L;
    ++iterations;
  }
  if (std::abs(defect) > kRelativeTol * L)
    throw SolverError("capacity fixed point did not converge", mid, iterations);

  result.rate = mid;
  result.expected_phases = phases_at(params, mid, bsc);
  result.iterations = iterations;
  result.residual = std::abs(defect) / L;
  return result;
}

}  // namespace

OutageTarget::OutageTarget(double epsilon_) : epsilon(epsilon_) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::domain_error("outage target must lie in [0, 1]");
}

double df_log_term(const ChannelParams& params, const OutageTarget& target) {
  return log_term(params, target, 2.0 * params.var_rd[0] + params.var_sr[0]);
}

double baf_log_term(const ChannelParams& params, const OutageTarget& target) {
  return log_term(params, target, params.var_rd[0] + params.var_sr[0]);
}

CapacityResult df_capacity(const ChannelParams& params, const OutageTarget& target,
                           const BscParam& bsc) {
  return solve_fixed_point(params, target, bsc, df_log_term(params, target));
}

CapacityResult baf_capacity(const ChannelParams& params, const OutageTarget& target,
                            const BscParam& bsc) {
  return solve_fixed_point(params, target, bsc, baf_log_term(params, target));
}

OutageEstimate outage_probability_empirical(const ChannelParams& params,
                                            const Rate& rate, const BscParam& bsc,
                                            Strategy strategy, std::uint64_t trials,
                                            std::uint64_t seed) {
  SimConfig config{params, rate, bsc, strategy, trials, seed};
  const SimReport report = run(config);
  return {report.outage_rate, report.outage_std_error};
}

}  // namespace relayfb
