// relayfb: sweep tables, capacity tables, and protocol simulation reports as
// CSV, for plotting and regression runs.
//
//   relayfb phases   --p 0.8 --pbar-sd 0.25 --num-relays 1
//   relayfb sweep    --p-grid 0:1:0.05 --pbar-grid 0,0.25,0.5,0.75,1
//   relayfb capacity --strategy df --epsilon 0.01 --p 0.9 --snr-db -10
//   relayfb simulate --num-relays 2 --rate 0.5 --p 0.7 --blocks 1000000
//
// Exit codes: 0 success, 2 usage error, 3 solver/convergence error,
// 4 internal consistency error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relayfb/capacity.hpp"
#include "relayfb/channel.hpp"
#include "relayfb/errors.hpp"
#include "relayfb/phases.hpp"
#include "relayfb/sim.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInternal = 4;

// Fixed-format decimal with 12 significant digits, locale-independent.
std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& destination) {
    if (destination != "stdout" && destination != "-") {
      file_.open(destination, std::ios::binary);
      if (!file_) throw std::invalid_argument("cannot open output file: " + destination);
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_ = &std::cout;
};

// Flat key=value config support: keys from the file are appended as flags
// unless the same flag was already given on the command line, so explicit
// flags always win. Lines starting with '#' and blank lines are skipped.
std::vector<std::string> merge_config_file(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::set<std::string> given;
  for (const auto& arg : args)
    if (arg.rfind("--", 0) == 0) given.insert(arg.substr(2, arg.find('=') - 2));

  std::ifstream file(path);
  if (!file) throw std::invalid_argument("cannot read config file: " + path);
  std::string line;
  while (std::getline(file, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config lines must be key=value: " + line);
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw std::invalid_argument("bad config key in line: " + line);
    if (given.count(key)) continue;
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    // start:stop:step, inclusive of stop up to a half-step slack
    double start, stop, step;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
        !(step > 0.0))
      throw std::invalid_argument("bad grid range: " + spec);
    for (double v = start; v <= stop + step * 0.5; v += step)
      values.push_back(std::min(v, stop));
  } else {
    std::istringstream in(spec);
    std::string token;
    while (std::getline(in, token, ','))
      if (!token.empty()) values.push_back(std::stod(token));
  }
  if (values.empty()) throw std::invalid_argument("empty grid: " + spec);
  return values;
}

std::vector<double> parse_list(const std::string& spec) { return parse_grid(spec); }

void check_unit_interval(const std::vector<double>& values, const char* name) {
  for (double v : values)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::invalid_argument(std::string(name) + " values must lie in [0, 1]");
}

struct ChannelOptions {
  double var_sd = 1.0;
  std::string var_sr = "1";
  std::string var_rd = "1";
  double snr = 1.0;
  double snr_db = 0.0;
  bool has_snr_db = false;
  int num_relays = 1;

  relayfb::ChannelParams build() const {
    const double snr_linear = has_snr_db ? std::pow(10.0, snr_db / 10.0) : snr;
    if (num_relays == 0)
      return relayfb::ChannelParams(var_sd, {}, {}, snr_linear);
    auto sr = parse_list(var_sr);
    auto rd = parse_list(var_rd);
    // A scalar variance is broadcast over all relays.
    if (sr.size() == 1 && num_relays > 1) sr.assign(num_relays, sr[0]);
    if (rd.size() == 1 && num_relays > 1) rd.assign(num_relays, rd[0]);
    if (static_cast<int>(sr.size()) != num_relays ||
        static_cast<int>(rd.size()) != num_relays)
      throw std::invalid_argument("var-sr/var-rd need one entry per relay");
    return relayfb::ChannelParams(var_sd, std::move(sr), std::move(rd), snr_linear);
  }
};

void add_channel_options(CLI::App* cmd, ChannelOptions& opts, bool with_relays) {
  cmd->add_option("--var-sd", opts.var_sd, "Variance of the source-destination gain");
  cmd->add_option("--var-sr", opts.var_sr,
                  "Source-relay variances (scalar or comma list, one per relay)");
  cmd->add_option("--var-rd", opts.var_rd, "Relay-destination variances");
  auto* snr = cmd->add_option("--snr", opts.snr, "Linear SNR (P/N0)");
  auto* snr_db = cmd->add_option("--snr-db", opts.snr_db, "SNR in dB");
  snr->excludes(snr_db);
  cmd->parse_complete_callback([&opts, snr_db] { opts.has_snr_db = snr_db->count() > 0; });
  if (with_relays)
    cmd->add_option("--num-relays", opts.num_relays, "Number of relays")
        ->check(CLI::Range(0, relayfb::kMaxTreeRelays));
}

relayfb::DecodeProfile constant_profile(double p_bar_sd, int num_relays) {
  // One-parameter profile family used by sweeps: every level carries the
  // success probability 1 - p_bar_sd.
  return relayfb::DecodeProfile(
      std::vector<double>(std::max(num_relays, 1), 1.0 - p_bar_sd));
}

void emit_phases_row(std::ostream& out, double p, double p_bar_sd, int num_relays,
                     double value) {
  out << fmt(p) << ',' << fmt(p_bar_sd) << ',' << num_relays << ',' << fmt(value)
      << '\n';
}

// ---------------------------------------------------------------------------
// subcommands

struct PhasesArgs {
  double p = 0.5;
  double p_bar_sd = -1.0;
  std::string profile;
  int num_relays = 1;
  std::uint64_t seed = 0;
  std::string out = "stdout";
};

int run_phases(const PhasesArgs& args) {
  const relayfb::BscParam bsc(args.p);
  std::optional<relayfb::DecodeProfile> profile;
  double p_bar_column = args.p_bar_sd;
  if (!args.profile.empty()) {
    auto q = parse_list(args.profile);
    check_unit_interval(q, "--profile");
    profile.emplace(std::move(q));
    p_bar_column = 1.0 - profile->levels[0];
  } else {
    if (args.p_bar_sd < 0.0)
      throw std::invalid_argument("phases needs --pbar-sd or --profile");
    check_unit_interval({args.p_bar_sd}, "--pbar-sd");
    profile.emplace(constant_profile(args.p_bar_sd, args.num_relays).levels);
  }
  const double value = relayfb::expected_phases(*profile, bsc, args.num_relays);

  Output output(args.out);
  output.stream() << "p,p_bar_sd,num_relays,expected_phases\n";
  emit_phases_row(output.stream(), args.p, p_bar_column, args.num_relays, value);
  return 0;
}

struct SweepArgs {
  std::string p_grid = "0:1:0.05";
  std::string pbar_grid = "0:1:0.1";
  int num_relays = 1;
  std::uint64_t seed = 0;
  std::string out = "stdout";
};

int run_sweep(const SweepArgs& args) {
  const auto p_values = parse_grid(args.p_grid);
  const auto pbar_values = parse_grid(args.pbar_grid);
  check_unit_interval(p_values, "--p-grid");
  check_unit_interval(pbar_values, "--pbar-grid");

  Output output(args.out);
  output.stream() << "p,p_bar_sd,num_relays,expected_phases\n";
  for (double pbar : pbar_values) {
    const auto profile = constant_profile(pbar, args.num_relays);
    for (double p : p_values) {
      const double value =
          relayfb::expected_phases(profile, relayfb::BscParam(p), args.num_relays);
      emit_phases_row(output.stream(), p, pbar, args.num_relays, value);
    }
  }
  return 0;
}

struct CapacityArgs {
  std::string strategy = "df";
  std::string epsilon = "0.01";
  std::string p = "1";
  ChannelOptions channel;
  std::uint64_t seed = 0;
  std::string out = "stdout";
};

int run_capacity(const CapacityArgs& args) {
  const auto epsilons = parse_list(args.epsilon);
  const auto ps = parse_list(args.p);
  check_unit_interval(ps, "--p");
  for (double eps : epsilons)
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("--epsilon values must lie strictly inside (0, 1)");
  if (args.strategy != "df" && args.strategy != "baf")
    throw std::invalid_argument("--strategy must be df or baf");

  const relayfb::ChannelParams params = args.channel.build();
  Output output(args.out);
  output.stream() << "strategy,epsilon,p,snr,rate,expected_phases,residual\n";
  for (double eps : epsilons) {
    for (double p : ps) {
      const relayfb::OutageTarget target(eps);
      const relayfb::BscParam bsc(p);
      const relayfb::CapacityResult result =
          args.strategy == "df" ? relayfb::df_capacity(params, target, bsc)
                                : relayfb::baf_capacity(params, target, bsc);
      output.stream() << args.strategy << ',' << fmt(eps) << ',' << fmt(p) << ','
                      << fmt(params.snr) << ',' << fmt(result.rate) << ','
                      << fmt(result.expected_phases) << ',' << fmt(result.residual)
                      << '\n';
    }
  }
  return 0;
}

struct SimulateArgs {
  std::string strategy = "df";
  double rate = 0.5;
  double p = 1.0;
  std::uint64_t blocks = 100000;
  std::uint64_t seed = 0;
  unsigned partitions = 1;
  std::string feedback = "shared";
  ChannelOptions channel;
  std::string out = "stdout";
};

int run_simulate(const SimulateArgs& args) {
  if (args.feedback != "shared" && args.feedback != "independent")
    throw std::invalid_argument("--feedback must be shared or independent");
  if (args.strategy != "df" && args.strategy != "af")
    throw std::invalid_argument("--strategy must be df or af");

  const relayfb::SimConfig config{
      args.channel.build(),
      relayfb::Rate(args.rate),
      relayfb::BscParam(args.p),
      args.strategy == "df" ? relayfb::Strategy::df : relayfb::Strategy::af,
      args.blocks,
      args.seed,
      args.feedback == "shared" ? relayfb::FeedbackObservation::shared
                                : relayfb::FeedbackObservation::independent_per_node,
      args.partitions};
  const relayfb::SimReport report = relayfb::run(config);

  // One-relay runs carry the closed-form prediction and its z-score.
  std::string analytic, z_score;
  if (config.channel.num_relays() == 1) {
    const double p_bar = relayfb::source_outage_prob(config.channel, config.rate);
    const double predicted = relayfb::expected_phases_one_relay(p_bar, config.feedback);
    analytic = fmt(predicted);
    if (report.phases_std_error > 0.0)
      z_score = fmt((report.mean_phases - predicted) / report.phases_std_error);
  }

  Output output(args.out);
  output.stream() << "record,blocks,mean_phases,phases_stderr,outage_rate,"
                     "outage_stderr,collision_blocks,analytic_phases,z_score,"
                     "phases,count,fraction\n";
  output.stream() << "summary," << report.blocks_run << ',' << fmt(report.mean_phases)
                  << ',' << fmt(report.phases_std_error) << ','
                  << fmt(report.outage_rate) << ',' << fmt(report.outage_std_error)
                  << ',' << report.collision_blocks << ',' << analytic << ','
                  << z_score << ",,,\n";
  for (std::size_t i = 0; i < report.phase_histogram.size(); ++i) {
    const double fraction = static_cast<double>(report.phase_histogram[i]) /
                            static_cast<double>(report.blocks_run);
    output.stream() << "histogram,,,,,,,,," << (i + 1) << ','
                    << report.phase_histogram[i] << ',' << fmt(fraction) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected transmission phases and outage capacity for incremental "
               "relaying with noisy one-bit feedback",
               "relayfb"};
  app.require_subcommand(1);

  PhasesArgs phases_args;
  auto* phases = app.add_subcommand("phases", "Evaluate E(N) for one parameter set");
  phases->add_option("--p", phases_args.p, "Feedback reliability")->required();
  phases->add_option("--pbar-sd", phases_args.p_bar_sd,
                     "Source-destination outage probability (constant profile)");
  phases->add_option("--profile", phases_args.profile,
                     "Comma list of per-level decode probabilities");
  phases->add_option("--num-relays", phases_args.num_relays, "Number of relays")
      ->check(CLI::Range(0, relayfb::kMaxTreeRelays));
  phases->add_option("--seed", phases_args.seed, "Random seed (unused by this analytic subcommand)");
  phases->add_option("--out", phases_args.out, "Output file or 'stdout'");
  phases->add_option("--config", "Flat key=value configuration file");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "E(N) table over (p, p_bar_sd) grids");
  sweep->add_option("--p-grid", sweep_args.p_grid, "Feedback grid: list or start:stop:step");
  sweep->add_option("--pbar-grid", sweep_args.pbar_grid, "Outage-probability grid");
  sweep->add_option("--num-relays", sweep_args.num_relays, "Number of relays")
      ->check(CLI::Range(0, relayfb::kMaxTreeRelays));
  sweep->add_option("--seed", sweep_args.seed, "Random seed (unused by this analytic subcommand)");
  sweep->add_option("--out", sweep_args.out, "Output file or 'stdout'");
  sweep->add_option("--config", "Flat key=value configuration file");

  CapacityArgs capacity_args;
  auto* capacity =
      app.add_subcommand("capacity", "Epsilon-outage capacity for DF or bursty AF");
  capacity->add_option("--strategy", capacity_args.strategy, "df or baf");
  capacity->add_option("--epsilon", capacity_args.epsilon, "Outage target(s), comma list");
  capacity->add_option("--p", capacity_args.p, "Feedback reliability value(s)");
  add_channel_options(capacity, capacity_args.channel, false);
  capacity->add_option("--seed", capacity_args.seed, "Random seed (unused by this analytic subcommand)");
  capacity->add_option("--out", capacity_args.out, "Output file or 'stdout'");
  capacity->add_option("--config", "Flat key=value configuration file");

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol simulation");
  simulate->add_option("--strategy", simulate_args.strategy, "df or af");
  simulate->add_option("--rate", simulate_args.rate, "Rate in bits per channel use")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--p", simulate_args.p, "Feedback reliability")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--blocks", simulate_args.blocks, "Number of simulated blocks");
  simulate->add_option("--seed", simulate_args.seed, "Random seed");
  simulate->add_option("--partitions", simulate_args.partitions, "Worker substreams");
  simulate->add_option("--feedback", simulate_args.feedback, "shared or independent");
  add_channel_options(simulate, simulate_args.channel, true);
  simulate->add_option("--out", simulate_args.out, "Output file or 'stdout'");
  simulate->add_option("--config", "Flat key=value configuration file");

  std::vector<std::string> args;
  try {
    args = merge_config_file(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*phases) return run_phases(phases_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*capacity) return run_capacity(capacity_args);
    if (*simulate) return run_simulate(simulate_args);
  } catch (const relayfb::SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (last iterate " << e.last_iterate()
              << " after " << e.iterations() << " iterations)\n";
    return kExitSolver;
  } catch (const relayfb::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
