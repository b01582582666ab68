#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relayfb/capacity.hpp"
#include "relayfb/channel.hpp"
#include "relayfb/errors.hpp"
#include "relayfb/phases.hpp"
#include "relayfb/sim.hpp"

namespace py = pybind11;
using namespace relayfb;

namespace {

const char* slope_name(SlopeSign sign) {
  switch (sign) {
    case SlopeSign::decreasing: return "decreasing";
    case SlopeSign::flat: return "flat";
    case SlopeSign::increasing: return "increasing";
  }
  return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Expected transmission phases and outage capacity for incremental "
            "relaying with noisy one-bit feedback";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  py::enum_<Strategy>(m, "Strategy")
      .value("df", Strategy::df)
      .value("af", Strategy::af);
  py::enum_<Conditioning>(m, "Conditioning")
      .value("path_conditional", Conditioning::path_conditional)
      .value("unconditional", Conditioning::unconditional);
  py::enum_<FeedbackObservation>(m, "FeedbackObservation")
      .value("shared", FeedbackObservation::shared)
      .value("independent_per_node", FeedbackObservation::independent_per_node);

  py::class_<ChannelParams>(m, "ChannelParams")
      .def(py::init<double, std::vector<double>, std::vector<double>, double>(),
           py::arg("var_sd"), py::arg("var_sr"), py::arg("var_rd"), py::arg("snr"))
      .def_readonly("var_sd", &ChannelParams::var_sd)
      .def_readonly("var_sr", &ChannelParams::var_sr)
      .def_readonly("var_rd", &ChannelParams::var_rd)
      .def_readonly("snr", &ChannelParams::snr)
      .def("num_relays", &ChannelParams::num_relays);

  py::class_<LevelEstimate>(m, "LevelEstimate")
      .def_readonly("value", &LevelEstimate::value)
      .def_readonly("std_error", &LevelEstimate::std_error)
      .def_readonly("samples", &LevelEstimate::samples)
      .def_readonly("low_confidence", &LevelEstimate::low_confidence);

  py::class_<ProfileEstimate>(m, "ProfileEstimate")
      .def_readonly("levels", &ProfileEstimate::levels)
      .def("values", [](const ProfileEstimate& e) { return e.profile().levels; });

  py::class_<CapacityResult>(m, "CapacityResult")
      .def_readonly("rate", &CapacityResult::rate)
      .def_readonly("expected_phases", &CapacityResult::expected_phases)
      .def_readonly("iterations", &CapacityResult::iterations)
      .def_readonly("residual", &CapacityResult::residual)
      .def("sim_rate", &CapacityResult::sim_rate);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("mean_phases", &SimReport::mean_phases)
      .def_readonly("phases_std_error", &SimReport::phases_std_error)
      .def_readonly("outage_rate", &SimReport::outage_rate)
      .def_readonly("outage_std_error", &SimReport::outage_std_error)
      .def_readonly("phase_histogram", &SimReport::phase_histogram)
      .def_readonly("blocks_run", &SimReport::blocks_run)
      .def_readonly("collision_blocks", &SimReport::collision_blocks)
      .def("__eq__", [](const SimReport& a, const SimReport& b) { return a == b; });

  m.def(
      "decode_threshold",
      [](double rate, double snr) { return decode_threshold(Rate(rate), snr); },
      py::arg("rate"), py::arg("snr"));
  m.def(
      "source_outage_prob",
      [](const ChannelParams& params, double rate) {
        return source_outage_prob(params, Rate(rate));
      },
      py::arg("params"), py::arg("rate"));

  m.def(
      "expected_phases_one_relay",
      [](double p_bar_sd, double p) {
        return expected_phases_one_relay(p_bar_sd, BscParam(p));
      },
      py::arg("p_bar_sd"), py::arg("p"));
  m.def(
      "phase_derivative_sign",
      [](double p_bar_sd) { return slope_name(phase_derivative_sign(p_bar_sd)); },
      py::arg("p_bar_sd"));
  m.def(
      "expected_phases",
      [](const std::vector<double>& profile, double p, int num_relays) {
        return expected_phases(DecodeProfile(profile), BscParam(p), num_relays);
      },
      py::arg("profile"), py::arg("p"), py::arg("num_relays"),
      "E(N) for a decode profile; num_relays == 0 returns 1.");
  m.def(
      "expected_phases_tree",
      [](const std::vector<double>& profile, double p, int num_relays) {
        return expected_phases_tree(
            build_phase_tree(DecodeProfile(profile), BscParam(p), num_relays));
      },
      py::arg("profile"), py::arg("p"), py::arg("num_relays"),
      "E(N) summed over the explicit probability tree.");
  m.def(
      "phase_tree_leaves",
      [](const std::vector<double>& profile, double p, int num_relays) {
        const PhaseTree tree =
            build_phase_tree(DecodeProfile(profile), BscParam(p), num_relays);
        py::list out;
        for (const auto& leaf : tree.leaves)
          out.append(py::make_tuple(leaf.path_probability, leaf.level, leaf.multiplier));
        return out;
      },
      py::arg("profile"), py::arg("p"), py::arg("num_relays"),
      "Terminated paths as (probability, level, phase multiplier) tuples.");

  m.def(
      "decode_profile",
      [](const ChannelParams& params, double rate, Strategy strategy,
         std::uint64_t trials, std::uint64_t seed, Conditioning conditioning) {
        RandomStream rng(seed);
        return decode_profile(params, Rate(rate), strategy, trials, rng, conditioning);
      },
      py::arg("params"), py::arg("rate"), py::arg("strategy"), py::arg("trials"),
      py::arg("seed") = 0, py::arg("conditioning") = Conditioning::path_conditional);

  m.def(
      "df_capacity",
      [](const ChannelParams& params, double epsilon, double p) {
        return df_capacity(params, OutageTarget(epsilon), BscParam(p));
      },
      py::arg("params"), py::arg("epsilon"), py::arg("p"));
  m.def(
      "baf_capacity",
      [](const ChannelParams& params, double epsilon, double p) {
        return baf_capacity(params, OutageTarget(epsilon), BscParam(p));
      },
      py::arg("params"), py::arg("epsilon"), py::arg("p"));
  m.def(
      "outage_probability_empirical",
      [](const ChannelParams& params, double rate, double p, Strategy strategy,
         std::uint64_t trials, std::uint64_t seed) {
        const OutageEstimate est = outage_probability_empirical(
            params, Rate(rate), BscParam(p), strategy, trials, seed);
        return py::make_tuple(est.probability, est.std_error);
      },
      py::arg("params"), py::arg("rate"), py::arg("p"), py::arg("strategy"),
      py::arg("trials"), py::arg("seed") = 0);

  m.def(
      "simulate",
      [](const ChannelParams& params, double rate, double p, Strategy strategy,
         std::uint64_t blocks, std::uint64_t seed, FeedbackObservation observation,
         unsigned partitions) {
        return run(SimConfig{params, Rate(rate), BscParam(p), strategy, blocks, seed,
                             observation, partitions});
      },
      py::arg("params"), py::arg("rate"), py::arg("p"), py::arg("strategy"),
      py::arg("blocks"), py::arg("seed") = 0,
      py::arg("observation") = FeedbackObservation::shared, py::arg("partitions") = 1);
  m.def(
      "empirical_decode_profile",
      [](const ChannelParams& params, double rate, double p, Strategy strategy,
         std::uint64_t blocks, std::uint64_t seed, FeedbackObservation observation,
         unsigned partitions) {
        return empirical_decode_profile(SimConfig{params, Rate(rate), BscParam(p),
                                                  strategy, blocks, seed, observation,
                                                  partitions});
      },
      py::arg("params"), py::arg("rate"), py::arg("p"), py::arg("strategy"),
      py::arg("blocks"), py::arg("seed") = 0,
      py::arg("observation") = FeedbackObservation::shared, py::arg("partitions") = 1);
}
