#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psisac/analysis.hpp"
#include "psisac/channel.hpp"
#include "psisac/estimator.hpp"
#include "psisac/harness.hpp"
#include "psisac/numerics.hpp"
#include "psisac/waveform.hpp"

namespace py = pybind11;
using namespace psisac;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Uplink OFDMA pilot allocation: overlapped phase-shifted block "
              "pilots vs interleaved combs";

    py::register_exception<config_error>(m, "ConfigError");

    py::enum_<Scheme>(m, "Scheme")
        .value("PS_ISAC", Scheme::PS_ISAC)
        .value("CI_ISAC", Scheme::CI_ISAC);
    py::enum_<PowerMode>(m, "PowerMode")
        .value("CONSTRAINED", PowerMode::CONSTRAINED)
        .value("UNCONSTRAINED", PowerMode::UNCONSTRAINED);

    m.def("scheme_from_string", &scheme_from_string, py::arg("name"));
    m.def("power_mode_from_string", &power_mode_from_string, py::arg("name"));
    m.def("to_string", py::overload_cast<Scheme>(&to_string), py::arg("s"));
    m.def("to_string", py::overload_cast<PowerMode>(&to_string), py::arg("m"));

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
             py::arg("stream_id") = 0)
        .def("next_u64", &RngStream::next_u64)
        .def("uniform01", &RngStream::uniform01)
        .def("substream", &RngStream::substream, py::arg("k"))
        .def_property_readonly("seed", &RngStream::seed)
        .def_property_readonly("stream_id", &RngStream::stream_id);

    m.def("dft", &dft, py::arg("x"));
    m.def("idft", &idft, py::arg("x"));
    m.def("complex_gaussian", &complex_gaussian, py::arg("rng"), py::arg("n"),
          py::arg("variance"));

    py::class_<SystemConfig>(m, "SystemConfig")
        .def(py::init<>())
        .def_readwrite("n_fft", &SystemConfig::n_fft)
        .def_readwrite("n_cp", &SystemConfig::n_cp)
        .def_readwrite("num_tx", &SystemConfig::num_tx)
        .def_readwrite("pilot_ratio", &SystemConfig::pilot_ratio)
        .def_readwrite("scheme", &SystemConfig::scheme)
        .def_readwrite("power_mode", &SystemConfig::power_mode)
        .def_readwrite("noise_variance", &SystemConfig::noise_variance)
        .def_readwrite("num_taps", &SystemConfig::num_taps)
        .def_readwrite("seed", &SystemConfig::seed)
        .def("validate", &SystemConfig::validate);

    py::class_<PilotGrid>(m, "PilotGrid")
        .def(py::init<>())
        .def_readwrite("per_tx", &PilotGrid::per_tx)
        .def_readwrite("allocation", &PilotGrid::allocation);

    m.def("generate_pilots", &generate_pilots, py::arg("cfg"), py::arg("rng"));
    m.def("phase_shift", &phase_shift, py::arg("pilots"), py::arg("tx_index"),
          py::arg("n_cp"), py::arg("n_fft"));
    m.def("add_cp", &add_cp, py::arg("time"), py::arg("n_cp"));
    m.def("remove_cp", &remove_cp, py::arg("time_with_cp"), py::arg("n_cp"));
    m.def("modulate_tx", &modulate_tx, py::arg("cfg"), py::arg("pilots"),
          py::arg("tx_index"));

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init<>())
        .def_readwrite("taps", &ChannelRealization::taps)
        .def_readwrite("cfr", &ChannelRealization::cfr);

    m.def("draw_channel", &draw_channel, py::arg("rng"), py::arg("num_taps"),
          py::arg("n_fft"));
    m.def("apply_channel", &apply_channel, py::arg("tx_signal_with_cp"),
          py::arg("ch"), py::arg("n_cp"));
    m.def("superpose_and_add_noise", &superpose_and_add_noise,
          py::arg("signals"), py::arg("rng"), py::arg("noise_variance"));

    py::class_<EstimationResult>(m, "EstimationResult")
        .def(py::init<>())
        .def_readwrite("per_tx_cfr", &EstimationResult::per_tx_cfr)
        .def_readwrite("joint_cir", &EstimationResult::joint_cir);

    m.def("ls_estimate", &ls_estimate, py::arg("y_f"), py::arg("known_pilots"),
          py::arg("occupied"));
    m.def("separate_ps_isac", &separate_ps_isac, py::arg("h_f_joint"),
          py::arg("cfg"));
    m.def("estimate_ci_isac", &estimate_ci_isac, py::arg("y_f"),
          py::arg("pilots"), py::arg("cfg"));
    m.def("run_receiver", &run_receiver, py::arg("y_t_with_cp"),
          py::arg("pilots"), py::arg("cfg"));

    py::class_<ComplexityReport>(m, "ComplexityReport")
        .def_readonly("scheme", &ComplexityReport::scheme)
        .def_readonly("num_tx", &ComplexityReport::num_tx)
        .def_readonly("n_fft", &ComplexityReport::n_fft)
        .def_readonly("tx_additions", &ComplexityReport::tx_additions)
        .def_readonly("tx_multiplications",
                      &ComplexityReport::tx_multiplications)
        .def_readonly("rx_additions", &ComplexityReport::rx_additions)
        .def_readonly("rx_multiplications",
                      &ComplexityReport::rx_multiplications);

    m.def("complexity", &complexity, py::arg("scheme"), py::arg("u"),
          py::arg("n"));

    py::class_<RangeConfig>(m, "RangeConfig")
        .def(py::init<>())
        .def_readwrite("n_fft", &RangeConfig::n_fft)
        .def_readwrite("n_pilot", &RangeConfig::n_pilot)
        .def_readwrite("subcarrier_spacing_hz",
                       &RangeConfig::subcarrier_spacing_hz)
        .def_readwrite("light_speed_mps", &RangeConfig::light_speed_mps);

    m.def("max_unambiguous_range", &max_unambiguous_range, py::arg("rc"));
    m.def("mse", &mse, py::arg("true_cfrs"), py::arg("estimates"));
    m.def("psd", &psd, py::arg("signals"), py::arg("n_fft"));

    py::class_<MaskSpec>(m, "MaskSpec")
        .def(py::init<>())
        .def_readwrite("breakpoints", &MaskSpec::breakpoints);

    py::class_<MaskViolation>(m, "MaskViolation")
        .def_readonly("bin", &MaskViolation::bin)
        .def_readonly("excess_db", &MaskViolation::excess_db);

    m.def("load_mask", &load_mask, py::arg("path"));
    m.def("mask_limit_at", &mask_limit_at, py::arg("mask"), py::arg("f"));
    m.def("mask_check", &mask_check, py::arg("psd_db"), py::arg("mask"));

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("base", &ExperimentSpec::base)
        .def_readwrite("schemes", &ExperimentSpec::schemes)
        .def_readwrite("pilot_ratios", &ExperimentSpec::pilot_ratios)
        .def_readwrite("snr_grid_db", &ExperimentSpec::snr_grid_db)
        .def_readwrite("num_trials", &ExperimentSpec::num_trials)
        .def_readwrite("output_path", &ExperimentSpec::output_path)
        .def_readwrite("threads", &ExperimentSpec::threads);

    py::class_<ResultRow>(m, "ResultRow")
        .def_readonly("scheme", &ResultRow::scheme)
        .def_readonly("num_tx", &ResultRow::num_tx)
        .def_readonly("pilot_ratio", &ResultRow::pilot_ratio)
        .def_readonly("snr_db", &ResultRow::snr_db)
        .def_readonly("trials", &ResultRow::trials)
        .def_readonly("mse_mean", &ResultRow::mse_mean)
        .def_readonly("mse_stderr", &ResultRow::mse_stderr);

    m.def("load_experiment_spec", &load_experiment_spec, py::arg("path"));
    m.def("grid_point_config", &grid_point_config, py::arg("spec"),
          py::arg("scheme"), py::arg("pilot_ratio"), py::arg("snr_db"));
    m.def("run_trial", &run_trial, py::arg("cfg"), py::arg("seed"),
          py::arg("grid_index"), py::arg("trial_id"));
    m.def("run_experiment", &run_experiment, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("dump_cir_snapshot", &dump_cir_snapshot, py::arg("cfg"),
          py::arg("rng"), py::arg("path"));
    m.def("emit_tables", &emit_tables, py::arg("u_list"), py::arg("n"),
          py::arg("rc"), py::arg("path"));
}
