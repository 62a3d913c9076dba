#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tunnelstat/config.hpp"
#include "tunnelstat/figures.hpp"
#include "tunnelstat/oracle.hpp"
#include "tunnelstat/wkb.hpp"

namespace py = pybind11;
using namespace tunnelstat;

namespace {

BarrierSpec make_delta_comb(const std::vector<double>& positions,
                            const std::vector<double>& strengths) {
    BarrierSpec spec = DeltaComb{positions, strengths};
    validate(spec);
    return spec;
}

BarrierSpec make_rectangular(double height, double width, double left_edge) {
    BarrierSpec spec = Rectangular{height, width, left_edge};
    validate(spec);
    return spec;
}

BarrierSpec make_piecewise(const std::vector<double>& breakpoints,
                           const std::vector<double>& heights) {
    BarrierSpec spec = PiecewiseConstant{breakpoints, heights};
    validate(spec);
    return spec;
}

}  // namespace

PYBIND11_MODULE(_tunnelstat, m) {
    m.doc() = "Tunnelling statistics of two fermionised atoms on 1D barriers";

    py::class_<BarrierSpec>(m, "BarrierSpec")
        .def("__repr__", [](const BarrierSpec& s) { return describe(s); });
    m.def("delta_comb", &make_delta_comb, py::arg("positions"),
          py::arg("strengths"));
    m.def("rectangular", &make_rectangular, py::arg("height"), py::arg("width"),
          py::arg("left_edge") = 0.0);
    m.def("piecewise_constant", &make_piecewise, py::arg("breakpoints"),
          py::arg("heights"));
    m.def("mirrored", &mirrored);

    py::class_<AmplitudePair>(m, "AmplitudePair")
        .def_readonly("BT", &AmplitudePair::BT)
        .def_readonly("BR", &AmplitudePair::BR);
    m.def("amplitudes", &amplitudes, py::arg("spec"), py::arg("p"),
          py::arg("m") = 1.0);
    m.def("transparency", &transparency, py::arg("spec"), py::arg("p"),
          py::arg("m") = 1.0);
    m.def("log_transparency", &log_transparency, py::arg("spec"), py::arg("p"),
          py::arg("m") = 1.0);

    py::class_<AmplitudeTable>(m, "AmplitudeTable")
        .def_property_readonly("p_grid", &AmplitudeTable::p_grid)
        .def_property_readonly("mass", &AmplitudeTable::mass)
        .def("transparency_at", &AmplitudeTable::transparency_at)
        .def("log_transparency_at", &AmplitudeTable::log_transparency_at);
    m.def("build_table", &build_table, py::arg("spec"), py::arg("p_grid"),
          py::arg("m") = 1.0);

    py::class_<GaussianPacket>(m, "GaussianPacket")
        .def(py::init([](double p0, double sigma, double m, double x0,
                         double t_emit) {
                 GaussianPacket pkt{p0, sigma, m, x0, t_emit};
                 validate(pkt);
                 return pkt;
             }),
             py::arg("p0"), py::arg("sigma"), py::arg("m") = 1.0,
             py::arg("x0") = 0.0, py::arg("t_emit") = 0.0)
        .def_readonly("p0", &GaussianPacket::p0)
        .def_readonly("sigma", &GaussianPacket::sigma)
        .def_readonly("m", &GaussianPacket::m)
        .def_readonly("x0", &GaussianPacket::x0)
        .def_readonly("t_emit", &GaussianPacket::t_emit)
        .def("truncated_mass", &GaussianPacket::truncated_mass);
    m.def("momentum_amplitude", &momentum_amplitude);
    m.def("momentum_density", &momentum_density);
    m.def("position_wavefunction", &position_wavefunction, py::arg("packet"),
          py::arg("x"), py::arg("t"));
    m.def("initial_overlap_decay", &initial_overlap_decay, py::arg("packet"),
          py::arg("T"));

    py::enum_<StatisticsKind>(m, "StatisticsKind")
        .value("Fermionised", StatisticsKind::Fermionised)
        .value("Boson", StatisticsKind::Boson);

    py::class_<OutcomeStats>(m, "OutcomeStats")
        .def_readonly("PT", &OutcomeStats::PT)
        .def_readonly("PR", &OutcomeStats::PR)
        .def_readonly("deltaP", &OutcomeStats::deltaP)
        .def_readonly("P_TT", &OutcomeStats::P_TT)
        .def_readonly("P_RT", &OutcomeStats::P_RT)
        .def_readonly("P_RR", &OutcomeStats::P_RR)
        .def_readonly("kind", &OutcomeStats::kind)
        .def_readonly("T", &OutcomeStats::T);
    m.def("one_particle_probabilities",
          [](const GaussianPacket& pkt, const AmplitudeTable& t) {
              const auto r = one_particle_probabilities(pkt, t);
              return std::make_pair(r.PT, r.PR);
          });
    m.def("exchange_term", &exchange_term, py::arg("packet"), py::arg("table"),
          py::arg("T"));
    m.def("exchange_ratio", &exchange_ratio, py::arg("packet"), py::arg("table"),
          py::arg("T"));
    m.def("outcome_probabilities", &outcome_probabilities, py::arg("PT"),
          py::arg("deltaP"), py::arg("kind"), py::arg("T") = 0.0);
    m.def("mean_transmitted_number", &mean_transmitted_number);

    py::class_<Resonance>(m, "Resonance")
        .def_readonly("n", &Resonance::n)
        .def_readonly("E_r", &Resonance::E_r)
        .def_readonly("p_r", &Resonance::p_r)
        .def_readonly("Gamma", &Resonance::Gamma)
        .def_readonly("peak_transparency", &Resonance::peak_transparency);
    m.def(
        "find_resonances",
        [](const BarrierSpec& spec, double m, double e_lo, double e_hi) {
            return find_resonances(spec, m, {e_lo, e_hi});
        },
        py::arg("spec"), py::arg("m"), py::arg("E_lo"), py::arg("E_hi"));
    m.def("breit_wigner_transparency", &breit_wigner_transparency);
    m.def(
        "single_resonance_ptt",
        [](const GaussianPacket& pkt, const Resonance& r, double T) {
            const auto pred = single_resonance_ptt(pkt, r, T);
            return std::make_pair(pred.value, pred.reliable);
        },
        py::arg("packet"), py::arg("resonance"), py::arg("T"));
    m.def(
        "two_resonance_delta_p",
        [](const GaussianPacket& pkt, const Resonance& a, const Resonance& b,
           double T) {
            const auto pred = two_resonance_delta_p(pkt, a, b, T);
            return std::make_pair(pred.value, pred.reliable);
        },
        py::arg("packet"), py::arg("res1"), py::arg("res2"), py::arg("T"));

    py::class_<ActionExpansion>(m, "ActionExpansion")
        .def_readonly("S0", &ActionExpansion::S0)
        .def_readonly("S1", &ActionExpansion::S1)
        .def_readonly("S2", &ActionExpansion::S2)
        .def_readonly("k0", &ActionExpansion::k0)
        .def_readonly("T0", &ActionExpansion::T0);
    m.def("action_expansion", &action_expansion, py::arg("V"), py::arg("d"),
          py::arg("p0"), py::arg("m"), py::arg("sigma"));
    m.def("gaussian_decay_coefficient", &gaussian_decay_coefficient);
    m.def("broad_barrier_ptt", &broad_barrier_ptt, py::arg("expansion"),
          py::arg("PT"), py::arg("T"));
    m.def(
        "narrowing_check",
        [](const GaussianPacket& pkt, const AmplitudeTable& t) {
            const auto r = narrowing_check(pkt, t);
            return std::make_tuple(r.width_ratio, r.incident_mean,
                                   r.transmitted_mean);
        },
        py::arg("packet"), py::arg("table"));

    py::class_<OracleOutcome>(m, "OracleOutcome")
        .def_readonly("stats", &OracleOutcome::stats)
        .def_readonly("T", &OracleOutcome::T)
        .def_readonly("snapshot_time", &OracleOutcome::snapshot_time)
        .def_readonly("residual_mid_mass", &OracleOutcome::residual_mid_mass)
        .def_readonly("transmitted_mass", &OracleOutcome::transmitted_mass);
    m.def(
        "two_particle_outcomes",
        [](const GaussianPacket& pkt, const BarrierSpec& spec, double T,
           StatisticsKind kind, double points_per_wavelength,
           double max_settle_time) {
            OracleParams params;
            params.points_per_wavelength = points_per_wavelength;
            params.max_settle_time = max_settle_time;
            return two_particle_outcomes(pkt, spec, T, kind, params);
        },
        py::arg("packet"), py::arg("spec"), py::arg("T"), py::arg("kind"),
        py::arg("points_per_wavelength") = 52.0,
        py::arg("max_settle_time") = 120.0);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("columns", &Dataset::columns)
        .def_readonly("rows", &Dataset::rows)
        .def("to_csv", &Dataset::to_csv);
    m.def("run_figure", &run_figure, py::arg("tag"));
    m.def("figure_tags", &figure_tags);
    m.def("run_sweep_config",
          [](const std::string& text) { return run_sweep(parse_config_text(text)); });
}
