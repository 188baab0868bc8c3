#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qranging/coherent_exact.hpp"
#include "qranging/info_measures.hpp"
#include "qranging/photon_stats.hpp"
#include "qranging/ranging_sim.hpp"

namespace py = pybind11;
using namespace qranging;

PYBIND11_MODULE(qranging, mod) {
    mod.doc() = "quantum vs coherent target-ranging calculations";

    py::class_<CountPmf>(mod, "CountPmf")
        .def_readonly("probs", &CountPmf::probs)
        .def_readonly("tail_mass", &CountPmf::tail_mass)
        .def_property_readonly("n_max", &CountPmf::n_max)
        .def("mean", &CountPmf::mean)
        .def("total", &CountPmf::total);

    py::class_<JointCountPmf>(mod, "JointCountPmf")
        .def_readonly("probs", &JointCountPmf::probs)
        .def_readonly("n_s_max", &JointCountPmf::n_s_max)
        .def_readonly("n_i_max", &JointCountPmf::n_i_max)
        .def_readonly("tail_mass", &JointCountPmf::tail_mass)
        .def("at", &JointCountPmf::at, py::arg("n_s"), py::arg("n_i"))
        .def("total", &JointCountPmf::total)
        .def("signal_marginal", &JointCountPmf::signal_marginal)
        .def("idler_marginal", &JointCountPmf::idler_marginal);

    py::class_<ChannelParams>(mod, "ChannelParams")
        .def(py::init<double, double>(), py::arg("kappa"), py::arg("mu_b"))
        .def_readonly("kappa", &ChannelParams::kappa)
        .def_readonly("mu_b", &ChannelParams::mu_b);

    py::class_<TmsvProbe>(mod, "TmsvProbe")
        .def(py::init<double, int>(), py::arg("mu"), py::arg("copies"))
        .def_readonly("mu", &TmsvProbe::mu)
        .def_readonly("copies", &TmsvProbe::copies)
        .def("mu0", &TmsvProbe::mu0);

    mod.def("poisson_pmf", &poisson_pmf, py::arg("mu"), py::arg("eps") = kDefaultTruncationEps);
    mod.def("neg_binomial_pmf", &neg_binomial_pmf, py::arg("r"), py::arg("mu0"),
            py::arg("eps") = kDefaultTruncationEps);
    mod.def("binomial_thin", &binomial_thin, py::arg("p"), py::arg("kappa"));
    mod.def("convolve", &convolve, py::arg("a"), py::arg("b"));
    mod.def("coherent_slot_pmf", &coherent_slot_pmf, py::arg("mu"), py::arg("channel"),
            py::arg("target_present"), py::arg("eps") = kDefaultTruncationEps);
    mod.def("quantum_slot_joint_pmf", &quantum_slot_joint_pmf, py::arg("probe"), py::arg("channel"),
            py::arg("target_present"), py::arg("eps") = kDefaultTruncationEps);

    py::class_<ChernoffResult>(mod, "ChernoffResult")
        .def_readonly("xi", &ChernoffResult::xi)
        .def_readonly("alpha_star", &ChernoffResult::alpha_star);

    py::class_<QuantumExponent>(mod, "QuantumExponent")
        .def_readonly("xi", &QuantumExponent::xi)
        .def_readonly("r_used", &QuantumExponent::r_used);

    py::class_<ExponentReport>(mod, "ExponentReport")
        .def_readonly("xi_coh", &ExponentReport::xi_coh)
        .def_readonly("xi_q", &ExponentReport::xi_q)
        .def_readonly("alpha_star", &ExponentReport::alpha_star)
        .def_readonly("advantage_q", &ExponentReport::advantage_q)
        .def_readonly("q_emp", &ExponentReport::q_emp)
        .def_readonly("r_used", &ExponentReport::r_used);

    mod.def("alpha_information",
            py::overload_cast<const CountPmf&, const CountPmf&, double>(&alpha_information),
            py::arg("p"), py::arg("q"), py::arg("alpha"));
    mod.def("alpha_information",
            py::overload_cast<const JointCountPmf&, const JointCountPmf&, double>(&alpha_information),
            py::arg("p"), py::arg("q"), py::arg("alpha"));
    mod.def("poisson_alpha_closed", &poisson_alpha_closed, py::arg("mu1"), py::arg("mu2"),
            py::arg("alpha"));
    mod.def("chernoff_information",
            py::overload_cast<const CountPmf&, const CountPmf&>(&chernoff_information),
            py::arg("p"), py::arg("q"));
    mod.def("chernoff_information",
            py::overload_cast<const JointCountPmf&, const JointCountPmf&>(&chernoff_information),
            py::arg("p"), py::arg("q"));
    mod.def("xi_ranging", py::overload_cast<const CountPmf&, const CountPmf&>(&xi_ranging),
            py::arg("p_target"), py::arg("p_background"));
    mod.def("xi_ranging",
            py::overload_cast<const JointCountPmf&, const JointCountPmf&>(&xi_ranging),
            py::arg("p_target"), py::arg("p_background"));
    mod.def("xi_coherent_closed", &xi_coherent_closed, py::arg("channel"), py::arg("mu"));
    mod.def("xi_quantum_fixed_r", &xi_quantum_fixed_r, py::arg("probe"), py::arg("channel"),
            py::arg("eps") = kDefaultTruncationEps);
    mod.def("xi_quantum", &xi_quantum, py::arg("mu"), py::arg("channel"),
            py::arg("eps") = kDefaultTruncationEps, py::arg("r0") = 0);
    mod.def("quantum_advantage", &quantum_advantage, py::arg("channel"), py::arg("mu"),
            py::arg("eps") = kDefaultTruncationEps);

    py::class_<ExactErrorQuery>(mod, "ExactErrorQuery")
        .def(py::init<int, double, double, double, int>(), py::arg("m"), py::arg("kappa"),
             py::arg("mu"), py::arg("mu_b"), py::arg("copies") = 1)
        .def_readonly("m", &ExactErrorQuery::m)
        .def_readonly("kappa", &ExactErrorQuery::kappa)
        .def_readonly("mu", &ExactErrorQuery::mu)
        .def_readonly("mu_b", &ExactErrorQuery::mu_b)
        .def_readonly("copies", &ExactErrorQuery::copies);

    mod.def("regularized_gamma_q", &regularized_gamma_q, py::arg("n"), py::arg("mu"));
    mod.def("generating_g", &generating_g, py::arg("m"), py::arg("x"), py::arg("mu_b"),
            py::arg("tol") = 1e-14);
    mod.def("p_err_single_shot", &p_err_single_shot, py::arg("query"));
    mod.def("p_err_multicopy_coherent", &p_err_multicopy_coherent, py::arg("query"));

    py::enum_<ProbeKind>(mod, "ProbeKind")
        .value("Coherent", ProbeKind::Coherent)
        .value("Tmsv", ProbeKind::Tmsv);

    py::class_<Probe>(mod, "Probe")
        .def_static("coherent", &Probe::coherent, py::arg("mu"))
        .def_static("tmsv", &Probe::tmsv, py::arg("mu"), py::arg("r"))
        .def_readonly("kind", &Probe::kind)
        .def_readonly("mu", &Probe::mu)
        .def_readonly("r", &Probe::r);

    py::class_<Scenario>(mod, "Scenario")
        .def(py::init<int, int, Probe, ChannelParams, int>(), py::arg("m"), py::arg("copies"),
             py::arg("probe"), py::arg("channel"), py::arg("target_slot") = 0)
        .def_readonly("m", &Scenario::m)
        .def_readonly("copies", &Scenario::copies)
        .def_readonly("target_slot", &Scenario::target_slot);

    py::enum_<DecisionRule>(mod, "DecisionRule")
        .value("MaxTotalCount", DecisionRule::MaxTotalCount)
        .value("IdlerCorrelation", DecisionRule::IdlerCorrelation);

    py::class_<McEstimate>(mod, "McEstimate")
        .def_readonly("p_hat", &McEstimate::p_hat)
        .def_readonly("trials", &McEstimate::trials)
        .def_readonly("std_err", &McEstimate::std_err)
        .def_readonly("ci95_low", &McEstimate::ci95_low)
        .def_readonly("ci95_high", &McEstimate::ci95_high)
        .def_readonly("seed", &McEstimate::seed);

    mod.def("mc_error_probability", &mc_error_probability, py::arg("scenario"), py::arg("rule"),
            py::arg("trials"), py::arg("seed"), py::arg("workers") = 0,
            py::call_guard<py::gil_scoped_release>());
    mod.def("enumerate_error_probability", &enumerate_error_probability, py::arg("scenario"),
            py::arg("rule"), py::arg("eps") = kDefaultTruncationEps, py::arg("budget") = 1e8);

    py::class_<SlopeRow>(mod, "SlopeRow")
        .def_readonly("copies", &SlopeRow::copies)
        .def_readonly("p_hat", &SlopeRow::p_hat)
        .def_readonly("std_err", &SlopeRow::std_err)
        .def_readonly("norm_log_err", &SlopeRow::norm_log_err)
        .def_readonly("needs_more_trials", &SlopeRow::needs_more_trials);

    py::class_<SlopeReport>(mod, "SlopeReport")
        .def_readonly("xi_ref", &SlopeReport::xi_ref)
        .def_readonly("rows", &SlopeReport::rows);

    mod.def("slope_report", &slope_report, py::arg("base"), py::arg("rule"), py::arg("l_list"),
            py::arg("trials"), py::arg("seed"), py::arg("workers") = 0,
            py::call_guard<py::gil_scoped_release>());
}
