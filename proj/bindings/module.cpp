#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sharpbounds/contrasts.hpp"
#include "sharpbounds/core.hpp"
#include "sharpbounds/detail/format.hpp"
#include "sharpbounds/ingest.hpp"
#include "sharpbounds/montecarlo.hpp"
#include "sharpbounds/witness.hpp"

namespace py = pybind11;
namespace sb = sharpbounds;

using sb::detail::fmt_shortest;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "bounds on counterfactual probabilities and their contrasts under "
      "unmeasured confounding";

  // Exception hierarchy, base first so the later (more derived) translators
  // run first and Python subclassing mirrors the C++ hierarchy.
  auto exc_error = py::register_exception<sb::Error>(m, "Error", PyExc_RuntimeError);
  auto exc_parse = py::register_exception<sb::ParseError>(m, "ParseError", exc_error.ptr());
  py::register_exception<sb::MalformedRow>(m, "MalformedRow", exc_parse.ptr());
  py::register_exception<sb::InvalidProbability>(m, "InvalidProbability", exc_error.ptr());
  auto exc_infeasible =
      py::register_exception<sb::InfeasibleParams>(m, "InfeasibleParams", exc_error.ptr());
  py::register_exception<sb::InfeasibleM>(m, "InfeasibleM", exc_infeasible.ptr());
  py::register_exception<sb::InfeasibleSmallM>(m, "InfeasibleSmallM", exc_infeasible.ptr());
  py::register_exception<sb::InvertedParams>(m, "InvertedParams", exc_infeasible.ptr());
  py::register_exception<sb::EpsilonOutOfRange>(m, "EpsilonOutOfRange", exc_error.ptr());
  py::register_exception<sb::DegenerateSupport>(m, "DegenerateSupport", exc_error.ptr());
  py::register_exception<sb::IndeterminateContrast>(m, "IndeterminateContrast", exc_error.ptr());
  py::register_exception<sb::NonMonotoneContrast>(m, "NonMonotoneContrast", exc_error.ptr());
  py::register_exception<sb::EmptyArm>(m, "EmptyArm", exc_error.ptr());

  py::class_<sb::ObservedMargins>(m, "ObservedMargins",
                                  "observed p(E=1) and conditional risks p(D=1|E=e)")
      .def(py::init<double, double, double>(), py::arg("p_e1"),
           py::arg("p_d1_e0"), py::arg("p_d1_e1"))
      .def_property_readonly("p_e1",
                             [](const sb::ObservedMargins& o) { return o.p_e1().value(); })
      .def_property_readonly("p_d1_e0",
                             [](const sb::ObservedMargins& o) { return o.p_d1_e0().value(); })
      .def_property_readonly("p_d1_e1",
                             [](const sb::ObservedMargins& o) { return o.p_d1_e1().value(); })
      .def("p_e", &sb::ObservedMargins::p_e, py::arg("e"))
      .def("p_d1_given_e", &sb::ObservedMargins::p_d1_given_e, py::arg("e"))
      .def("p_d1_and_e", &sb::ObservedMargins::p_d1_and_e, py::arg("e"))
      .def("__repr__", [](const sb::ObservedMargins& o) {
        return "ObservedMargins(p_e1=" + fmt_shortest(o.p_e1().value()) +
               ", p_d1_e0=" + fmt_shortest(o.p_d1_e0().value()) +
               ", p_d1_e1=" + fmt_shortest(o.p_d1_e1().value()) + ")";
      });

  py::class_<sb::FeasibleRegion>(m, "FeasibleRegion",
                                 "data-imposed limits: 0 <= m <= m_star, big_m_star <= M <= 1")
      .def_property_readonly("m_star",
                             [](const sb::FeasibleRegion& r) { return r.m_star.value(); })
      .def_property_readonly("big_m_star",
                             [](const sb::FeasibleRegion& r) { return r.big_m_star.value(); })
      .def("__repr__", [](const sb::FeasibleRegion& r) {
        return "FeasibleRegion(m_star=" + fmt_shortest(r.m_star.value()) +
               ", big_m_star=" + fmt_shortest(r.big_m_star.value()) + ")";
      });

  py::class_<sb::SensitivityParams>(m, "SensitivityParams",
                                    "validated (m, M) pair; construct via validate_params")
      .def_property_readonly("m",
                             [](const sb::SensitivityParams& p) { return p.m().value(); })
      .def_property_readonly("big_m",
                             [](const sb::SensitivityParams& p) { return p.big_m().value(); })
      .def("__repr__", [](const sb::SensitivityParams& p) {
        return "SensitivityParams(m=" + fmt_shortest(p.m().value()) +
               ", big_m=" + fmt_shortest(p.big_m().value()) + ")";
      });

  py::class_<sb::ProbabilityInterval>(m, "ProbabilityInterval",
                                      "bounds on the counterfactual p(D_e=1)")
      .def_property_readonly("lower",
                             [](const sb::ProbabilityInterval& i) { return i.lower().value(); })
      .def_property_readonly("upper",
                             [](const sb::ProbabilityInterval& i) { return i.upper().value(); })
      .def_property_readonly("exposure_level", &sb::ProbabilityInterval::exposure_level)
      .def("width", &sb::ProbabilityInterval::width)
      .def("contains", &sb::ProbabilityInterval::contains, py::arg("x"),
           py::arg("tol") = 0.0)
      .def("__repr__", [](const sb::ProbabilityInterval& i) {
        return "ProbabilityInterval(lower=" + fmt_shortest(i.lower().value()) +
               ", upper=" + fmt_shortest(i.upper().value()) +
               ", exposure_level=" + std::to_string(i.exposure_level()) + ")";
      });

  py::enum_<sb::ContrastKind>(m, "ContrastKind")
      .value("risk_ratio", sb::ContrastKind::risk_ratio)
      .value("risk_difference", sb::ContrastKind::risk_difference)
      .value("odds_ratio", sb::ContrastKind::odds_ratio)
      .value("odds_difference", sb::ContrastKind::odds_difference)
      .value("custom", sb::ContrastKind::custom);

  py::class_<sb::ContrastSpec>(m, "ContrastSpec",
                               "a contrast g(p1, p0), nondecreasing in p1 and "
                               "nonincreasing in p0")
      .def_static("risk_ratio", &sb::ContrastSpec::risk_ratio)
      .def_static("risk_difference", &sb::ContrastSpec::risk_difference)
      .def_static("odds_ratio", &sb::ContrastSpec::odds_ratio)
      .def_static("odds_difference", &sb::ContrastSpec::odds_difference)
      .def_static("custom", &sb::ContrastSpec::custom, py::arg("name"),
                  py::arg("g"),
                  "g(p1, p0) -> float; return nan for indeterminate forms. "
                  "Monotonicity is spot-checked; violations raise "
                  "NonMonotoneContrast.")
      .def_static("from_name", &sb::ContrastSpec::from_name, py::arg("name"))
      .def_property_readonly("kind", &sb::ContrastSpec::kind)
      .def_property_readonly("name", &sb::ContrastSpec::name)
      .def("__repr__", [](const sb::ContrastSpec& s) {
        return "ContrastSpec(" + s.name() + ")";
      });

  py::class_<sb::ContrastInterval>(m, "ContrastInterval",
                                   "extended-real bounds on a contrast")
      .def_readonly("lower", &sb::ContrastInterval::lower)
      .def_readonly("upper", &sb::ContrastInterval::upper)
      .def_readonly("contrast", &sb::ContrastInterval::contrast)
      .def("contains", &sb::ContrastInterval::contains, py::arg("x"))
      .def("__repr__", [](const sb::ContrastInterval& i) {
        return "ContrastInterval(" + i.contrast.name() + ", lower=" +
               fmt_shortest(i.lower) + ", upper=" + fmt_shortest(i.upper) + ")";
      });

  py::class_<sb::GridTable>(m, "GridTable",
                            "contrast intervals over a (m, M) grid; cells[i][j] "
                            "pairs m_values[i] with M_values[j], None marks an "
                            "indeterminate cell")
      .def_readonly("m_values", &sb::GridTable::m_values)
      .def_readonly("M_values", &sb::GridTable::M_values)
      .def_readonly("cells", &sb::GridTable::cells)
      .def_readonly("contrast", &sb::GridTable::contrast);

  py::enum_<sb::WitnessTarget>(m, "WitnessTarget")
      .value("lower_p1_upper_p0", sb::WitnessTarget::lower_p1_upper_p0)
      .value("upper_p1_lower_p0", sb::WitnessTarget::upper_p1_lower_p0);

  py::class_<sb::WitnessModel>(m, "WitnessModel",
                               "explicit p(D,E,U) with binary U attaining a "
                               "bound pair up to a slack of order epsilon")
      .def_property_readonly("p_e1",
                             [](const sb::WitnessModel& w) { return w.p_e1.value(); })
      .def_readonly("epsilon", &sb::WitnessModel::epsilon)
      .def("cond",
           [](const sb::WitnessModel& w, int e, int u) {
             return w.cond.at(static_cast<std::size_t>(e))
                 .at(static_cast<std::size_t>(u))
                 .value();
           },
           py::arg("e"), py::arg("u"), "p(D=1 | E=e, U=u)")
      .def("u_given_e", &sb::WitnessModel::u_given_e)
      .def("p_u1_given_e", &sb::WitnessModel::p_u1_given_e, py::arg("e"));

  py::class_<sb::SharpnessReport>(m, "SharpnessReport")
      .def_readonly("gap_p1", &sb::SharpnessReport::gap_p1)
      .def_readonly("gap_p0", &sb::SharpnessReport::gap_p0)
      .def_readonly("margin_drift", &sb::SharpnessReport::margin_drift)
      .def("__repr__", [](const sb::SharpnessReport& r) {
        return "SharpnessReport(gap_p1=" + fmt_shortest(r.gap_p1) +
               ", gap_p0=" + fmt_shortest(r.gap_p0) +
               ", margin_drift=" + fmt_shortest(r.margin_drift) + ")";
      });

  py::class_<sb::CounterRng>(m, "CounterRng",
                             "counter-addressable random stream; the value at "
                             "counter n depends only on (seed, n)")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("counter") = 0)
      .def("next_u64", &sb::CounterRng::next_u64)
      .def("next_unit_open", &sb::CounterRng::next_unit_open);

  py::class_<sb::ParamDistribution>(m, "ParamDistribution",
                                    "distribution of one sensitivity parameter; "
                                    "the support binds to the feasible region at "
                                    "run time")
      .def_static("point", &sb::ParamDistribution::point, py::arg("value"))
      .def_static("uniform", &sb::ParamDistribution::uniform)
      .def_static("truncated_normal", &sb::ParamDistribution::truncated_normal,
                  py::arg("mean"), py::arg("variance"))
      .def_static("truncated_normal_auto",
                  &sb::ParamDistribution::truncated_normal_auto,
                  py::arg("variance") = 0.1,
                  "truncated normal centered at the support midpoint");

  py::class_<sb::BoundDistribution>(m, "BoundDistribution",
                                    "a ParamDistribution bound to its support")
      .def_static("bind", &sb::BoundDistribution::bind, py::arg("dist"),
                  py::arg("lo"), py::arg("hi"))
      .def("sample", &sb::BoundDistribution::sample, py::arg("stream"))
      .def_property_readonly("lo", &sb::BoundDistribution::lo)
      .def_property_readonly("hi", &sb::BoundDistribution::hi);

  py::class_<sb::McConfig>(m, "McConfig")
      .def(py::init([](std::uint64_t n_samples, std::uint64_t seed,
                       sb::ParamDistribution m_dist,
                       sb::ParamDistribution big_m_dist,
                       sb::ContrastSpec contrast, int histogram_bins) {
             sb::McConfig c;
             c.n_samples = n_samples;
             c.seed = seed;
             c.m_dist = m_dist;
             c.big_m_dist = big_m_dist;
             c.contrast = contrast;
             c.histogram_bins = histogram_bins;
             return c;
           }),
           py::arg("n_samples") = 100000, py::arg("seed") = 0,
           py::arg("m_dist") = sb::ParamDistribution::truncated_normal_auto(),
           py::arg("big_m_dist") = sb::ParamDistribution::uniform(),
           py::arg("contrast") = sb::ContrastSpec::risk_difference(),
           py::arg("histogram_bins") = 50)
      .def_readwrite("n_samples", &sb::McConfig::n_samples)
      .def_readwrite("seed", &sb::McConfig::seed)
      .def_readwrite("m_dist", &sb::McConfig::m_dist)
      .def_readwrite("big_m_dist", &sb::McConfig::big_m_dist)
      .def_readwrite("contrast", &sb::McConfig::contrast)
      .def_readwrite("histogram_bins", &sb::McConfig::histogram_bins);

  py::class_<sb::Quantiles>(m, "Quantiles")
      .def_readonly("q01", &sb::Quantiles::q01)
      .def_readonly("q05", &sb::Quantiles::q05)
      .def_readonly("q25", &sb::Quantiles::q25)
      .def_readonly("q50", &sb::Quantiles::q50)
      .def_readonly("q75", &sb::Quantiles::q75)
      .def_readonly("q95", &sb::Quantiles::q95)
      .def_readonly("q99", &sb::Quantiles::q99);

  py::class_<sb::BoundSummary>(m, "BoundSummary",
                               "distribution summary of one bound; moments and "
                               "histogram cover finite samples, quantiles cover "
                               "all determinate ones")
      .def_readonly("mean", &sb::BoundSummary::mean)
      .def_readonly("sd", &sb::BoundSummary::sd)
      .def_readonly("quantiles", &sb::BoundSummary::quantiles)
      .def_readonly("hist_edges", &sb::BoundSummary::hist_edges)
      .def_readonly("hist_counts", &sb::BoundSummary::hist_counts)
      .def_readonly("sorted_samples", &sb::BoundSummary::sorted_samples)
      .def_readonly("n_infinite", &sb::BoundSummary::n_infinite)
      .def("prob_leq", &sb::BoundSummary::prob_leq, py::arg("x"),
           "empirical P(bound <= x)");

  py::class_<sb::McSummary>(m, "McSummary")
      .def_readonly("n_samples", &sb::McSummary::n_samples)
      .def_readonly("n_indeterminate", &sb::McSummary::n_indeterminate)
      .def_readonly("lower", &sb::McSummary::lower)
      .def_readonly("upper", &sb::McSummary::upper);

  py::class_<sb::McDraw>(m, "McDraw")
      .def_readonly("m", &sb::McDraw::m)
      .def_readonly("big_m", &sb::McDraw::big_m)
      .def_readonly("lower", &sb::McDraw::lower)
      .def_readonly("upper", &sb::McDraw::upper)
      .def_readonly("indeterminate", &sb::McDraw::indeterminate);

  py::class_<sb::ContingencyCounts>(m, "ContingencyCounts",
                                    "2x2 cell counts of outcome D by exposure E")
      .def(py::init([](std::uint64_t d1e1, std::uint64_t d0e1,
                       std::uint64_t d1e0, std::uint64_t d0e0) {
             return sb::ContingencyCounts{d1e1, d0e1, d1e0, d0e0};
           }),
           py::arg("n_d1_e1"), py::arg("n_d0_e1"), py::arg("n_d1_e0"),
           py::arg("n_d0_e0"))
      .def_readwrite("n_d1_e1", &sb::ContingencyCounts::n_d1_e1)
      .def_readwrite("n_d0_e1", &sb::ContingencyCounts::n_d0_e1)
      .def_readwrite("n_d1_e0", &sb::ContingencyCounts::n_d1_e0)
      .def_readwrite("n_d0_e0", &sb::ContingencyCounts::n_d0_e0)
      .def("arm_total", &sb::ContingencyCounts::arm_total, py::arg("e"))
      .def("total", &sb::ContingencyCounts::total);

  py::class_<sb::RawRecord>(m, "RawRecord")
      .def(py::init([](long e, long d) { return sb::RawRecord{e, d}; }),
           py::arg("e"), py::arg("d"))
      .def_readonly("e", &sb::RawRecord::e)
      .def_readonly("d", &sb::RawRecord::d);

  m.def("feasible_region", &sb::feasible_region, py::arg("obs"));
  m.def("validate_params",
        py::overload_cast<const sb::ObservedMargins&, double, double>(
            &sb::validate_params),
        py::arg("obs"), py::arg("m"), py::arg("big_m"));
  m.def("validate_params",
        py::overload_cast<const sb::FeasibleRegion&, double, double>(
            &sb::validate_params),
        py::arg("region"), py::arg("m"), py::arg("big_m"));
  m.def("counterfactual_interval", &sb::counterfactual_interval, py::arg("obs"),
        py::arg("params"), py::arg("e"));
  m.def("crude_risk",
        [](const sb::ObservedMargins& obs, int e) {
          return sb::crude_risk(obs, e).value();
        },
        py::arg("obs"), py::arg("e"), "observed p(D=1|E=e)");
  m.def("odds", [](double p) { return sb::odds(sb::Probability(p)); },
        py::arg("p"), "p / (1 - p), +inf at p = 1");
  m.def("eval_contrast",
        [](const sb::ContrastSpec& spec, double p1, double p0) {
          return sb::eval_contrast(spec, sb::Probability(p1), sb::Probability(p0));
        },
        py::arg("contrast"), py::arg("p1"), py::arg("p0"));
  m.def("contrast_interval", &sb::contrast_interval, py::arg("obs"),
        py::arg("params"), py::arg("contrast"));
  m.def("grid", &sb::grid, py::arg("obs"), py::arg("steps"), py::arg("contrast"));

  m.def("build_witness", &sb::build_witness, py::arg("obs"), py::arg("params"),
        py::arg("target"), py::arg("epsilon") = 1e-4);
  m.def("implied_margins", &sb::implied_margins, py::arg("witness"));
  m.def("implied_extrema",
        [](const sb::WitnessModel& w) {
          const auto [lo, hi] = sb::implied_extrema(w);
          return std::make_pair(lo.value(), hi.value());
        },
        py::arg("witness"), "(min, max) over the four conditional cells");
  m.def("exact_counterfactual",
        [](const sb::WitnessModel& w, int e) {
          return sb::exact_counterfactual(w, e).value();
        },
        py::arg("witness"), py::arg("e"),
        "the counterfactual p(D_e=1) the witness actually induces");
  m.def("sharpness_gap", &sb::sharpness_gap, py::arg("obs"), py::arg("params"),
        py::arg("target"), py::arg("epsilon") = 1e-4);

  m.def("normal_cdf", &sb::normal_cdf, py::arg("x"));
  m.def("normal_quantile", &sb::normal_quantile, py::arg("p"));
  m.def("sample_param", &sb::sample_param, py::arg("dist"), py::arg("stream"));
  m.def("mc_draw", &sb::mc_draw, py::arg("obs"), py::arg("config"),
        py::arg("index"));
  m.def("run_mc", &sb::run_mc, py::arg("obs"), py::arg("config"),
        py::arg("n_threads") = 1,
        py::call_guard<py::gil_scoped_release>(),
        "bit-identical output for any n_threads");

  m.def("margins_from_counts", &sb::margins_from_counts, py::arg("counts"));
  m.def("margins_from_records",
        [](const std::vector<sb::RawRecord>& records) {
          return sb::margins_from_records(records);
        },
        py::arg("records"));
  m.def("margins_from_records",
        [](const std::vector<std::pair<long, long>>& rows) {
          std::vector<sb::RawRecord> records;
          records.reserve(rows.size());
          for (const auto& [e, d] : rows) records.push_back(sb::RawRecord{e, d});
          return sb::margins_from_records(records);
        },
        py::arg("records"), "records as (e, d) pairs");
  m.def("count_records",
        [](const std::vector<sb::RawRecord>& records) {
          return sb::count_records(records);
        },
        py::arg("records"));
  m.def("count_records",
        [](const std::vector<std::pair<long, long>>& rows) {
          std::vector<sb::RawRecord> records;
          records.reserve(rows.size());
          for (const auto& [e, d] : rows) records.push_back(sb::RawRecord{e, d});
          return sb::count_records(records);
        },
        py::arg("records"));
  m.def("read_counts_json",
        [](const std::string& text) {
          std::istringstream in(text);
          return sb::read_counts_json(in);
        },
        py::arg("text"));
  m.def("read_records_csv",
        [](const std::string& text) {
          std::istringstream in(text);
          return sb::read_records_csv(in);
        },
        py::arg("text"));
}
