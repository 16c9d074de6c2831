#include "sharpbounds/io.hpp"

#include <cmath>
#include <sstream>

#include "sharpbounds/detail/format.hpp"

namespace sharpbounds {

using detail::fmt_2dp;
using detail::fmt_shortest;
using nlohmann::json;

OutputFormat output_format_from_name(std::string_view name) {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  if (name == "markdown" || name == "md") return OutputFormat::markdown;
  throw ParseError("unknown output format '" + std::string(name) +
                   "' (expected json, csv or markdown)");
}

json ext_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double ext_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ParseError("expected a number or \"inf\"/\"-inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

const char* witness_target_name(WitnessTarget target) {
  return target == WitnessTarget::lower_p1_upper_p0 ? "theorem1" : "theorem2";
}

WitnessTarget witness_target_from_name(std::string_view name) {
  if (name == "theorem1") return WitnessTarget::lower_p1_upper_p0;
  if (name == "theorem2") return WitnessTarget::upper_p1_lower_p0;
  throw ParseError("unknown witness target '" + std::string(name) +
                   "' (expected theorem1 or theorem2)");
}

json to_json(const ObservedMargins& obs) {
  return json{{"p_e1", obs.p_e1().value()},
              {"p_d1_e0", obs.p_d1_e0().value()},
              {"p_d1_e1", obs.p_d1_e1().value()}};
}

json to_json(const FeasibleRegion& region) {
  return json{{"m_star", region.m_star.value()},
              {"big_m_star", region.big_m_star.value()}};
}

json to_json(const SensitivityParams& params) {
  return json{{"m", params.m().value()}, {"big_m", params.big_m().value()}};
}

json to_json(const ProbabilityInterval& interval) {
  return json{{"lower", interval.lower().value()},
              {"upper", interval.upper().value()},
              {"exposure_level", interval.exposure_level()}};
}

json to_json(const ContrastInterval& interval) {
  return json{{"contrast", interval.contrast.name()},
              {"lower", ext_to_json(interval.lower)},
              {"upper", ext_to_json(interval.upper)}};
}

json to_json(const GridTable& table) {
  json cells = json::array();
  for (const auto& row : table.cells) {
    json jrow = json::array();
    for (const auto& cell : row) {
      if (cell) {
        jrow.push_back(json{{"lower", ext_to_json(cell->lower)},
                            {"upper", ext_to_json(cell->upper)}});
      } else {
        jrow.push_back(nullptr);
      }
    }
    cells.push_back(std::move(jrow));
  }
  return json{{"contrast", table.contrast.name()},
              {"m_values", table.m_values},
              {"M_values", table.M_values},
              {"cells", std::move(cells)}};
}

json to_json(const WitnessModel& w) {
  return json{{"p_e1", w.p_e1.value()},
              {"epsilon", w.epsilon},
              {"cond_table",
               json{{"d1_e1_u1", w.cond[1][1].value()},
                    {"d1_e1_u0", w.cond[1][0].value()},
                    {"d1_e0_u1", w.cond[0][1].value()},
                    {"d1_e0_u0", w.cond[0][0].value()}}},
              {"u_given_e", w.u_given_e()}};
}

json to_json(const SharpnessReport& report) {
  return json{{"gap_p1", report.gap_p1},
              {"gap_p0", report.gap_p0},
              {"margin_drift", report.margin_drift}};
}

json to_json(const BoundSummary& s) {
  return json{{"mean", s.mean},
              {"sd", s.sd},
              {"quantiles",
               json{{"q01", ext_to_json(s.quantiles.q01)},
                    {"q05", ext_to_json(s.quantiles.q05)},
                    {"q25", ext_to_json(s.quantiles.q25)},
                    {"q50", ext_to_json(s.quantiles.q50)},
                    {"q75", ext_to_json(s.quantiles.q75)},
                    {"q95", ext_to_json(s.quantiles.q95)},
                    {"q99", ext_to_json(s.quantiles.q99)}}},
              {"n_infinite", s.n_infinite},
              {"histogram",
               json{{"edges", s.hist_edges}, {"counts", s.hist_counts}}}};
}

BoundsReport make_bounds_report(const ObservedMargins& obs,
                                const SensitivityParams& params,
                                const ContrastSpec& spec) {
  return BoundsReport{obs,
                      feasible_region(obs),
                      params,
                      counterfactual_interval(obs, params, 1),
                      counterfactual_interval(obs, params, 0),
                      contrast_interval(obs, params, spec)};
}

WitnessReport make_witness_report(const ObservedMargins& obs,
                                  const SensitivityParams& params,
                                  WitnessTarget target, double epsilon) {
  const WitnessModel model = build_witness(obs, params, target, epsilon);
  const auto [m, big_m] = implied_extrema(model);
  return WitnessReport{target,
                       model,
                       implied_margins(model),
                       m,
                       big_m,
                       sharpness_gap(obs, params, target, epsilon)};
}

json to_json(const BoundsReport& report) {
  return json{{"margins", to_json(report.margins)},
              {"feasible_region", to_json(report.region)},
              {"params", to_json(report.params)},
              {"counterfactual",
               json{{"p1", to_json(report.p1)}, {"p0", to_json(report.p0)}}},
              {"contrast", to_json(report.contrast)}};
}

json to_json(const WitnessReport& report) {
  return json{{"target", witness_target_name(report.target)},
              {"witness", to_json(report.model)},
              {"implied_margins", to_json(report.implied)},
              {"implied_extrema",
               json{{"m", report.implied_m.value()},
                    {"big_m", report.implied_big_m.value()}}},
              {"sharpness", to_json(report.sharpness)}};
}

namespace {

json dist_json(const ParamDistribution& dist, double lo, double hi) {
  const BoundDistribution bound = BoundDistribution::bind(dist, lo, hi);
  json j;
  switch (dist.kind) {
    case ParamDistribution::Kind::point_mass:
      j["kind"] = "point_mass";
      j["value"] = bound.spec().value;
      break;
    case ParamDistribution::Kind::uniform:
      j["kind"] = "uniform";
      break;
    case ParamDistribution::Kind::truncated_normal:
      j["kind"] = "truncated_normal";
      j["mean"] = bound.spec().mean;
      j["variance"] = bound.spec().variance;
      break;
  }
  j["support"] = json::array({lo, hi});
  return j;
}

}  // namespace

json mc_report_json(const ObservedMargins& obs, const McConfig& config,
                    const McSummary& summary,
                    const std::vector<double>& thresholds) {
  const FeasibleRegion region = feasible_region(obs);
  json j{{"n_samples", summary.n_samples},
         {"seed", config.seed},
         {"histogram_bins", config.histogram_bins},
         {"contrast", config.contrast.name()},
         {"margins", to_json(obs)},
         {"feasible_region", to_json(region)},
         {"m_dist", dist_json(config.m_dist, 0.0, region.m_star.value())},
         {"big_m_dist",
          dist_json(config.big_m_dist, region.big_m_star.value(), 1.0)},
         {"n_indeterminate", summary.n_indeterminate},
         {"lower", to_json(summary.lower)},
         {"upper", to_json(summary.upper)}};
  json jt = json::array();
  for (const double x : thresholds) {
    jt.push_back(json{{"x", x},
                      {"p_lower_leq", summary.lower.prob_leq(x)},
                      {"p_upper_leq", summary.upper.prob_leq(x)}});
  }
  j["thresholds"] = std::move(jt);
  return j;
}

namespace {

std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

void kv_rows(std::ostringstream& out, const BoundsReport& r) {
  out << "p_e1," << fmt_shortest(r.margins.p_e1().value()) << "\n"
      << "p_d1_e0," << fmt_shortest(r.margins.p_d1_e0().value()) << "\n"
      << "p_d1_e1," << fmt_shortest(r.margins.p_d1_e1().value()) << "\n"
      << "m_star," << fmt_shortest(r.region.m_star.value()) << "\n"
      << "big_m_star," << fmt_shortest(r.region.big_m_star.value()) << "\n"
      << "m," << fmt_shortest(r.params.m().value()) << "\n"
      << "big_m," << fmt_shortest(r.params.big_m().value()) << "\n"
      << "p1_lower," << fmt_shortest(r.p1.lower().value()) << "\n"
      << "p1_upper," << fmt_shortest(r.p1.upper().value()) << "\n"
      << "p0_lower," << fmt_shortest(r.p0.lower().value()) << "\n"
      << "p0_upper," << fmt_shortest(r.p0.upper().value()) << "\n"
      << "contrast," << r.contrast.contrast.name() << "\n"
      << "contrast_lower," << fmt_shortest(r.contrast.lower) << "\n"
      << "contrast_upper," << fmt_shortest(r.contrast.upper) << "\n";
}

}  // namespace

std::string render_bounds(const BoundsReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(report).dump(2) + "\n";
    case OutputFormat::csv: {
      std::ostringstream out;
      out << "key,value\n";
      kv_rows(out, report);
      return out.str();
    }
    case OutputFormat::markdown: {
      std::ostringstream out;
      out << "| quantity | lower | upper |\n|---|---|---|\n";
      out << "| p(D_1=1) | " << fmt_2dp(report.p1.lower().value()) << " | "
          << fmt_2dp(report.p1.upper().value()) << " |\n";
      out << "| p(D_0=1) | " << fmt_2dp(report.p0.lower().value()) << " | "
          << fmt_2dp(report.p0.upper().value()) << " |\n";
      out << "| " << report.contrast.contrast.name() << " | "
          << fmt_2dp(report.contrast.lower) << " | "
          << fmt_2dp(report.contrast.upper) << " |\n";
      return out.str();
    }
  }
  throw Error("unreachable output format");
}

std::string render_grid(const GridTable& table, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(table).dump(2) + "\n";
    case OutputFormat::csv: {
      std::ostringstream out;
      out << "m";
      for (const double M : table.M_values) out << "," << fmt_shortest(M);
      out << "\n";
      for (std::size_t i = 0; i < table.cells.size(); ++i) {
        out << fmt_shortest(table.m_values[i]);
        for (const auto& cell : table.cells[i]) {
          if (cell) {
            out << ","
                << csv_quote(fmt_shortest(cell->lower) + "," +
                             fmt_shortest(cell->upper));
          } else {
            out << "," << csv_quote("indeterminate");
          }
        }
        out << "\n";
      }
      return out.str();
    }
    case OutputFormat::markdown: {
      std::ostringstream out;
      out << "| m \\ M |";
      for (const double M : table.M_values) out << " " << fmt_2dp(M) << " |";
      out << "\n|---|";
      for (std::size_t j = 0; j < table.M_values.size(); ++j) out << "---|";
      out << "\n";
      for (std::size_t i = 0; i < table.cells.size(); ++i) {
        out << "| " << fmt_2dp(table.m_values[i]) << " |";
        for (const auto& cell : table.cells[i]) {
          if (cell) {
            out << " (" << fmt_2dp(cell->lower) << ", " << fmt_2dp(cell->upper)
                << ") |";
          } else {
            out << " n/a |";
          }
        }
        out << "\n";
      }
      return out.str();
    }
  }
  throw Error("unreachable output format");
}

std::string render_witness(const WitnessReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return to_json(report).dump(2) + "\n";
    case OutputFormat::csv: {
      std::ostringstream out;
      out << "key,value\n"
          << "target," << witness_target_name(report.target) << "\n"
          << "p_e1," << fmt_shortest(report.model.p_e1.value()) << "\n"
          << "epsilon," << fmt_shortest(report.model.epsilon) << "\n"
          << "d1_e1_u1," << fmt_shortest(report.model.cond[1][1].value()) << "\n"
          << "d1_e1_u0," << fmt_shortest(report.model.cond[1][0].value()) << "\n"
          << "d1_e0_u1," << fmt_shortest(report.model.cond[0][1].value()) << "\n"
          << "d1_e0_u0," << fmt_shortest(report.model.cond[0][0].value()) << "\n"
          << "u_given_e," << fmt_shortest(report.model.u_given_e()) << "\n"
          << "implied_p_d1_e0," << fmt_shortest(report.implied.p_d1_e0().value())
          << "\n"
          << "implied_p_d1_e1," << fmt_shortest(report.implied.p_d1_e1().value())
          << "\n"
          << "implied_m," << fmt_shortest(report.implied_m.value()) << "\n"
          << "implied_big_m," << fmt_shortest(report.implied_big_m.value()) << "\n"
          << "gap_p1," << fmt_shortest(report.sharpness.gap_p1) << "\n"
          << "gap_p0," << fmt_shortest(report.sharpness.gap_p0) << "\n"
          << "margin_drift," << fmt_shortest(report.sharpness.margin_drift)
          << "\n";
      return out.str();
    }
    case OutputFormat::markdown: {
      std::ostringstream out;
      const auto& w = report.model;
      out << "| p(D=1 given E, U) | U=0 | U=1 |\n|---|---|---|\n";
      out << "| E=1 | " << fmt_shortest(w.cond[1][0].value()) << " | "
          << fmt_shortest(w.cond[1][1].value()) << " |\n";
      out << "| E=0 | " << fmt_shortest(w.cond[0][0].value()) << " | "
          << fmt_shortest(w.cond[0][1].value()) << " |\n\n";
      out << "target: " << witness_target_name(report.target)
          << ", epsilon: " << fmt_shortest(w.epsilon) << ", gap_p1: "
          << fmt_shortest(report.sharpness.gap_p1) << ", gap_p0: "
          << fmt_shortest(report.sharpness.gap_p0) << ", margin_drift: "
          << fmt_shortest(report.sharpness.margin_drift) << "\n";
      return out.str();
    }
  }
  throw Error("unreachable output format");
}

std::string render_mc(const ObservedMargins& obs, const McConfig& config,
                      const McSummary& summary,
                      const std::vector<double>& thresholds,
                      OutputFormat format) {
  switch (format) {
    case OutputFormat::json:
      return mc_report_json(obs, config, summary, thresholds).dump(2) + "\n";
    case OutputFormat::csv: {
      std::ostringstream out;
      out << "bound,bin_left_edge,count\n";
      const auto emit = [&out](const char* label, const BoundSummary& s) {
        for (std::size_t k = 0; k < s.hist_counts.size(); ++k) {
          out << label << "," << fmt_shortest(s.hist_edges[k]) << ","
              << s.hist_counts[k] << "\n";
        }
      };
      emit("lower", summary.lower);
      emit("upper", summary.upper);
      return out.str();
    }
    case OutputFormat::markdown: {
      std::ostringstream out;
      out << "| bound | mean | sd | q05 | q50 | q95 |\n|---|---|---|---|---|---|\n";
      const auto row = [&out](const char* label, const BoundSummary& s) {
        out << "| " << label << " | " << fmt_2dp(s.mean) << " | "
            << fmt_2dp(s.sd) << " | " << fmt_2dp(s.quantiles.q05) << " | "
            << fmt_2dp(s.quantiles.q50) << " | " << fmt_2dp(s.quantiles.q95)
            << " |\n";
      };
      row("lower", summary.lower);
      row("upper", summary.upper);
      if (summary.n_indeterminate > 0) {
        out << "\nindeterminate samples: " << summary.n_indeterminate << "\n";
      }
      return out.str();
    }
  }
  throw Error("unreachable output format");
}

std::string histogram_csv(const BoundSummary& s) {
  std::ostringstream out;
  out << "bin_left_edge,count\n";
  for (std::size_t k = 0; k < s.hist_counts.size(); ++k) {
    out << fmt_shortest(s.hist_edges[k]) << "," << s.hist_counts[k] << "\n";
  }
  return out.str();
}

}  // namespace sharpbounds
