#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sharpbounds/contrasts.hpp"
#include "sharpbounds/core.hpp"
#include "sharpbounds/ingest.hpp"
#include "sharpbounds/montecarlo.hpp"
#include "sharpbounds/witness.hpp"

namespace sharpbounds {

enum class OutputFormat { json, csv, markdown };

OutputFormat output_format_from_name(std::string_view name);

/// Extended reals in JSON: finite values as numbers, +/-inf as the strings
/// "inf" / "-inf" (JSON has no infinity literal).
nlohmann::json ext_to_json(double x);
double ext_from_json(const nlohmann::json& j);

const char* witness_target_name(WitnessTarget target);  // "theorem1" / "theorem2"
WitnessTarget witness_target_from_name(std::string_view name);

nlohmann::json to_json(const ObservedMargins& obs);
nlohmann::json to_json(const FeasibleRegion& region);
nlohmann::json to_json(const SensitivityParams& params);
nlohmann::json to_json(const ProbabilityInterval& interval);
nlohmann::json to_json(const ContrastInterval& interval);
nlohmann::json to_json(const GridTable& table);
nlohmann::json to_json(const WitnessModel& w);
nlohmann::json to_json(const SharpnessReport& report);
nlohmann::json to_json(const BoundSummary& s);  // stats + histogram, not the samples

/// Everything the `bounds` command reports for one (margins, m, M, contrast).
struct BoundsReport {
  ObservedMargins margins;
  FeasibleRegion region;
  SensitivityParams params;
  ProbabilityInterval p1;
  ProbabilityInterval p0;
  ContrastInterval contrast;
};

BoundsReport make_bounds_report(const ObservedMargins& obs,
                                const SensitivityParams& params,
                                const ContrastSpec& spec);

struct WitnessReport {
  WitnessTarget target;
  WitnessModel model;
  ObservedMargins implied;
  Probability implied_m;
  Probability implied_big_m;
  SharpnessReport sharpness;
};

WitnessReport make_witness_report(const ObservedMargins& obs,
                                  const SensitivityParams& params,
                                  WitnessTarget target, double epsilon);

nlohmann::json to_json(const BoundsReport& report);
nlohmann::json to_json(const WitnessReport& report);
nlohmann::json mc_report_json(const ObservedMargins& obs, const McConfig& config,
                              const McSummary& summary,
                              const std::vector<double>& thresholds);

std::string render_bounds(const BoundsReport& report, OutputFormat format);
/// CSV: header row = M values, first column = m values, cells as
/// "lower,upper" quoted pairs. Markdown: rounded to two decimals, m rows
/// descending and M columns ascending. Indeterminate cells render as
/// "indeterminate" (CSV), "n/a" (markdown), null (JSON).
std::string render_grid(const GridTable& table, OutputFormat format);
std::string render_witness(const WitnessReport& report, OutputFormat format);
std::string render_mc(const ObservedMargins& obs, const McConfig& config,
                      const McSummary& summary,
                      const std::vector<double>& thresholds, OutputFormat format);

/// Two-column CSV (bin_left_edge,count) for one bound's histogram.
std::string histogram_csv(const BoundSummary& s);

}  // namespace sharpbounds
