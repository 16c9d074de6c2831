#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sharpbounds/detail/format.hpp"
#include "sharpbounds/ingest.hpp"
#include "sharpbounds/io.hpp"

namespace sb = sharpbounds;

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct MarginsArgs {
  double p_e1 = kUnset;
  double p_d1_e0 = kUnset;
  double p_d1_e1 = kUnset;
  std::string counts_path;
  std::string data_path;
};

void add_margins_options(CLI::App& cmd, MarginsArgs& args) {
  cmd.add_option("--p-e1", args.p_e1, "observed p(E=1)");
  cmd.add_option("--p-d1-e0", args.p_d1_e0, "observed p(D=1|E=0)");
  cmd.add_option("--p-d1-e1", args.p_d1_e1, "observed p(D=1|E=1)");
  cmd.add_option("--counts", args.counts_path,
                 "2x2 counts as JSON {d1e1, d0e1, d1e0, d0e0}; '-' reads stdin");
  cmd.add_option("--data", args.data_path,
                 "record-level CSV with E and D columns; '-' reads stdin");
}

sb::ObservedMargins resolve_margins(const MarginsArgs& a) {
  const bool direct = !std::isnan(a.p_e1) || !std::isnan(a.p_d1_e0) ||
                      !std::isnan(a.p_d1_e1);
  const int sources = static_cast<int>(direct) +
                      static_cast<int>(!a.counts_path.empty()) +
                      static_cast<int>(!a.data_path.empty());
  if (sources == 0) {
    throw sb::ParseError(
        "no margins given: pass --p-e1/--p-d1-e0/--p-d1-e1, --counts or --data");
  }
  if (sources > 1) {
    throw sb::ParseError(
        "margins sources are mutually exclusive: pass direct probabilities, "
        "--counts or --data, not a mix");
  }
  if (direct) {
    if (std::isnan(a.p_e1) || std::isnan(a.p_d1_e0) || std::isnan(a.p_d1_e1)) {
      throw sb::ParseError(
          "--p-e1, --p-d1-e0 and --p-d1-e1 must be given together");
    }
    return sb::ObservedMargins(a.p_e1, a.p_d1_e0, a.p_d1_e1);
  }

  const bool from_counts = !a.counts_path.empty();
  const std::string& path = from_counts ? a.counts_path : a.data_path;
  const auto load = [from_counts](std::istream& in) {
    if (from_counts) {
      return sb::margins_from_counts(sb::read_counts_json(in));
    }
    const std::vector<sb::RawRecord> records = sb::read_records_csv(in);
    return sb::margins_from_records(records);
  };
  if (path == "-") return load(std::cin);
  std::ifstream in(path);
  if (!in) throw sb::ParseError("cannot open " + path);
  return load(in);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw sb::ParseError("cannot open " + out_path + " for writing");
  out << text;
}

double parse_double(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw sb::ParseError("cannot parse " + what + " '" + text + "'");
  }
  return v;
}

// Grammar: uniform | tnorm | tnorm:<mean>,<variance> | point:<value>.
// Supports are bound later to the feasible region of the margins.
sb::ParamDistribution parse_dist(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);
  if (head == "uniform" && rest.empty()) return sb::ParamDistribution::uniform();
  if (head == "tnorm") {
    if (rest.empty()) return sb::ParamDistribution::truncated_normal_auto();
    const auto comma = rest.find(',');
    if (comma == std::string::npos) {
      throw sb::ParseError(
          "tnorm takes mean and variance, e.g. tnorm:0.19,0.1");
    }
    const double mean = parse_double(rest.substr(0, comma), "tnorm mean");
    const double variance =
        parse_double(rest.substr(comma + 1), "tnorm variance");
    if (!(variance > 0.0)) {
      throw sb::ParseError("tnorm variance must be > 0");
    }
    return sb::ParamDistribution::truncated_normal(mean, variance);
  }
  if (head == "point") {
    if (rest.empty()) {
      throw sb::ParseError("point takes a value, e.g. point:0.2");
    }
    return sb::ParamDistribution::point(parse_double(rest, "point value"));
  }
  throw sb::ParseError("unknown distribution '" + text +
                       "' (expected uniform, tnorm, tnorm:mean,variance or "
                       "point:value)");
}

int mc_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* s = std::getenv("SHARPBOUNDS_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && cap >= 1 &&
        static_cast<unsigned long>(cap) < n) {
      n = static_cast<unsigned>(cap);
    }
  }
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bounds on counterfactual probabilities and their contrasts under "
      "unmeasured confounding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sharpbounds 0.1.0");

  MarginsArgs margins_args;
  std::string format_name = "json";
  std::string out_path;
  double m = 0.0;
  double big_m = 1.0;
  std::string contrast_name = "rd";
  int steps = 5;
  std::string target_name = "theorem1";
  double epsilon = 1e-4;
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 0;
  std::string m_dist_text = "tnorm";
  std::string big_m_dist_text = "uniform";
  int bins = 50;
  std::vector<double> thresholds;
  std::string hist_out;

  const auto add_common = [&](CLI::App* cmd) {
    add_margins_options(*cmd, margins_args);
    cmd->add_option("--format", format_name, "output format: json, csv or markdown")
        ->capture_default_str();
    cmd->add_option("--out", out_path, "write output to this path instead of stdout");
  };

  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "counterfactual intervals and one contrast interval");
  add_common(bounds_cmd);
  bounds_cmd->add_option("--m", m, "sensitivity parameter m, in [0, m*]")
      ->capture_default_str();
  bounds_cmd->add_option("--M", big_m, "sensitivity parameter M, in [M*, 1]")
      ->capture_default_str();
  bounds_cmd
      ->add_option("--contrast", contrast_name, "contrast: rr, rd, or, od")
      ->capture_default_str();

  CLI::App* grid_cmd = app.add_subcommand(
      "grid", "contrast intervals over a grid of (m, M) values");
  add_common(grid_cmd);
  grid_cmd->add_option("--steps", steps, "grid steps per axis (>= 2)")
      ->capture_default_str();
  grid_cmd->add_option("--contrast", contrast_name, "contrast: rr, rd, or, od")
      ->capture_default_str();

  CLI::App* witness_cmd = app.add_subcommand(
      "witness",
      "explicit confounder model attaining the bounds up to a chosen slack");
  add_common(witness_cmd);
  witness_cmd->add_option("--m", m, "sensitivity parameter m, in [0, m*]")
      ->capture_default_str();
  witness_cmd->add_option("--M", big_m, "sensitivity parameter M, in [M*, 1]")
      ->capture_default_str();
  witness_cmd
      ->add_option("--target", target_name,
                   "which corner pair to approach: theorem1 (lower p1, upper "
                   "p0) or theorem2 (upper p1, lower p0)")
      ->capture_default_str();
  witness_cmd->add_option("--epsilon", epsilon, "attainment slack, in (0, 1)")
      ->capture_default_str();

  CLI::App* mc_cmd = app.add_subcommand(
      "mc", "Monte Carlo propagation of distributions over (m, M)");
  add_common(mc_cmd);
  mc_cmd->add_option("--contrast", contrast_name, "contrast: rr, rd, or, od")
      ->capture_default_str();
  mc_cmd->add_option("--n", n_samples, "number of samples")
      ->capture_default_str();
  mc_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  mc_cmd
      ->add_option("--m-dist", m_dist_text,
                   "distribution of m on (0, m*): uniform, tnorm, "
                   "tnorm:mean,variance or point:value")
      ->capture_default_str();
  mc_cmd
      ->add_option("--M-dist", big_m_dist_text,
                   "distribution of M on (M*, 1): same grammar as --m-dist")
      ->capture_default_str();
  mc_cmd->add_option("--bins", bins, "histogram bins (>= 1)")
      ->capture_default_str();
  mc_cmd->add_option("--threshold", thresholds,
                     "report P(bound <= x) at this value; repeatable");
  mc_cmd->add_option(
      "--hist-out", hist_out,
      "write histograms to <prefix>_lower.csv and <prefix>_upper.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::optional<sb::ObservedMargins> obs;
  try {
    const sb::OutputFormat format = sb::output_format_from_name(format_name);
    obs = resolve_margins(margins_args);

    if (app.got_subcommand(bounds_cmd)) {
      const sb::SensitivityParams params = sb::validate_params(*obs, m, big_m);
      const sb::ContrastSpec spec = sb::ContrastSpec::from_name(contrast_name);
      emit(sb::render_bounds(sb::make_bounds_report(*obs, params, spec), format),
           out_path);
    } else if (app.got_subcommand(grid_cmd)) {
      if (steps < 2) throw sb::ParseError("--steps must be >= 2");
      const sb::ContrastSpec spec = sb::ContrastSpec::from_name(contrast_name);
      emit(sb::render_grid(sb::grid(*obs, steps, spec), format), out_path);
    } else if (app.got_subcommand(witness_cmd)) {
      const sb::SensitivityParams params = sb::validate_params(*obs, m, big_m);
      const sb::WitnessTarget target = sb::witness_target_from_name(target_name);
      emit(sb::render_witness(
               sb::make_witness_report(*obs, params, target, epsilon), format),
           out_path);
    } else if (app.got_subcommand(mc_cmd)) {
      if (n_samples < 1) throw sb::ParseError("--n must be >= 1");
      if (bins < 1) throw sb::ParseError("--bins must be >= 1");
      sb::McConfig config;
      config.n_samples = n_samples;
      config.seed = seed;
      config.m_dist = parse_dist(m_dist_text);
      config.big_m_dist = parse_dist(big_m_dist_text);
      config.contrast = sb::ContrastSpec::from_name(contrast_name);
      config.histogram_bins = bins;
      const sb::McSummary summary = sb::run_mc(*obs, config, mc_threads());
      emit(sb::render_mc(*obs, config, summary, thresholds, format), out_path);
      if (!hist_out.empty()) {
        emit(sb::histogram_csv(summary.lower), hist_out + "_lower.csv");
        emit(sb::histogram_csv(summary.upper), hist_out + "_upper.csv");
      }
    }
    return 0;
  } catch (const sb::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const sb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (obs) {
      const sb::FeasibleRegion region = sb::feasible_region(*obs);
      std::cerr << "feasible region: m in [0, "
                << sb::detail::fmt_shortest(region.m_star.value())
                << "], M in ["
                << sb::detail::fmt_shortest(region.big_m_star.value())
                << ", 1]\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
