// superres: command-line front end for the resolution-limit toolkit.
//
//   superres [--seed N] [--out DIR] [--grid-density N] [--config FILE] <command> ...
//
// Exit codes: 0 ok, 1 bad arguments or precondition, 2 verification failed,
// 3 degenerate analysis (e.g. a sweep with a single label).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <superres/constructions.hpp>
#include <superres/error.hpp>
#include <superres/experiments.hpp>
#include <superres/io.hpp>
#include <superres/measure.hpp>
#include <superres/music.hpp>
#include <superres/number_detection.hpp>

#include "json_config.hpp"

namespace {

using namespace superres;

constexpr int kExitOk = 0;
constexpr int kExitArgs = 1;
constexpr int kExitVerify = 2;
constexpr int kExitDegenerate = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::string out = ".";
  int grid_density = kConstructionGapGrid;
};

// Where a measurement comes from: a JSON file, or synthesized from a measure.
struct MeasurementArgs {
  std::string input;
  std::vector<double> supports;
  std::vector<double> amplitudes;
  double omega = 1.0;
  int m_samples = 0;
  std::optional<double> sigma;

  void attach(CLI::App* sub) {
    auto* in = sub->add_option("--input", input, "FourierMeasurement JSON file");
    auto* sup = sub->add_option("--supports", supports, "source locations (synthesize mode)");
    sub->add_option("--amplitudes", amplitudes, "source amplitudes (synthesize mode)")->needs(sup);
    sub->add_option("--omega", omega, "cutoff frequency (synthesize mode)")->capture_default_str();
    sub->add_option("--m-samples", m_samples, "sample count, odd; 0 selects 4n+1 (synthesize mode)")
        ->capture_default_str();
    sub->add_option("--sigma", sigma, "noise level; with --input it overrides the file's sigma");
    in->excludes(sup);
  }

  bool synthesized() const { return input.empty(); }

  // Ground truth and the (possibly noisy) data.
  std::pair<std::optional<DiscreteMeasure>, FourierMeasurement> load(std::uint64_t seed) const {
    if (!synthesized()) {
      std::ifstream f(input);
      detail::require(f.good(), ErrorKind::IoError, "cannot open " + input);
      json j;
      try {
        f >> j;
      } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgs, std::string("bad measurement JSON: ") + e.what());
      }
      FourierMeasurement meas;
      try {
        meas = j.get<FourierMeasurement>();
      } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgs, std::string("bad measurement JSON: ") + e.what());
      }
      if (sigma) {
        detail::require(*sigma >= 0.0, ErrorKind::InvalidArgs, "sigma must be >= 0");
        meas.config.sigma = *sigma;
      }
      return {std::nullopt, std::move(meas)};
    }
    detail::require(!supports.empty(), ErrorKind::InvalidArgs, "give --input or --supports/--amplitudes");
    detail::require(supports.size() == amplitudes.size(), ErrorKind::InvalidArgs,
                    "--supports and --amplitudes differ in length");
    DiscreteMeasure mu(supports, amplitudes);
    const int n = static_cast<int>(mu.size());
    const double s = sigma.value_or(0.0);
    detail::require(s >= 0.0, ErrorKind::InvalidArgs, "sigma must be >= 0");
    const MeasurementConfig mc{omega, m_samples > 0 ? m_samples : default_sample_count(n), s};
    FourierMeasurement meas = add_bounded_noise(fourier_forward(mu, mc), s, seed);
    return {std::move(mu), std::move(meas)};
  }

  json manifest() const {
    json j;
    if (!synthesized()) {
      j["input"] = input;
    } else {
      j["supports"] = supports;
      j["amplitudes"] = amplitudes;
      j["omega"] = omega;
      j["m_samples"] = m_samples;
    }
    j["sigma"] = sigma ? json(*sigma) : json(nullptr);
    return j;
  }
};

// Noiseless data would put the threshold at zero, where round-off alone
// clears it; floor it at a relative 1e-10 of the largest sample.
double detection_sigma(const FourierMeasurement& meas) {
  if (meas.config.sigma > 0.0) return meas.config.sigma;
  double peak = 0.0;
  for (const cplx& v : meas.values) peak = std::max(peak, std::abs(v));
  return 1e-10 * peak;
}

std::string out_path(const Globals& g, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(g.out, ec);
  detail::require(!ec, ErrorKind::IoError, "cannot create output directory " + g.out);
  return (std::filesystem::path(g.out) / name).string();
}

void write_json(const Globals& g, const std::string& name, const json& j) {
  write_text_file(out_path(g, name), j.dump(2) + "\n");
}

json base_manifest(const Globals& g, const std::string& command) {
  return json{{"command", command}, {"seed", g.seed}, {"out", g.out}, {"grid_density", g.grid_density}};
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string kind;
  int n = 2;
  double omega = 1.0;
  double sigma = 0.0;
  double m_min = 1.0;
  double s = 3.0;
};

int cmd_construct(const Globals& g, const ConstructArgs& a) {
  detail::require(g.grid_density >= 1000, ErrorKind::InvalidArgs, "--grid-density must be >= 1000");
  AdversarialPair pair;
  if (a.kind == "number")
    pair = construct_number_adversarial(a.n, a.omega, a.sigma, a.m_min);
  else if (a.kind == "support")
    pair = construct_support_adversarial(a.n, a.omega, a.sigma, a.m_min);
  else
    pair = construct_clustered_adversarial(a.n, a.s, a.omega, a.sigma, a.m_min);
  if (g.grid_density != kConstructionGapGrid) pair.verified_gap = sup_norm_gap(pair.mu_hat, pair.mu, a.omega, g.grid_density);

  const bool pass = pair.verified_gap < pair.sigma;
  const std::string file = "construct_" + a.kind + ".json";
  write_json(g, file, pair);
  json m = base_manifest(g, "construct");
  m["args"] = json{{"kind", a.kind}, {"n", a.n}, {"omega", a.omega}, {"sigma", a.sigma}, {"m_min", a.m_min}, {"s", a.s}};
  m["outputs"] = {file};
  m["result"] = pass ? "PASS" : "FAIL";
  write_json(g, "construct_manifest.json", m);

  std::cout << "kind          " << a.kind << "\n"
            << "tau           " << format_g17(pair.tau) << "\n"
            << "min_sep(mu)   " << format_g17(pair.mu.min_separation()) << "\n"
            << "verified_gap  " << format_g17(pair.verified_gap) << "\n"
            << "sigma         " << format_g17(pair.sigma) << "\n"
            << (pass ? "PASS" : "FAIL") << " gap < sigma\n";
  return pass ? kExitOk : kExitVerify;
}

// ------------------------------------------------------------------- detect

struct DetectArgs {
  MeasurementArgs meas;
  std::optional<int> s;
  std::optional<int> expect;
};

int cmd_detect(const Globals& g, const DetectArgs& a) {
  const auto [truth, meas] = a.meas.load(g.seed);
  const double sigma = detection_sigma(meas);
  std::vector<DetectionReport> reports;
  json result;
  int estimate = 0;
  if (a.s) {
    reports.push_back(detect_count_fixed_s(meas, *a.s, sigma));
    estimate = reports.back().estimated_n;
    result = reports.back();
  } else {
    SweepResult sweep = detect_count_sweep(meas, sigma);
    detail::require(!sweep.reports.empty(), ErrorKind::IncompatibleGrid, "no s decimates the sample grid");
    reports = sweep.reports;
    estimate = sweep.n_max;
    result = sweep;
  }
  write_json(g, "detect.json", json{{"measurement", meas}, {"detection", result}});
  json m = base_manifest(g, "detect");
  m["args"] = a.meas.manifest();
  m["args"]["s"] = a.s ? json(*a.s) : json(nullptr);
  m["args"]["expect"] = a.expect ? json(*a.expect) : json(nullptr);
  m["outputs"] = {"detect.json"};
  m["estimated_n"] = estimate;
  write_json(g, "detect_manifest.json", m);

  std::cout << "s    threshold                 sigma_1                   sigma_last                estimate\n";
  for (const auto& r : reports) {
    std::cout << r.s << "    " << format_g17(r.threshold) << "    " << format_g17(r.singular_values.front()) << "    "
              << format_g17(r.singular_values.back()) << "    " << r.estimated_n << "\n";
  }
  std::cout << "estimated_n " << estimate << "\n";
  int expected = a.expect.value_or(-1);
  if (!a.expect && truth) expected = static_cast<int>(truth->size());
  if (expected >= 0) {
    const bool ok = estimate == expected;
    std::cout << (ok ? "PASS" : "FAIL") << " expected " << expected << "\n";
    return ok ? kExitOk : kExitVerify;
  }
  return kExitOk;
}

// -------------------------------------------------------------------- music

struct MusicArgs {
  MeasurementArgs meas;
  std::optional<int> n;
  std::vector<double> window;  // start end step
  std::optional<int> pcr;
  std::optional<int> dcr;
  std::optional<double> dct;
};

int cmd_music(const Globals& g, const MusicArgs& a) {
  const auto [truth, meas] = a.meas.load(g.seed);
  std::string mode = "known-n";
  int n = 0;
  if (a.n) {
    n = *a.n;
  } else {
    mode = "detected-n";
    n = detect_count_sweep(meas, detection_sigma(meas)).n_max;
    if (n < 1) {
      std::cerr << "superres: detected zero sources; nothing to image\n";
      return kExitDegenerate;
    }
  }
  detail::require(n >= 1, ErrorKind::InvalidArgs, "--n must be >= 1");
  TestWindow window;
  if (!a.window.empty()) {
    detail::require(a.window.size() == 3, ErrorKind::InvalidArgs, "--window takes start end step");
    window = {a.window[0], a.window[1], a.window[2]};
  } else {
    std::optional<double> dmin;
    if (truth && truth->size() >= 2) dmin = truth->min_separation();
    window = default_window(std::max(n, 2), meas.config.omega, dmin);
  }
  const MusicImage img = music_image(meas, n, window);
  PeakSelectionParams params = default_peak_params(img);
  if (a.pcr) params.pcr = *a.pcr;
  if (a.dcr) params.dcr = *a.dcr;
  if (a.dct) params.dct = *a.dct;
  const std::vector<double> peaks = select_peaks(img, params);

  write_text_file(out_path(g, "music_image.csv"), music_image_csv(img));
  json res{{"mode", mode}, {"n", n}, {"peaks", peaks}, {"pcr", params.pcr}, {"dcr", params.dcr}, {"dct", params.dct},
           {"window", {window.start, window.end, window.step}}};

  int code = kExitOk;
  std::optional<std::string> outcome;
  if (truth && truth->size() >= 2 && static_cast<std::size_t>(n) == truth->size()) {
    MusicOptions opts{window, params};
    outcome = run_single_experiment(*truth, meas, n, opts) == RecoveryOutcome::Stable ? "Stable" : "Unstable";
    res["outcome"] = *outcome;
    if (*outcome != "Stable") code = kExitVerify;
  }
  write_json(g, "music.json", res);
  json m = base_manifest(g, "music");
  m["args"] = a.meas.manifest();
  m["args"]["n"] = a.n ? json(*a.n) : json(nullptr);
  m["args"]["window"] = a.window;
  m["outputs"] = {"music_image.csv", "music.json"};
  write_json(g, "music_manifest.json", m);

  std::cout << "mode   " << mode << "\n"
            << "n      " << n << "\n"
            << "peaks ";
  for (double p : peaks) std::cout << " " << format_g17(p);
  std::cout << "\n";
  if (outcome) std::cout << "outcome " << *outcome << "\n";
  return code;
}

// -------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string task;
  int n = 2;
  int trials = 500;
  double omega = 1.0;
  int m_samples = 0;
  unsigned threads = 0;
  SamplingRanges ranges;
};

int cmd_sweep(const Globals& g, const SweepArgs& a) {
  const Task task = a.task == "number" ? Task::NumberDetection : Task::LocationRecovery;
  const SweepOptions opt{a.omega, a.m_samples, a.threads};
  PhaseDiagram d = run_phase_sweep(task, a.n, a.trials, a.ranges, g.seed, opt);
  if (d.records.size() >= 200) fit_boundary_slope(d);

  const std::string stem = "sweep_" + a.task + "_n" + std::to_string(a.n);
  emit_diagram(d, {out_path(g, stem + ".csv"), out_path(g, stem + ".svg")});
  json m = sweep_manifest(d, a.trials, a.ranges, g.seed, opt);
  m["threads"] = a.threads;
  m["outputs"] = {stem + ".csv", stem + ".svg"};
  write_json(g, stem + "_manifest.json", m);

  const auto wins = std::count_if(d.records.begin(), d.records.end(), [](const PhaseRecord& r) { return r.success; });
  std::cout << "task          " << a.task << "\n"
            << "trials        " << d.records.size() << " (" << wins << " successes, " << d.resampled
            << " resampled)\n"
            << "theory slope  " << d.theory_slope << "\n";
  if (d.fitted_boundary_slope)
    std::cout << "fitted slope  " << format_g17(*d.fitted_boundary_slope) << "\n"
              << "intercept     " << format_g17(*d.fitted_boundary_intercept) << "\n";
  else
    std::cout << "fitted slope  n/a (fewer than 200 trials)\n";
  return kExitOk;
}

// ----------------------------------------------------------------------- l0

struct L0Args {
  MeasurementArgs meas;
  std::vector<double> grid;
  std::vector<double> grid_range;  // lo hi count
  int n_max = 4;
};

int cmd_l0(const Globals& g, const L0Args& a) {
  const auto [truth, meas] = a.meas.load(g.seed);
  std::vector<double> grid = a.grid;
  if (!a.grid_range.empty()) {
    detail::require(a.grid_range.size() == 3 && a.grid_range[2] >= 2 && a.grid_range[0] < a.grid_range[1],
                    ErrorKind::InvalidArgs, "--grid-range takes lo hi count with lo < hi and count >= 2");
    const int count = static_cast<int>(a.grid_range[2]);
    for (int k = 0; k < count; ++k)
      grid.push_back(a.grid_range[0] + (a.grid_range[1] - a.grid_range[0]) * k / (count - 1));
  }
  detail::require(!grid.empty(), ErrorKind::InvalidArgs, "give --grid or --grid-range");
  detail::require(meas.config.sigma > 0.0, ErrorKind::InvalidArgs, "l0 search needs sigma > 0");
  const L0Result r = l0_grid_search(meas, grid, a.n_max);

  json res{{"grid", grid}, {"n_max", a.n_max}, {"subsets_tried", r.subsets_tried}};
  res["measure"] = r.measure ? json(*r.measure) : json(nullptr);
  if (r.measure) res["residual"] = r.residual;
  write_json(g, "l0.json", res);
  json m = base_manifest(g, "l0");
  m["args"] = a.meas.manifest();
  m["args"]["grid"] = grid;
  m["args"]["n_max"] = a.n_max;
  m["outputs"] = {"l0.json"};
  write_json(g, "l0_manifest.json", m);

  if (!r.measure) {
    std::cout << "no admissible measure with at most " << a.n_max << " grid supports\n";
    return kExitOk;
  }
  std::cout << "cardinality " << r.measure->size() << "\n"
            << "residual    " << format_g17(r.residual) << "\n";
  for (std::size_t j = 0; j < r.measure->size(); ++j)
    std::cout << "  " << format_g17(r.measure->supports()[j]) << "  " << format_g17(r.measure->amplitudes()[j]) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- bounds

struct BoundsArgs {
  int n = 2;
  double omega = 1.0;
  double sigma = 0.0;
  double m_min = 1.0;
};

int cmd_bounds(const Globals& g, const BoundsArgs& a) {
  const SeparationBounds b = separation_bounds(a.n, a.omega, a.sigma, a.m_min);
  write_json(g, "bounds.json", b);
  std::cout << "num_lower   " << format_g17(b.num_lower) << "\n"
            << "num_upper   " << format_g17(b.num_upper) << "\n"
            << "supp_lower  " << format_g17(b.supp_lower) << "\n"
            << "supp_upper  " << format_g17(b.supp_upper) << "\n";
  return kExitOk;
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateLabels:
    case ErrorKind::DegenerateNoiseSpace:
      return kExitDegenerate;
    default:
      return kExitArgs;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resolution limits of positive-source super-resolution: constructions, detection, MUSIC, sweeps"};
  app.require_subcommand(1);
  app.fallthrough();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Globals g;
  app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--grid-density", g.grid_density, "dense grid size for gap checks")->capture_default_str();

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build an adversarial pair and verify its gap");
  construct->add_option("--kind", ca.kind, "number | support | clustered")
      ->required()
      ->check(CLI::IsMember({"number", "support", "clustered"}));
  construct->add_option("--n", ca.n, "source count")->capture_default_str();
  construct->add_option("--omega", ca.omega, "cutoff frequency")->capture_default_str();
  construct->add_option("--sigma", ca.sigma, "noise level")->required();
  construct->add_option("--m-min", ca.m_min, "minimum amplitude")->capture_default_str();
  construct->add_option("--s", ca.s, "cluster spread factor (clustered only)")->capture_default_str();

  DetectArgs da;
  auto* detect = app.add_subcommand("detect", "estimate the source count by thresholded Hankel SVD");
  da.meas.attach(detect);
  detect->add_option("--s", da.s, "fixed Hankel order; default sweeps all compatible s");
  detect->add_option("--expect", da.expect, "expected count; mismatch exits 2");

  MusicArgs ma;
  auto* music = app.add_subcommand("music", "MUSIC image and peak selection");
  ma.meas.attach(music);
  music->add_option("--n", ma.n, "source count; omitted means detect it first");
  music->add_option("--window", ma.window, "test window: start end step")->expected(3);
  music->add_option("--pcr", ma.pcr, "peak compare range (grid points)");
  music->add_option("--dcr", ma.dcr, "differential compare range (grid points)");
  music->add_option("--dct", ma.dct, "differential compare threshold");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo phase-transition sweep");
  sweep->add_option("--task", sa.task, "number | location")->required()->check(CLI::IsMember({"number", "location"}));
  sweep->add_option("--n", sa.n, "source count")->capture_default_str();
  sweep->add_option("--trials", sa.trials, "number of random trials")->capture_default_str();
  sweep->add_option("--omega", sa.omega, "cutoff frequency")->capture_default_str();
  sweep->add_option("--m-samples", sa.m_samples, "sample count; 0 selects 4n+1")->capture_default_str();
  sweep->add_option("--threads", sa.threads, "worker threads; 0 uses all cores")->capture_default_str();
  sweep->add_option("--log-snr-min", sa.ranges.log_snr_min)->capture_default_str();
  sweep->add_option("--log-snr-max", sa.ranges.log_snr_max)->capture_default_str();
  sweep->add_option("--log-srf-min", sa.ranges.log_srf_min)->capture_default_str();
  sweep->add_option("--log-srf-max", sa.ranges.log_srf_max)->capture_default_str();
  sweep->add_option("--amplitude-spread", sa.ranges.amplitude_spread)->capture_default_str();
  sweep->add_option("--m-min", sa.ranges.m_min)->capture_default_str();

  L0Args la;
  auto* l0 = app.add_subcommand("l0", "sparsest admissible grid measure by exhaustive search");
  la.meas.attach(l0);
  auto* grid_opt = l0->add_option("--grid", la.grid, "candidate support points (at most 24)");
  l0->add_option("--grid-range", la.grid_range, "lo hi count")->expected(3)->excludes(grid_opt);
  l0->add_option("--n-max", la.n_max, "largest cardinality tried (<= 4)")->capture_default_str();

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "closed-form separation thresholds");
  bounds->add_option("--n", ba.n, "source count")->capture_default_str();
  bounds->add_option("--omega", ba.omega, "cutoff frequency")->capture_default_str();
  bounds->add_option("--sigma", ba.sigma, "noise level")->required();
  bounds->add_option("--m-min", ba.m_min, "minimum amplitude")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgs;
  }

  try {
    if (*construct) return cmd_construct(g, ca);
    if (*detect) return cmd_detect(g, da);
    if (*music) return cmd_music(g, ma);
    if (*sweep) return cmd_sweep(g, sa);
    if (*l0) return cmd_l0(g, la);
    if (*bounds) return cmd_bounds(g, ba);
  } catch (const Error& e) {
    std::cerr << "superres: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "superres: " << e.what() << "\n";
    return kExitArgs;
  }
  return kExitArgs;
}
