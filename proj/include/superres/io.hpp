#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "constructions.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "measure.hpp"
#include "music.hpp"
#include "number_detection.hpp"

// JSON and CSV encodings of the library's value types. JSON numbers are
// written with round-trip precision.

namespace superres {

using json = nlohmann::json;

inline void to_json(json& j, const DiscreteMeasure& m) {
  j = json{{"supports", m.supports()}, {"amplitudes", m.amplitudes()}};
}

inline void from_json(const json& j, DiscreteMeasure& m) {
  m = DiscreteMeasure(j.at("supports").get<std::vector<double>>(), j.at("amplitudes").get<std::vector<double>>());
}

inline void to_json(json& j, const SignedDiscreteMeasure& m) {
  j = json{{"supports", m.supports()}, {"amplitudes", m.amplitudes()}};
}

inline void to_json(json& j, const FourierMeasurement& m) {
  json values = json::array();
  for (const cplx& v : m.values) values.push_back({v.real(), v.imag()});
  j = json{{"omega", m.config.omega}, {"sigma", m.config.sigma}, {"frequencies", m.frequencies}, {"values", values}};
}

/// Accepts {"omega", "sigma", "frequencies", "values": [[re, im], ...]} and
/// checks the grid is the evenly spaced [-omega, omega] grid of odd length.
inline void from_json(const json& j, FourierMeasurement& m) {
  FourierMeasurement out;
  out.config.omega = j.at("omega").get<double>();
  out.config.sigma = j.at("sigma").get<double>();
  out.frequencies = j.at("frequencies").get<std::vector<double>>();
  for (const auto& v : j.at("values")) {
    detail::require(v.is_array() && v.size() == 2, ErrorKind::InvalidArgs, "values must be [re, im] pairs");
    out.values.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  detail::require(out.values.size() == out.frequencies.size(), ErrorKind::InvalidArgs,
                  "frequencies and values differ in length");
  out.config.m_samples = static_cast<int>(out.frequencies.size());
  out.config.validate();
  const std::vector<double> expected = out.config.frequencies();
  const double tol = 1e-9 * out.config.omega;
  for (std::size_t i = 0; i < expected.size(); ++i)
    detail::require(std::abs(expected[i] - out.frequencies[i]) <= tol, ErrorKind::IncompatibleGrid,
                    "frequencies are not the evenly spaced grid on [-omega, omega]");
  m = std::move(out);
}

inline void to_json(json& j, const AdversarialPair& p) {
  j = json{{"kind", to_string(p.kind)},
           {"tau", p.tau},
           {"omega", p.omega},
           {"sigma", p.sigma},
           {"m_min", p.m_min},
           {"verified_gap", p.verified_gap},
           {"gap_below_sigma", p.verified_gap < p.sigma},
           {"moment_order", p.moment_order},
           {"mu", p.mu},
           {"mu_hat", p.mu_hat},
           {"gamma", p.gamma}};
  if (p.kind == AdversarialKind::ClusteredSupport) j["s"] = p.s;
}

inline void to_json(json& j, const DetectionReport& r) {
  j = json{{"s", r.s}, {"singular_values", r.singular_values}, {"threshold", r.threshold}, {"estimated_n", r.estimated_n}};
}

inline void to_json(json& j, const SweepResult& r) {
  j = json{{"n_max", r.n_max}, {"reports", r.reports}, {"skipped_s", r.skipped_s}};
}

inline void to_json(json& j, const SamplingRanges& r) {
  j = json{{"log_snr_min", r.log_snr_min}, {"log_snr_max", r.log_snr_max},       {"log_srf_min", r.log_srf_min},
           {"log_srf_max", r.log_srf_max}, {"amplitude_spread", r.amplitude_spread}, {"m_min", r.m_min}};
}

inline void from_json(const json& j, SamplingRanges& r) {
  SamplingRanges out;
  for (const auto& [key, value] : j.items()) {
    if (key == "log_snr_min") out.log_snr_min = value.get<double>();
    else if (key == "log_snr_max") out.log_snr_max = value.get<double>();
    else if (key == "log_srf_min") out.log_srf_min = value.get<double>();
    else if (key == "log_srf_max") out.log_srf_max = value.get<double>();
    else if (key == "amplitude_spread") out.amplitude_spread = value.get<double>();
    else if (key == "m_min") out.m_min = value.get<double>();
    else throw Error(ErrorKind::InvalidArgs, "unknown sampling range field: " + key);
  }
  out.validate();
  r = out;
}

inline void to_json(json& j, const SeparationBounds& b) {
  j = json{{"n", b.n},
           {"omega", b.omega},
           {"sigma_over_m_min", b.ratio},
           {"num_lower", b.num_lower},
           {"num_upper", b.num_upper},
           {"supp_lower", b.supp_lower},
           {"supp_upper", b.supp_upper},
           {"error_constant", b.error_constant()}};
}

/// Two-column CSV "x,J" with a header row.
inline std::string music_image_csv(const MusicImage& image) {
  std::ostringstream os;
  os << "x,J\n";
  for (std::size_t i = 0; i < image.values.size(); ++i)
    os << format_g17(image.test_points[i]) << ',' << format_g17(image.values[i]) << '\n';
  return os.str();
}

/// Run manifest for a phase sweep: everything needed to replay it.
inline json sweep_manifest(const PhaseDiagram& d, int trials, const SamplingRanges& ranges, std::uint64_t seed,
                           const SweepOptions& opt) {
  json j{{"command", "sweep"},
         {"task", task_name(d.task)},
         {"n", d.n},
         {"trials", trials},
         {"seed", seed},
         {"omega", opt.omega},
         {"m_samples", opt.m_samples > 0 ? opt.m_samples : default_sample_count(d.n)},
         {"ranges", ranges},
         {"theory_slope", d.theory_slope},
         {"resampled", d.resampled},
         {"successes", std::count_if(d.records.begin(), d.records.end(), [](const PhaseRecord& r) { return r.success; })}};
  j["fitted_boundary_slope"] = d.fitted_boundary_slope ? json(*d.fitted_boundary_slope) : json(nullptr);
  j["fitted_boundary_intercept"] = d.fitted_boundary_intercept ? json(*d.fitted_boundary_intercept) : json(nullptr);
  return j;
}

}  // namespace superres
