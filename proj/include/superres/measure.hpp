#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace superres {

using cplx = std::complex<double>;

namespace detail {

// Sorts (support, amplitude) pairs by support and rejects repeated supports.
inline void canonicalize(std::vector<double>& supports, std::vector<double>& amplitudes) {
  require(supports.size() == amplitudes.size(), ErrorKind::InvalidArgs,
          "supports and amplitudes differ in length");
  std::vector<std::size_t> order(supports.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return supports[a] < supports[b]; });
  std::vector<double> s(supports.size()), a(supports.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    s[i] = supports[order[i]];
    a[i] = amplitudes[order[i]];
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(std::isfinite(s[i]) && std::isfinite(a[i]), ErrorKind::InvalidArgs,
            "non-finite support or amplitude");
    if (i > 0) require(s[i] > s[i - 1], ErrorKind::DuplicateNodes, "repeated support");
  }
  supports = std::move(s);
  amplitudes = std::move(a);
}

inline double min_gap(std::span<const double> sorted) {
  require(sorted.size() >= 2, ErrorKind::InvalidArgs, "minimum separation needs two supports");
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) d = std::min(d, sorted[i] - sorted[i - 1]);
  return d;
}

}  // namespace detail

/// Positive point-source configuration sum_j a_j delta_{y_j}, stored with
/// strictly increasing supports. The empty measure is allowed (it is the
/// zero-sparsity answer of the l0 oracle).
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  DiscreteMeasure(std::vector<double> supports, std::vector<double> amplitudes)
      : supports_(std::move(supports)), amplitudes_(std::move(amplitudes)) {
    detail::canonicalize(supports_, amplitudes_);
    for (double a : amplitudes_)
      detail::require(a > 0.0, ErrorKind::InvalidArgs, "amplitudes must be strictly positive");
  }

  const std::vector<double>& supports() const noexcept { return supports_; }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return supports_.size(); }
  bool empty() const noexcept { return supports_.empty(); }

  double min_amplitude() const {
    detail::require(!empty(), ErrorKind::InvalidArgs, "empty measure has no amplitude");
    return *std::min_element(amplitudes_.begin(), amplitudes_.end());
  }

  double min_separation() const { return detail::min_gap(supports_); }

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

 private:
  std::vector<double> supports_;
  std::vector<double> amplitudes_;
};

/// Real measure with mixed-sign, nonzero amplitudes (the difference gamma of
/// an adversarial pair).
class SignedDiscreteMeasure {
 public:
  SignedDiscreteMeasure() = default;

  SignedDiscreteMeasure(std::vector<double> supports, std::vector<double> amplitudes)
      : supports_(std::move(supports)), amplitudes_(std::move(amplitudes)) {
    detail::canonicalize(supports_, amplitudes_);
    for (double a : amplitudes_)
      detail::require(a != 0.0, ErrorKind::InvalidArgs, "signed measure has a zero amplitude");
  }

  const std::vector<double>& supports() const noexcept { return supports_; }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return supports_.size(); }

  /// Positive part and negated negative part, both as positive measures.
  std::pair<DiscreteMeasure, DiscreteMeasure> split() const {
    std::vector<double> ps, pa, ns, na;
    for (std::size_t i = 0; i < size(); ++i) {
      if (amplitudes_[i] > 0) {
        ps.push_back(supports_[i]);
        pa.push_back(amplitudes_[i]);
      } else {
        ns.push_back(supports_[i]);
        na.push_back(-amplitudes_[i]);
      }
    }
    return {DiscreteMeasure(std::move(ps), std::move(pa)),
            DiscreteMeasure(std::move(ns), std::move(na))};
  }

 private:
  std::vector<double> supports_;
  std::vector<double> amplitudes_;
};

template <class M>
concept PointMeasure = requires(const M& m) {
  { m.supports() } -> std::convertible_to<const std::vector<double>&>;
  { m.amplitudes() } -> std::convertible_to<const std::vector<double>&>;
};

/// F[m](omega) = sum_j a_j exp(i y_j omega).
template <PointMeasure M>
cplx fourier_at(const M& m, double omega) {
  cplx acc{0.0, 0.0};
  const auto& y = m.supports();
  const auto& a = m.amplitudes();
  for (std::size_t j = 0; j < y.size(); ++j) acc += a[j] * std::polar(1.0, y[j] * omega);
  return acc;
}

struct MeasurementConfig {
  double omega = 1.0;
  int m_samples = 9;
  double sigma = 0.0;

  void validate() const {
    detail::require(omega > 0.0 && std::isfinite(omega), ErrorKind::InvalidArgs, "omega must be > 0");
    detail::require(m_samples >= 3 && m_samples % 2 == 1, ErrorKind::InvalidArgs,
                    "m_samples must be odd and >= 3");
    detail::require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::InvalidArgs, "sigma must be >= 0");
  }

  /// Evenly spaced frequencies; symmetric about 0 with exact endpoints +-omega.
  std::vector<double> frequencies() const {
    validate();
    const int last = m_samples - 1;
    std::vector<double> w(static_cast<std::size_t>(m_samples));
    for (int m = 0; m < m_samples; ++m)
      w[static_cast<std::size_t>(m)] = omega * (static_cast<double>(2 * m - last) / last);
    return w;
  }

  /// Spacing between consecutive sample frequencies.
  double spacing() const { return 2.0 * omega / (m_samples - 1); }

  friend bool operator==(const MeasurementConfig&, const MeasurementConfig&) = default;
};

struct FourierMeasurement {
  MeasurementConfig config;
  std::vector<double> frequencies;
  std::vector<cplx> values;

  std::size_t size() const noexcept { return values.size(); }
};

/// The cluster interval I(n, Omega) = [-(n-1)pi/(2 Omega), (n-1)pi/(2 Omega)].
struct ClusterInterval {
  int n = 2;
  double omega = 1.0;

  double half_width() const { return (n - 1) * std::numbers::pi / (2.0 * omega); }
  bool contains(double y) const { return std::abs(y) <= half_width(); }
};

/// Default sample count 2 * (2n) + 1, enough for the Hankel sweep up to s = 2n.
inline int default_sample_count(int n) { return 4 * n + 1; }

inline FourierMeasurement fourier_forward(const DiscreteMeasure& mu, const MeasurementConfig& config) {
  FourierMeasurement out{config, config.frequencies(), {}};
  out.values.reserve(out.frequencies.size());
  for (double w : out.frequencies) out.values.push_back(fourier_at(mu, w));
  return out;
}

/// Adds i.i.d. noise drawn uniformly on the disc of radius sigma (1 - 1e-9),
/// so every perturbation has modulus strictly below sigma. The returned
/// measurement records sigma in its config.
inline FourierMeasurement add_bounded_noise(const FourierMeasurement& meas, double sigma, std::uint64_t seed) {
  detail::require(sigma >= 0.0 && std::isfinite(sigma), ErrorKind::InvalidArgs, "sigma must be >= 0");
  FourierMeasurement out = meas;
  out.config.sigma = sigma;
  if (sigma == 0.0) return out;
  Rng rng(seed);
  const double radius = sigma * (1.0 - 1e-9);
  for (auto& v : out.values) v += uniform_disc(rng, radius);
  return out;
}

inline constexpr int kDefaultGapGrid = 4096;
inline constexpr int kConstructionGapGrid = 8192;

/// max |F[f](w) - F[g](w)| over `grid_density` evenly spaced w in [-omega, omega]
/// (endpoints included). A grid approximation, hence a lower bound on the
/// continuum sup-norm.
template <PointMeasure F, PointMeasure G>
double sup_norm_gap(const F& f, const G& g, double omega, int grid_density = kDefaultGapGrid) {
  detail::require(grid_density >= 1000, ErrorKind::InvalidArgs, "grid_density must be >= 1000");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  double best = 0.0;
  const int last = grid_density - 1;
  for (int k = 0; k < grid_density; ++k) {
    const double w = omega * (static_cast<double>(2 * k - last) / last);
    best = std::max(best, std::abs(fourier_at(f, w) - fourier_at(g, w)));
  }
  return best;
}

/// max |F[gamma](w)| over the dense grid.
inline double sup_norm(const SignedDiscreteMeasure& gamma, double omega, int grid_density = kDefaultGapGrid) {
  return sup_norm_gap(gamma, DiscreteMeasure{}, omega, grid_density);
}

/// Largest sample-wise residual max_m |F[candidate](w_m) - Y(w_m)|.
inline double sample_residual(const DiscreteMeasure& candidate, const FourierMeasurement& meas) {
  double r = 0.0;
  for (std::size_t m = 0; m < meas.size(); ++m)
    r = std::max(r, std::abs(fourier_at(candidate, meas.frequencies[m]) - meas.values[m]));
  return r;
}

/// Sigma-admissibility checked at the sample frequencies only (the discrete
/// surrogate of the continuum condition).
inline bool is_sigma_admissible(const DiscreteMeasure& candidate, const FourierMeasurement& meas) {
  return sample_residual(candidate, meas) < meas.config.sigma;
}

/// Sigma-admissibility against a reference measure on the dense grid.
inline bool is_sigma_admissible_dense(const DiscreteMeasure& candidate, const DiscreteMeasure& reference,
                                      double omega, double sigma, int grid_density = kDefaultGapGrid) {
  return sup_norm_gap(candidate, reference, omega, grid_density) < sigma;
}

/// True iff every candidate support lies in exactly one open interval
/// (y_k - delta, y_k + delta) and every interval holds exactly one candidate.
inline bool is_in_delta_neighborhood(const DiscreteMeasure& candidate, const DiscreteMeasure& truth, double delta) {
  detail::require(delta > 0.0, ErrorKind::InvalidArgs, "delta must be > 0");
  if (truth.size() >= 2)
    detail::require(delta <= truth.min_separation() / 2.0, ErrorKind::OverlappingIntervals,
                    "delta exceeds half the minimum separation");
  if (candidate.size() != truth.size()) return false;
  std::vector<int> hits(truth.size(), 0);
  for (double c : candidate.supports()) {
    int inside = 0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (std::abs(c - truth.supports()[k]) < delta) {
        ++inside;
        ++hits[k];
      }
    }
    if (inside != 1) return false;
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

}  // namespace superres
