#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "error.hpp"
#include "measure.hpp"

namespace superres {

/// Evenly spaced test points [start, end] with spacing `step`.
struct TestWindow {
  double start = -1.0;
  double end = 1.0;
  double step = 0.01;

  void validate() const {
    detail::require(start < end, ErrorKind::InvalidArgs, "window start must be < end");
    detail::require(step > 0.0, ErrorKind::InvalidArgs, "window step must be > 0");
  }

  std::vector<double> points() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> x(count);
    for (std::size_t k = 0; k < count; ++k) x[k] = start + static_cast<double>(k) * step;
    return x;
  }
};

/// Covers I(n, omega) with a 2 / omega margin on each side. The step is
/// d_min / 50 when the separation is known, else a 200th of the Rayleigh limit.
inline TestWindow default_window(int n, double omega, std::optional<double> d_min = std::nullopt) {
  detail::require(n >= 1 && omega > 0.0, ErrorKind::InvalidArgs, "need n >= 1 and omega > 0");
  const double half = (n - 1) * std::numbers::pi / (2.0 * omega) + 2.0 / omega;
  const double step = d_min ? *d_min / 50.0 : (std::numbers::pi / omega) / 200.0;
  return {-half, half, step};
}

struct MusicImage {
  std::vector<double> test_points;
  std::vector<double> values;  // J(x) >= 1
  double spacing_h = 0.0;
};

/// Left singular vectors n+1..Mhat+1 of the (Mhat+1) x (Mhat+1) Hankel matrix
/// built from consecutive samples, Mhat = floor((M - 1) / 2).
inline Eigen::MatrixXcd music_noise_space(const FourierMeasurement& meas, int n) {
  detail::require(n >= 1, ErrorKind::InvalidArgs, "n must be >= 1");
  const int m = static_cast<int>(meas.size());
  const int mhat = (m - 1) / 2;
  detail::require(n < mhat + 1, ErrorKind::DegenerateNoiseSpace, "noise space is empty for n >= Mhat + 1");
  detail::require(m >= 2 * n + 1, ErrorKind::InsufficientSamples, "need M >= 2n + 1 samples");
  Eigen::MatrixXcd h(mhat + 1, mhat + 1);
  for (int p = 0; p <= mhat; ++p)
    for (int q = 0; q <= mhat; ++q) h(p, q) = meas.values[static_cast<std::size_t>(p + q)];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(mhat + 1 - n);
}

/// Phi(x) = (1, e^{ihx}, ..., e^{i Mhat h x})^T.
inline Eigen::VectorXcd steering_vector(double x, double h, int mhat) {
  Eigen::VectorXcd phi(mhat + 1);
  for (int k = 0; k <= mhat; ++k) phi(k) = std::polar(1.0, k * h * x);
  return phi;
}

/// ||U2^* Phi(x)||_2.
inline double noise_projection_norm(const Eigen::MatrixXcd& noise_space, double x, double h) {
  const int mhat = static_cast<int>(noise_space.rows()) - 1;
  return (noise_space.adjoint() * steering_vector(x, h, mhat)).norm();
}

/// Imaging functional J(x) = ||Phi(x)|| / ||U2^* Phi(x)|| with h equal to the
/// frequency sample spacing.
inline MusicImage music_image(const FourierMeasurement& meas, int n, const TestWindow& window) {
  window.validate();
  const Eigen::MatrixXcd u2 = music_noise_space(meas, n);
  const int mhat = static_cast<int>(u2.rows()) - 1;
  MusicImage img;
  img.spacing_h = meas.config.spacing();
  img.test_points = window.points();
  img.values.reserve(img.test_points.size());
  const double phi_norm = std::sqrt(static_cast<double>(mhat + 1));
  for (double x : img.test_points) {
    const double proj = noise_projection_norm(u2, x, img.spacing_h);
    img.values.push_back(phi_norm / std::max(proj, 1e-300));
  }
  return img;
}

struct PeakSelectionParams {
  int pcr = 3;       // peak compare range, grid indices
  int dcr = 2;       // differential compare range, grid indices
  double dct = 0.0;  // differential compare threshold

  void validate() const {
    detail::require(pcr >= 1 && dcr >= 0 && dct >= 0.0, ErrorKind::InvalidArgs,
                    "need pcr >= 1, dcr >= 0, dct >= 0");
  }
};

/// Forward difference of the image divided by the grid step; the last entry
/// repeats its neighbour.
inline std::vector<double> image_derivative(const MusicImage& image) {
  const auto& f = image.values;
  const auto& x = image.test_points;
  std::vector<double> d(f.size(), 0.0);
  for (std::size_t j = 0; j + 1 < f.size(); ++j) d[j] = (f[j + 1] - f[j]) / (x[j + 1] - x[j]);
  if (f.size() >= 2) d.back() = d[d.size() - 2];
  return d;
}

/// PCR = 3, DCR = 2, DCT = 10x the median |f'| of the image.
inline PeakSelectionParams default_peak_params(const MusicImage& image) {
  std::vector<double> d = image_derivative(image);
  for (double& v : d) v = std::abs(v);
  PeakSelectionParams p;
  if (!d.empty()) {
    auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    p.dct = 10.0 * *mid;
  }
  return p;
}

/// Two-pass peak picking: windowed local maxima (leftmost wins ties, flat
/// windows rejected), then a sharpness filter on max |f'| within +-DCR.
inline std::vector<double> select_peaks(const MusicImage& image, const PeakSelectionParams& params) {
  params.validate();
  detail::require(!image.values.empty(), ErrorKind::InvalidArgs, "image is empty");
  const auto& f = image.values;
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const std::vector<double> d = image_derivative(image);
  std::vector<double> peaks;
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, j - params.pcr);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, j + params.pcr);
    bool is_max = true, strict_somewhere = false;
    for (std::ptrdiff_t k = lo; k <= hi && is_max; ++k) {
      if (k == j) continue;
      if (f[k] > f[j] || (k < j && f[k] == f[j])) is_max = false;
      if (f[k] < f[j]) strict_somewhere = true;
    }
    if (!is_max || !strict_somewhere) continue;
    const std::ptrdiff_t dlo = std::max<std::ptrdiff_t>(0, j - params.dcr);
    const std::ptrdiff_t dhi = std::min<std::ptrdiff_t>(n - 1, j + params.dcr);
    double sharp = 0.0;
    for (std::ptrdiff_t k = dlo; k <= dhi; ++k) sharp = std::max(sharp, std::abs(d[k]));
    if (sharp >= params.dct) peaks.push_back(image.test_points[static_cast<std::size_t>(j)]);
  }
  return peaks;
}

enum class RecoveryOutcome { Stable, Unstable };

struct MusicOptions {
  std::optional<TestWindow> window;
  std::optional<PeakSelectionParams> peaks;
};

/// Full location pipeline: image, then peak selection. Returns ascending peaks.
inline std::vector<double> music_recover(const FourierMeasurement& meas, int n, const TestWindow& window,
                                         const std::optional<PeakSelectionParams>& params = std::nullopt) {
  const MusicImage img = music_image(meas, n, window);
  return select_peaks(img, params ? *params : default_peak_params(img));
}

/// Stable iff exactly n peaks are found and, in sorted order, every peak is
/// within d_min / 2 (strictly) of its source.
inline RecoveryOutcome run_single_experiment(const DiscreteMeasure& mu, const FourierMeasurement& meas, int n,
                                             const MusicOptions& opts = {}) {
  detail::require(n >= 2 && mu.size() == static_cast<std::size_t>(n), ErrorKind::InvalidArgs,
                  "mu must carry n >= 2 supports");
  const double d_min = mu.min_separation();
  const TestWindow window = opts.window ? *opts.window : default_window(n, meas.config.omega, d_min);
  const std::vector<double> peaks = music_recover(meas, n, window, opts.peaks);
  if (peaks.size() != static_cast<std::size_t>(n)) return RecoveryOutcome::Unstable;
  for (std::size_t j = 0; j < peaks.size(); ++j)
    if (!(std::abs(peaks[j] - mu.supports()[j]) < d_min / 2.0)) return RecoveryOutcome::Unstable;
  return RecoveryOutcome::Stable;
}

/// Closed-form separation thresholds at a given noise-to-signal ratio.
struct SeparationBounds {
  int n = 2;
  double omega = 1.0;
  double ratio = 1.0;  // sigma / m_min
  double num_lower = 0.0;
  double num_upper = 0.0;
  double supp_lower = 0.0;
  double supp_upper = 0.0;

  /// C(n) = n 2^{4n-2} e^{2n} / sqrt(pi).
  double error_constant() const {
    return n * std::pow(2.0, 4 * n - 2) * std::exp(2.0 * n) / std::sqrt(std::numbers::pi);
  }

  /// C(n) / omega * SRF^{2n-2} * sigma / m_min.
  double supp_error_bound(double srf) const {
    return error_constant() / omega * std::pow(srf, 2 * n - 2) * ratio;
  }
};

inline SeparationBounds separation_bounds(int n, double omega, double sigma, double m_min) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  detail::require(m_min > 0.0 && sigma > 0.0 && sigma <= m_min, ErrorKind::InvalidRatio,
                  "need 0 < sigma <= m_min");
  using std::numbers::e;
  using std::numbers::pi;
  SeparationBounds b;
  b.n = n;
  b.omega = omega;
  b.ratio = sigma / m_min;
  const double num_scale = std::pow(b.ratio, 1.0 / (2 * n - 2)) / omega;
  const double supp_scale = std::pow(b.ratio, 1.0 / (2 * n - 1)) / omega;
  b.num_lower = 2.0 / e * num_scale;
  b.num_upper = 4.4 * pi * e * num_scale;
  b.supp_lower = 2.0 / e * supp_scale;
  b.supp_upper = 5.88 * pi * e * supp_scale;
  return b;
}

}  // namespace superres
