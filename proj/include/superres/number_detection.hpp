#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "error.hpp"
#include "measure.hpp"

namespace superres {

/// (s+1) x (s+1) Hankel matrix of decimated samples,
/// H(p, q) = Y(z_{p+q}) with z_t = -omega + t * omega / s (0-based t).
/// Complex symmetric (H == H^T), not Hermitian.
struct HankelMatrix {
  int s = 1;
  Eigen::MatrixXcd entries;
};

/// Hankel singular values with the (s+1) sigma threshold applied.
struct DetectionReport {
  int s = 1;
  std::vector<double> singular_values;  // descending
  double threshold = 0.0;
  int estimated_n = 0;
};

struct SweepResult {
  int n_max = 0;
  std::vector<DetectionReport> reports;
  std::vector<int> skipped_s;  // s with (M - 1) mod 2s != 0
};

inline bool hankel_grid_compatible(int m_samples, int s) {
  return s >= 1 && m_samples >= 2 * s + 1 && (m_samples - 1) % (2 * s) == 0;
}

inline HankelMatrix assemble_hankel(const FourierMeasurement& meas, int s) {
  detail::require(s >= 1, ErrorKind::InvalidArgs, "s must be >= 1");
  const int m = static_cast<int>(meas.size());
  detail::require(hankel_grid_compatible(m, s), ErrorKind::IncompatibleGrid,
                  "(M - 1) must be a positive multiple of 2s");
  const int stride = (m - 1) / (2 * s);
  HankelMatrix h{s, Eigen::MatrixXcd(s + 1, s + 1)};
  for (int p = 0; p <= s; ++p)
    for (int q = 0; q <= s; ++q) h.entries(p, q) = meas.values[static_cast<std::size_t>((p + q) * stride)];
  return h;
}

inline std::vector<double> singular_values(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

/// Largest j with sigma_j > threshold (1-based); 0 when nothing clears it.
inline int count_above(const std::vector<double>& descending, double threshold) {
  int n = 0;
  for (std::size_t j = 0; j < descending.size(); ++j)
    if (descending[j] > threshold) n = static_cast<int>(j) + 1;
  return n;
}

inline DetectionReport detect_count_fixed_s(const FourierMeasurement& meas, int s, double sigma) {
  detail::require(sigma >= 0.0, ErrorKind::InvalidArgs, "sigma must be >= 0");
  const HankelMatrix h = assemble_hankel(meas, s);
  DetectionReport r;
  r.s = s;
  r.singular_values = singular_values(h.entries);
  r.threshold = (s + 1) * sigma;
  r.estimated_n = count_above(r.singular_values, r.threshold);
  return r;
}

/// Runs the fixed-s detector for s = 1..floor((M-1)/2) and keeps the largest
/// count. Values of s that do not decimate the grid exactly are skipped.
inline SweepResult detect_count_sweep(const FourierMeasurement& meas, double sigma) {
  SweepResult out;
  const int m = static_cast<int>(meas.size());
  for (int s = 1; s <= (m - 1) / 2; ++s) {
    if (!hankel_grid_compatible(m, s)) {
      out.skipped_s.push_back(s);
      continue;
    }
    out.reports.push_back(detect_count_fixed_s(meas, s, sigma));
    out.n_max = std::max(out.n_max, out.reports.back().estimated_n);
  }
  return out;
}

/// zeta(n) = ((n-1)/2)!^2 for odd n, (n/2)! ((n-2)/2)! for even n.
inline double zeta(int n) {
  detail::require(n >= 1, ErrorKind::InvalidArgs, "n must be >= 1");
  if (n % 2 == 1) {
    const double f = std::tgamma((n - 1) / 2 + 1.0);
    return f * f;
  }
  return std::tgamma(n / 2 + 1.0) * std::tgamma((n - 2) / 2 + 1.0);
}

/// Separation above which the fixed-s detector provably returns n:
///   pi s / omega * (2n (s+1) sigma / (zeta(n)^2 m_min))^{1 / (2n - 2)}.
inline double zeta_separation(int n, int s, double sigma, double m_min, double omega) {
  detail::require(n >= 2 && s >= n, ErrorKind::InvalidArgs, "need s >= n >= 2");
  detail::require(sigma >= 0.0 && m_min > 0.0 && omega > 0.0, ErrorKind::InvalidArgs,
                  "need sigma >= 0, m_min > 0, omega > 0");
  const double z = zeta(n);
  return std::numbers::pi * s / omega * std::pow(2.0 * n * (s + 1) * sigma / (z * z * m_min), 1.0 / (2 * n - 2));
}

}  // namespace superres
