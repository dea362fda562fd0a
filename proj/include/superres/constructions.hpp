#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "measure.hpp"

namespace superres {

namespace detail {

inline void require_distinct(std::span<const double> nodes) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      require(nodes[i] != nodes[j], ErrorKind::DuplicateNodes, "nodes must be pairwise distinct");
}

inline void require_ratio(double sigma, double m_min, bool strict) {
  require(m_min > 0.0 && std::isfinite(m_min), ErrorKind::InvalidRatio, "m_min must be > 0");
  require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::InvalidRatio, "sigma must be > 0");
  require(strict ? sigma < m_min : sigma <= m_min, ErrorKind::InvalidRatio,
          strict ? "sigma must be < m_min" : "sigma must be <= m_min");
}

}  // namespace detail

/// Row j of D^{-1} phi(t) for the k x k Vandermonde matrix D on `nodes`,
/// i.e. the Lagrange basis polynomials P_j evaluated at t.
inline std::vector<double> lagrange_inverse_row(std::span<const double> nodes, double t) {
  detail::require_distinct(nodes);
  std::vector<double> row(nodes.size(), 1.0);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t q = 0; q < nodes.size(); ++q)
      if (q != j) row[j] *= (t - nodes[q]) / (nodes[j] - nodes[q]);
  return row;
}

/// Spanning vector of the one-dimensional null space of
/// (phi_m(t_1), ..., phi_m(t_{m+2})), anchored at a_last = 1.
///
/// Each remaining entry is the closed-form ratio
///   a_j = -prod_{q != j, q < last} (t_last - t_q) / (t_j - t_q),
/// accumulated as a log-magnitude plus a sign so that clustered nodes do not
/// underflow. For increasing nodes the signs alternate.
inline std::vector<double> vandermonde_null_vector(std::span<const double> nodes, int moment_order) {
  detail::require(moment_order >= 0, ErrorKind::InvalidArgs, "moment order must be >= 0");
  detail::require(nodes.size() == static_cast<std::size_t>(moment_order) + 2, ErrorKind::InvalidArgs,
                  "null space is one-dimensional only for moment_order + 2 nodes");
  detail::require_distinct(nodes);
  const std::size_t last = nodes.size() - 1;
  std::vector<double> a(nodes.size());
  a[last] = 1.0;
  for (std::size_t j = 0; j < last; ++j) {
    double log_mag = 0.0;
    bool negative = true;
    for (std::size_t q = 0; q < last; ++q) {
      if (q == j) continue;
      const double num = nodes[last] - nodes[q];
      const double den = nodes[j] - nodes[q];
      log_mag += std::log(std::abs(num)) - std::log(std::abs(den));
      if ((num < 0) != (den < 0)) negative = !negative;
    }
    a[j] = negative ? -std::exp(log_mag) : std::exp(log_mag);
  }
  return a;
}

/// |sum_j a_j t_j^p| / (sum_j |a_j| * max_j |t_j|^p).
inline double relative_moment_residual(const SignedDiscreteMeasure& gamma, int p) {
  double num = 0.0, mass = 0.0, reach = 0.0;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    num += gamma.amplitudes()[j] * std::pow(gamma.supports()[j], p);
    mass += std::abs(gamma.amplitudes()[j]);
    reach = std::max(reach, std::abs(gamma.supports()[j]));
  }
  const double scale = mass * std::pow(reach, p);
  return scale > 0.0 ? std::abs(num) / scale : std::abs(num);
}

enum class AdversarialKind { NumberDetection, SupportRecovery, ClusteredSupport };

inline std::string to_string(AdversarialKind k) {
  switch (k) {
    case AdversarialKind::NumberDetection: return "NumberDetection";
    case AdversarialKind::SupportRecovery: return "SupportRecovery";
    case AdversarialKind::ClusteredSupport: return "ClusteredSupport";
  }
  return "Unknown";
}

/// Two positive measures whose Fourier transforms differ by less than sigma
/// on [-omega, omega]. `gamma` is the signed difference on the joint nodes;
/// `moment_order` is the highest vanishing moment of gamma.
struct AdversarialPair {
  DiscreteMeasure mu;
  DiscreteMeasure mu_hat;
  SignedDiscreteMeasure gamma;
  AdversarialKind kind = AdversarialKind::NumberDetection;
  double tau = 0.0;
  double omega = 1.0;
  double sigma = 0.0;
  double m_min = 0.0;
  double s = 0.0;  // cluster spread factor; only meaningful for ClusteredSupport
  int moment_order = 0;
  double verified_gap = 0.0;
};

namespace detail {

// Scales the null vector so that min |a_j| over `mu_side` equals m_min and
// the anchor has sign `anchor_sign`, then splits into (mu, mu_hat).
inline AdversarialPair assemble_pair(const std::vector<double>& nodes, int moment_order, bool mu_on_even_index,
                                     double anchor_sign, double m_min) {
  std::vector<double> a = vandermonde_null_vector(nodes, moment_order);
  // index parity is 1-based in the construction, so 1-based odd == 0-based even
  auto on_mu_side = [&](std::size_t i) { return ((i % 2) == 1) == mu_on_even_index; };
  std::size_t argmin = nodes.size();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (on_mu_side(i) && (argmin == nodes.size() || std::abs(a[i]) < std::abs(a[argmin]))) argmin = i;
  const double scale = anchor_sign * m_min / std::abs(a[argmin]);
  for (double& v : a) v *= scale;

  std::vector<double> ys, as, hs, has;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (on_mu_side(i)) {
      ys.push_back(nodes[i]);
      as.push_back(i == argmin ? m_min : a[i]);
    } else {
      hs.push_back(nodes[i]);
      has.push_back(-a[i]);
    }
  }
  a[argmin] = a[argmin] > 0 ? m_min : -m_min;
  AdversarialPair pair;
  pair.gamma = SignedDiscreteMeasure(nodes, a);
  pair.mu = DiscreteMeasure(std::move(ys), std::move(as));
  pair.mu_hat = DiscreteMeasure(std::move(hs), std::move(has));
  pair.moment_order = moment_order;
  pair.m_min = m_min;
  return pair;
}

inline void finish_pair(AdversarialPair& pair, double omega, double sigma) {
  pair.omega = omega;
  pair.sigma = sigma;
  pair.verified_gap = sup_norm_gap(pair.mu_hat, pair.mu, omega, kConstructionGapGrid);
}

}  // namespace detail

/// Worst-case pair for number detection: mu with n supports and mu_hat with
/// n - 1 supports, interleaved on the grid (j - n) tau, j = 1..2n-1, with
///   tau = e^{-1} / omega * (sigma / m_min)^{1 / (2n - 2)}.
inline AdversarialPair construct_number_adversarial(int n, double omega, double sigma, double m_min) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  detail::require_ratio(sigma, m_min, false);
  const double tau = std::exp(-1.0) / omega * std::pow(sigma / m_min, 1.0 / (2 * n - 2));
  std::vector<double> nodes(static_cast<std::size_t>(2 * n - 1));
  for (int j = 1; j <= 2 * n - 1; ++j) nodes[static_cast<std::size_t>(j - 1)] = (j - n) * tau;
  AdversarialPair pair = detail::assemble_pair(nodes, 2 * n - 3, false, +1.0, m_min);
  pair.kind = AdversarialKind::NumberDetection;
  pair.tau = tau;
  detail::finish_pair(pair, omega, sigma);
  return pair;
}

/// Worst-case pair for support recovery: two n-source measures interleaved
/// on (j - n - 1/2) tau, j = 1..2n, with
///   tau = e^{-1} / omega * (sigma / m_min)^{1 / (2n - 1)}.
inline AdversarialPair construct_support_adversarial(int n, double omega, double sigma, double m_min) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  detail::require_ratio(sigma, m_min, false);
  const double tau = std::exp(-1.0) / omega * std::pow(sigma / m_min, 1.0 / (2 * n - 1));
  std::vector<double> nodes(static_cast<std::size_t>(2 * n));
  for (int j = 1; j <= 2 * n; ++j) nodes[static_cast<std::size_t>(j - 1)] = (j - n - 0.5) * tau;
  AdversarialPair pair = detail::assemble_pair(nodes, 2 * n - 2, false, -1.0, m_min);
  pair.kind = AdversarialKind::SupportRecovery;
  pair.tau = tau;
  detail::finish_pair(pair, omega, sigma);
  return pair;
}

/// Node layout of the clustered construction (1-based j):
///   even j: t_j = -(s n - 2) tau / 2 + (j - 2) s tau / 2
///   odd j:  t_j = t_{4 ceil((j + 1) / 4) - 2} + (-1)^{(j + 1) / 2} tau
/// Throws DegenerateLayout unless the nodes come out strictly increasing.
inline std::vector<double> clustered_nodes(int n, double s, double tau) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(s > 2.0, ErrorKind::DegenerateLayout, "spread factor s must be > 2");
  detail::require(tau > 0.0, ErrorKind::InvalidArgs, "tau must be > 0");
  std::vector<double> t(static_cast<std::size_t>(2 * n + 1), 0.0);  // 1-based
  for (int j = 2; j <= 2 * n; j += 2) t[static_cast<std::size_t>(j)] = -(s * n - 2) * tau / 2 + (j - 2) * s * tau / 2;
  for (int j = 1; j <= 2 * n - 1; j += 2) {
    const int anchor = 4 * ((j + 1 + 3) / 4) - 2;  // 4 * ceil((j + 1) / 4) - 2
    const double sign = ((j + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(anchor)] + sign * tau;
  }
  std::vector<double> nodes(t.begin() + 1, t.end());
  for (std::size_t i = 1; i < nodes.size(); ++i)
    detail::require(nodes[i] > nodes[i - 1], ErrorKind::DegenerateLayout, "clustered layout has colliding nodes");
  return nodes;
}

/// Clustered pair: mu has n supports spaced s tau (the even-index nodes),
/// mu_hat sits on the odd-index satellites, with
///   tau = 0.2 e^{-1} / (omega s^{(2n+1)/(2n-1)}) * (sigma / m_min)^{1 / (2n - 1)}.
inline AdversarialPair construct_clustered_adversarial(int n, double s, double omega, double sigma, double m_min) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  detail::require(s > 2.0, ErrorKind::DegenerateLayout, "spread factor s must be > 2");
  detail::require_ratio(sigma, m_min, true);
  const double tau = 0.2 * std::exp(-1.0) / (omega * std::pow(s, (2.0 * n + 1) / (2.0 * n - 1))) *
                     std::pow(sigma / m_min, 1.0 / (2 * n - 1));
  const std::vector<double> nodes = clustered_nodes(n, s, tau);
  AdversarialPair pair = detail::assemble_pair(nodes, 2 * n - 2, true, +1.0, m_min);
  pair.kind = AdversarialKind::ClusteredSupport;
  pair.tau = tau;
  pair.s = s;
  detail::finish_pair(pair, omega, sigma);
  return pair;
}

/// Positive point sources in R^k.
class KdMeasure {
 public:
  KdMeasure() = default;

  KdMeasure(int dim, std::vector<std::vector<double>> supports, std::vector<double> amplitudes)
      : dim_(dim), supports_(std::move(supports)), amplitudes_(std::move(amplitudes)) {
    detail::require(dim_ >= 1, ErrorKind::InvalidArgs, "dimension must be >= 1");
    detail::require(supports_.size() == amplitudes_.size(), ErrorKind::InvalidArgs, "length mismatch");
    for (const auto& y : supports_)
      detail::require(y.size() == static_cast<std::size_t>(dim_), ErrorKind::InvalidArgs, "support of wrong dimension");
    for (double a : amplitudes_) detail::require(a > 0.0, ErrorKind::InvalidArgs, "amplitudes must be > 0");
    for (std::size_t i = 0; i < supports_.size(); ++i)
      for (std::size_t j = i + 1; j < supports_.size(); ++j)
        detail::require(distance(i, j) > 0.0, ErrorKind::DuplicateNodes, "repeated support");
  }

  int dim() const noexcept { return dim_; }
  const std::vector<std::vector<double>>& supports() const noexcept { return supports_; }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return supports_.size(); }

  double distance(std::size_t i, std::size_t j) const {
    double d2 = 0.0;
    for (int c = 0; c < dim_; ++c) {
      const double d = supports_[i][static_cast<std::size_t>(c)] - supports_[j][static_cast<std::size_t>(c)];
      d2 += d * d;
    }
    return std::sqrt(d2);
  }

  double min_separation() const {
    detail::require(size() >= 2, ErrorKind::InvalidArgs, "minimum separation needs two supports");
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) d = std::min(d, distance(i, j));
    return d;
  }

  /// sum_j a_j exp(i <y_j, w>).
  cplx fourier_at(std::span<const double> w) const {
    detail::require(w.size() == static_cast<std::size_t>(dim_), ErrorKind::InvalidArgs, "frequency of wrong dimension");
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < size(); ++j) {
      double phase = 0.0;
      for (std::size_t c = 0; c < w.size(); ++c) phase += supports_[j][c] * w[c];
      acc += amplitudes_[j] * std::polar(1.0, phase);
    }
    return acc;
  }

 private:
  int dim_ = 1;
  std::vector<std::vector<double>> supports_;
  std::vector<double> amplitudes_;
};

/// Places each 1-D support y at (y, 0, ..., 0) in R^k.
inline std::pair<KdMeasure, KdMeasure> embed_1d_in_kd(const AdversarialPair& pair, int k) {
  detail::require(k >= 1, ErrorKind::InvalidArgs, "k must be >= 1");
  auto lift = [k](const DiscreteMeasure& m) {
    std::vector<std::vector<double>> pts;
    for (double y : m.supports()) {
      std::vector<double> p(static_cast<std::size_t>(k), 0.0);
      p[0] = y;
      pts.push_back(std::move(p));
    }
    return KdMeasure(k, std::move(pts), m.amplitudes());
  };
  return {lift(pair.mu), lift(pair.mu_hat)};
}

enum class ExtremeMode { MinOver, MaxOver };

struct ExtremalProduct {
  std::size_t index = 0;  // 0-based, leftmost among ties
  double log_value = 0.0;
};

namespace detail {

inline ExtremalProduct pick_extreme(const std::vector<double>& logs, ExtremeMode mode) {
  constexpr double kTieTol = 1e-12;
  ExtremalProduct best{0, logs.front()};
  for (std::size_t i = 1; i < logs.size(); ++i) {
    const double tol = kTieTol * std::max(1.0, std::abs(best.log_value));
    const bool better = mode == ExtremeMode::MinOver ? logs[i] < best.log_value - tol
                                                     : logs[i] > best.log_value + tol;
    if (better) best = {i, logs[i]};
  }
  return best;
}

}  // namespace detail

/// Exhaustive arg-extremum of z -> prod_{x != z} |x - z| over `points`,
/// accumulated in the log domain.
inline ExtremalProduct extremal_product_bruteforce(std::span<const double> points, ExtremeMode mode) {
  detail::require(points.size() >= 2, ErrorKind::InvalidArgs, "need at least two points");
  detail::require(points.size() <= 20, ErrorKind::InvalidArgs, "brute force limited to 20 points");
  detail::require_distinct(points);
  std::vector<double> logs(points.size(), 0.0);
  for (std::size_t z = 0; z < points.size(); ++z)
    for (std::size_t x = 0; x < points.size(); ++x)
      if (x != z) logs[z] += std::log(std::abs(points[x] - points[z]));
  return detail::pick_extreme(logs, mode);
}

/// Exhaustive arg-extremum of z -> prod_{x in targets} |z - x| over z in
/// `candidates` (the two-grid products used for interleaved layouts).
inline ExtremalProduct extremal_cross_product_bruteforce(std::span<const double> candidates,
                                                         std::span<const double> targets, ExtremeMode mode) {
  detail::require(!candidates.empty() && !targets.empty(), ErrorKind::InvalidArgs, "empty point set");
  std::vector<double> logs(candidates.size(), 0.0);
  for (std::size_t z = 0; z < candidates.size(); ++z)
    for (double x : targets) {
      detail::require(candidates[z] != x, ErrorKind::DuplicateNodes, "candidate coincides with target");
      logs[z] += std::log(std::abs(candidates[z] - x));
    }
  return detail::pick_extreme(logs, mode);
}

}  // namespace superres
