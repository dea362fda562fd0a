#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "measure.hpp"
#include "music.hpp"
#include "number_detection.hpp"
#include "random.hpp"

namespace superres {

/// Distributions behind the random configurations of a phase sweep.
struct SamplingRanges {
  double log_snr_min = 0.5;  // log10(m_min / sigma)
  double log_snr_max = 6.0;
  double log_srf_min = 0.5;  // log10(pi / (omega d_min))
  double log_srf_max = 1.5;
  double amplitude_spread = 3.0;  // a_j = m_min * u_j, u_j ~ U[1, spread]
  double m_min = 1.0;

  void validate() const {
    detail::require(log_snr_min <= log_snr_max && log_srf_min <= log_srf_max, ErrorKind::InvalidArgs,
                    "sampling range bounds are inverted");
    detail::require(amplitude_spread >= 1.0 && m_min > 0.0, ErrorKind::InvalidArgs,
                    "need amplitude_spread >= 1 and m_min > 0");
  }

  friend bool operator==(const SamplingRanges&, const SamplingRanges&) = default;
};

struct SampledConfig {
  DiscreteMeasure mu;
  double sigma = 0.0;
  double d_min = 0.0;
};

/// Draws n sources in I(n, omega) whose minimum separation is exactly the
/// sampled d_min: one adjacent pair sits at distance d_min and the leftover
/// slack is split uniformly over the other gaps and the two margins.
inline SampledConfig sample_random_config(int n, double omega, const SamplingRanges& ranges, std::uint64_t seed) {
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  detail::require(omega > 0.0, ErrorKind::InvalidArgs, "omega must be > 0");
  ranges.validate();
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_snr = ranges.log_snr_min + (ranges.log_snr_max - ranges.log_snr_min) * unit(rng);
  const double log_srf = ranges.log_srf_min + (ranges.log_srf_max - ranges.log_srf_min) * unit(rng);
  const double d = std::numbers::pi / (omega * std::pow(10.0, log_srf));

  const double half = ClusterInterval{n, omega}.half_width();
  const double slack = 2.0 * half - (n - 1) * d;
  detail::require(slack >= 0.0, ErrorKind::InfeasiblePacking, "n sources at d_min do not fit in I(n, omega)");

  // n pieces: n - 2 free gaps plus left and right margins
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> pieces(static_cast<std::size_t>(n));
  for (double& p : pieces) p = expo(rng);
  const double total = std::accumulate(pieces.begin(), pieces.end(), 0.0);
  for (double& p : pieces) p *= slack * (1.0 - 1e-12) / total;
  const auto anchored = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 2)(rng));

  std::vector<double> y(static_cast<std::size_t>(n));
  y[0] = -half + pieces[0];
  std::size_t next_piece = 1;
  for (std::size_t g = 0; g + 1 < y.size(); ++g) {
    const double extra = g == anchored ? 0.0 : pieces[next_piece++];
    y[g + 1] = y[g] + d + extra;
  }

  std::uniform_real_distribution<double> spread(1.0, ranges.amplitude_spread);
  std::vector<double> a(static_cast<std::size_t>(n));
  for (double& v : a) v = ranges.m_min * (ranges.amplitude_spread > 1.0 ? spread(rng) : 1.0);
  a[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, n - 1)(rng))] = ranges.m_min;

  SampledConfig out;
  out.mu = DiscreteMeasure(std::move(y), std::move(a));
  out.sigma = ranges.m_min * std::pow(10.0, -log_snr);
  out.d_min = out.mu.min_separation();
  return out;
}

enum class Task { NumberDetection, LocationRecovery };

inline std::string task_name(Task t) { return t == Task::NumberDetection ? "number" : "location"; }

inline int theory_slope(Task t, int n) { return t == Task::NumberDetection ? 2 * n - 2 : 2 * n - 1; }

struct PhaseRecord {
  double log_srf = 0.0;
  double log_snr = 0.0;
  int n = 2;
  bool success = false;
  std::uint64_t seed = 0;
  Task task = Task::NumberDetection;

  friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

struct PhaseDiagram {
  std::vector<PhaseRecord> records;  // sorted by seed
  int n = 2;
  Task task = Task::NumberDetection;
  std::optional<double> fitted_boundary_slope;
  std::optional<double> fitted_boundary_intercept;
  int theory_slope = 2;
  std::size_t resampled = 0;  // configurations redrawn after InfeasiblePacking
};

struct SweepOptions {
  double omega = 1.0;
  int m_samples = 0;     // 0 selects 4n + 1
  unsigned threads = 0;  // 0 selects hardware concurrency
};

namespace detail {

inline PhaseRecord run_trial(Task task, int n, const SamplingRanges& ranges, std::uint64_t trial_seed,
                             const SweepOptions& opt, std::size_t& resampled) {
  SampledConfig cfg;
  std::uint64_t attempt = 0;
  for (;; ++attempt) {
    try {
      cfg = sample_random_config(n, opt.omega, ranges, derive_seed(trial_seed, attempt));
      break;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InfeasiblePacking || attempt >= 1000) throw;
      ++resampled;
    }
  }
  const MeasurementConfig mc{opt.omega, opt.m_samples > 0 ? opt.m_samples : default_sample_count(n), cfg.sigma};
  const FourierMeasurement meas =
      add_bounded_noise(fourier_forward(cfg.mu, mc), cfg.sigma, derive_seed(trial_seed, (1ULL << 32) + attempt));

  PhaseRecord r;
  r.n = n;
  r.task = task;
  r.seed = trial_seed;
  r.log_srf = std::log10(std::numbers::pi / (opt.omega * cfg.d_min));
  r.log_snr = std::log10(cfg.mu.min_amplitude() / cfg.sigma);
  if (task == Task::NumberDetection)
    r.success = detect_count_sweep(meas, cfg.sigma).n_max == n;
  else
    r.success = run_single_experiment(cfg.mu, meas, n) == RecoveryOutcome::Stable;
  return r;
}

}  // namespace detail

/// Monte-Carlo sweep over random (d_min, sigma, y_j, a_j). Trial i uses the
/// seed derive_seed(seed, i), so the result is independent of thread count.
inline PhaseDiagram run_phase_sweep(Task task, int n, int trials, const SamplingRanges& ranges, std::uint64_t seed,
                                    const SweepOptions& opt = {}) {
  detail::require(trials >= 1, ErrorKind::InvalidArgs, "trials must be >= 1");
  detail::require(n >= 2, ErrorKind::InvalidArgs, "n must be >= 2");
  ranges.validate();

  PhaseDiagram diagram;
  diagram.n = n;
  diagram.task = task;
  diagram.theory_slope = theory_slope(task, n);
  diagram.records.resize(static_cast<std::size_t>(trials));

  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(trials));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> resampled{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    std::size_t local_resampled = 0;
    for (std::size_t i = next++; i < diagram.records.size(); i = next++) {
      try {
        diagram.records[i] = detail::run_trial(task, n, ranges, derive_seed(seed, i), opt, local_resampled);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
    resampled += local_resampled;
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);
  diagram.resampled = resampled;
  std::sort(diagram.records.begin(), diagram.records.end(),
            [](const PhaseRecord& a, const PhaseRecord& b) { return a.seed < b.seed; });
  return diagram;
}

struct BoundaryFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Penalized logistic regression of success on (log_srf, log_snr); the
/// decision line w0 + w1 x + w2 y = 0 is reported as y = slope x + intercept.
/// The small ridge term keeps the fit finite on separable labels.
inline BoundaryFit fit_logistic_boundary(std::span<const PhaseRecord> records, double ridge = 1e-3) {
  detail::require(records.size() >= 2, ErrorKind::InvalidArgs, "need records to fit");
  const bool first = records.front().success;
  detail::require(std::any_of(records.begin(), records.end(), [&](const PhaseRecord& r) { return r.success != first; }),
                  ErrorKind::DegenerateLabels, "all records share one label");

  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    x(i, 0) = 1.0;
    x(i, 1) = r.log_srf;
    x(i, 2) = r.log_snr;
    y(i) = r.success ? 1.0 : 0.0;
  }
  Eigen::Vector3d mean = x.colwise().mean();
  Eigen::Vector3d scale = ((x.rowwise() - mean.transpose()).array().square().colwise().sum() / double(n)).sqrt();
  for (int c = 1; c < 3; ++c) {
    detail::require(scale(c) > 0.0, ErrorKind::DegenerateLabels, "a feature has zero variance");
    x.col(c) = (x.col(c).array() - mean(c)) / scale(c);
  }

  const Eigen::Vector3d penalty(0.0, ridge, ridge);
  auto objective = [&](const Eigen::Vector3d& w) {
    const Eigen::VectorXd z = x * w;
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = (y(i) > 0.5 ? 1.0 : -1.0) * z(i);
      f += m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return f + 0.5 * (penalty.array() * w.array().square()).sum();
  };

  Eigen::Vector3d w = Eigen::Vector3d::Zero();
  double f = objective(w);
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::VectorXd z = x * w;
    Eigen::VectorXd p(n), weight(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      p(i) = 1.0 / (1.0 + std::exp(-z(i)));
      weight(i) = std::max(p(i) * (1.0 - p(i)), 1e-300);
    }
    const Eigen::Vector3d grad = x.transpose() * (p - y) + (penalty.array() * w.array()).matrix();
    Eigen::Matrix3d hess = x.transpose() * weight.asDiagonal() * x;
    hess.diagonal() += penalty;
    hess.diagonal().array() += 1e-12;
    const Eigen::Vector3d step = hess.ldlt().solve(grad);
    double t = 1.0;
    Eigen::Vector3d cand = w - step;
    double fc = objective(cand);
    while (fc > f - 1e-4 * t * grad.dot(step) && t > 1e-12) {
      t *= 0.5;
      cand = w - t * step;
      fc = objective(cand);
    }
    const double moved = (cand - w).norm();
    w = cand;
    const double improvement = f - fc;
    f = fc;
    if (moved < 1e-10 || improvement < 1e-13 * std::max(1.0, std::abs(f))) break;
  }

  // back to raw units: w0' + w1' x + w2' y with wk' = wk / scale_k
  const double w1 = w(1) / scale(1), w2 = w(2) / scale(2);
  const double w0 = w(0) - w1 * mean(1) - w2 * mean(2);
  detail::require(w2 != 0.0, ErrorKind::DegenerateLabels, "fitted boundary is vertical");
  return {-w1 / w2, -w0 / w2};
}

/// Fits the success boundary log_snr = alpha log_srf + beta, stores it in the
/// diagram and returns alpha.
inline double fit_boundary_slope(PhaseDiagram& diagram) {
  detail::require(diagram.records.size() >= 200, ErrorKind::InvalidArgs, "need at least 200 records");
  const BoundaryFit fit = fit_logistic_boundary(diagram.records);
  diagram.fitted_boundary_slope = fit.slope;
  diagram.fitted_boundary_intercept = fit.intercept;
  return fit.slope;
}

struct L0Result {
  std::optional<DiscreteMeasure> measure;
  double residual = 0.0;  // max-modulus residual of the returned measure
  std::size_t subsets_tried = 0;
};

namespace detail {

struct NnlsFit {
  std::vector<double> amplitudes;  // aligned with the column subset; zeros allowed
  double l2 = 0.0;
};

// Exact nonnegative least squares for a handful of real unknowns: the optimum
// is the unconstrained LS solution on some column subset that comes out
// nonnegative, so enumerate the subsets and keep the best such solution.
inline NnlsFit small_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const auto k = static_cast<int>(a.cols());
  NnlsFit best{std::vector<double>(static_cast<std::size_t>(k), 0.0), b.norm()};
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> cols;
    for (int c = 0; c < k; ++c)
      if (mask & (1u << c)) cols.push_back(c);
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(cols[c]);
    const Eigen::VectorXd x = sub.colPivHouseholderQr().solve(b);
    if ((x.array() < 0.0).any() || !x.allFinite()) continue;
    const double l2 = (sub * x - b).norm();
    if (l2 < best.l2) {
      best.l2 = l2;
      std::fill(best.amplitudes.begin(), best.amplitudes.end(), 0.0);
      for (std::size_t c = 0; c < cols.size(); ++c)
        best.amplitudes[static_cast<std::size_t>(cols[c])] = x(static_cast<Eigen::Index>(c));
    }
  }
  return best;
}

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  for (;;) {
    fn(std::as_const(idx));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Max-modulus residual when rows i and m + i hold the real and imaginary
// parts of sample i.
inline double max_modulus(const Eigen::VectorXd& r, Eigen::Index m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) worst = std::max(worst, std::hypot(r(i), r(m + i)));
  return worst;
}

// Nonnegative amplitudes minimising the max-modulus residual, by Lawson's
// reweighting started from the plain NNLS fit. Returns the best iterate seen,
// with its max-modulus residual in `l2`.
inline NnlsFit minimax_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double target, int iterations = 200) {
  const Eigen::Index m = a.rows() / 2;
  NnlsFit fit = small_nnls(a, b);
  auto residual_of = [&](const std::vector<double>& x) {
    return Eigen::VectorXd(b - a * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
  };
  Eigen::VectorXd r = residual_of(fit.amplitudes);
  NnlsFit best{fit.amplitudes, max_modulus(r, m)};
  // a minimax residual below target forces the L2 optimum below sqrt(m) * target;
  // target <= 0 asks for the full refinement
  if (target > 0.0 && (best.l2 < target || fit.l2 >= std::sqrt(static_cast<double>(m)) * target)) return best;

  Eigen::VectorXd w = Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  for (int it = 0; it < iterations; ++it) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      w(i) *= std::hypot(r(i), r(m + i));
      total += w(i);
    }
    if (!(total > 0.0)) break;
    w /= total;
    Eigen::VectorXd sw(2 * m);
    sw << w.cwiseSqrt(), w.cwiseSqrt();
    fit = small_nnls(sw.asDiagonal() * a, sw.asDiagonal() * b);
    r = residual_of(fit.amplitudes);
    const double worst = max_modulus(r, m);
    if (worst < best.l2) best = {fit.amplitudes, worst};
    if (best.l2 < target) break;
  }
  return best;
}

}  // namespace detail

inline constexpr std::size_t kMaxL0Grid = 24;
inline constexpr int kMaxL0Sparsity = 4;

/// Sparsest positive measure on `grid` that is sigma-admissible at the sample
/// frequencies, by exhaustive search over supports of size 0..n_max.
/// Amplitudes on a candidate support start from nonnegative least squares and
/// are refined toward the smallest max-modulus residual; the candidate is
/// accepted only if that residual is below sigma, so a reported measure is
/// always admissible. Within one cardinality the smallest residual wins.
inline L0Result l0_grid_search(const FourierMeasurement& meas, std::span<const double> grid, int n_max) {
  detail::require(grid.size() <= kMaxL0Grid, ErrorKind::GridTooLarge, "grid holds more than 24 points");
  detail::require(n_max >= 0 && n_max <= kMaxL0Sparsity, ErrorKind::InvalidArgs, "n_max must be in [0, 4]");
  std::vector<double> sorted_grid(grid.begin(), grid.end());
  std::sort(sorted_grid.begin(), sorted_grid.end());
  for (std::size_t i = 1; i < sorted_grid.size(); ++i)
    detail::require(sorted_grid[i] != sorted_grid[i - 1], ErrorKind::DuplicateNodes, "grid has repeated points");

  const double sigma = meas.config.sigma;
  const auto m = static_cast<Eigen::Index>(meas.size());
  Eigen::VectorXd b(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = meas.values[static_cast<std::size_t>(i)].real();
    b(m + i) = meas.values[static_cast<std::size_t>(i)].imag();
  }

  L0Result result;
  const int g = static_cast<int>(sorted_grid.size());
  for (int k = 0; k <= n_max; ++k) {
    std::optional<DiscreteMeasure> best;
    double best_residual = 0.0;
    detail::for_each_combination(g, k, [&](const std::vector<int>& idx) {
      ++result.subsets_tried;
      std::vector<double> ys, as;
      if (k > 0) {
        Eigen::MatrixXd a(2 * m, k);
        for (int c = 0; c < k; ++c) {
          const double y = sorted_grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])];
          for (Eigen::Index i = 0; i < m; ++i) {
            const cplx e = std::polar(1.0, y * meas.frequencies[static_cast<std::size_t>(i)]);
            a(i, c) = e.real();
            a(m + i, c) = e.imag();
          }
        }
        const detail::NnlsFit fit = detail::minimax_nnls(a, b, sigma);
        for (int c = 0; c < k; ++c) {
          if (!(fit.amplitudes[static_cast<std::size_t>(c)] > 0.0)) return;  // a smaller support covers it
          ys.push_back(sorted_grid[static_cast<std::size_t>(idx[static_cast<std::size_t>(c)])]);
          as.push_back(fit.amplitudes[static_cast<std::size_t>(c)]);
        }
      }
      DiscreteMeasure cand(std::move(ys), std::move(as));
      const double res = sample_residual(cand, meas);
      if (res < sigma && (!best || res < best_residual)) {
        best = std::move(cand);
        best_residual = res;
      }
    });
    if (best) {
      result.measure = std::move(best);
      result.residual = best_residual;
      return result;
    }
  }
  return result;
}

inline std::optional<DiscreteMeasure> l0_grid_oracle(const FourierMeasurement& meas, std::span<const double> grid,
                                                     int n_max) {
  return l0_grid_search(meas, grid, n_max).measure;
}

struct OutputPaths {
  std::string csv;
  std::string svg;
};

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string diagram_csv(const PhaseDiagram& diagram) {
  std::ostringstream os;
  os << "log_srf,log_snr,n,task,success,seed\n";
  for (const auto& r : diagram.records)
    os << format_g17(r.log_srf) << ',' << format_g17(r.log_snr) << ',' << r.n << ',' << task_name(r.task) << ','
       << (r.success ? 1 : 0) << ',' << r.seed << '\n';
  return os.str();
}

/// Static 800x600 scatter (blue success, red failure) with the theory-slope
/// guide drawn through the fitted boundary when there is one.
inline std::string diagram_svg(const PhaseDiagram& diagram) {
  double x0 = diagram.records.front().log_srf, x1 = x0;
  double y0 = diagram.records.front().log_snr, y1 = y0;
  for (const auto& r : diagram.records) {
    x0 = std::min(x0, r.log_srf);
    x1 = std::max(x1, r.log_srf);
    y0 = std::min(y0, r.log_snr);
    y1 = std::max(y1, r.log_snr);
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  constexpr double left = 70, right = 770, top = 30, bottom = 540;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
  auto py = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };
  char buf[256];
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, right - left, bottom - top);
  os << buf;
  for (const auto& r : diagram.records) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"%s\"/>\n", px(r.log_srf),
                  py(r.log_snr), r.success ? "#1f4fd6" : "#d62f1f");
    os << buf;
  }
  if (diagram.fitted_boundary_intercept) {
    const double xm = 0.5 * (x0 + x1);
    const double ym = *diagram.fitted_boundary_slope * xm + *diagram.fitted_boundary_intercept;
    auto guide = [&](double x) { return ym + diagram.theory_slope * (x - xm); };
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n",
                  px(x0), py(guide(x0)), px(x1), py(guide(x1)));
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"400\" y=\"580\" text-anchor=\"middle\" font-size=\"16\">log10 SRF  [%.3f, %.3f]</text>\n", x0,
                x1);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"20\" y=\"300\" font-size=\"16\" transform=\"rotate(-90 20 300)\" text-anchor=\"middle\">"
                "log10 SNR  [%.3f, %.3f]</text>\n",
                y0, y1);
  os << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"400\" y=\"20\" text-anchor=\"middle\" font-size=\"16\">%s, n = %d, guide slope %d</text>\n",
                task_name(diagram.task).c_str(), diagram.n, diagram.theory_slope);
  os << buf;
  os << "</svg>\n";
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  detail::require(out.good(), ErrorKind::IoError, "cannot open " + path);
  out << text;
  detail::require(out.good(), ErrorKind::IoError, "failed writing " + path);
}

inline void emit_diagram(const PhaseDiagram& diagram, const OutputPaths& paths) {
  detail::require(!diagram.records.empty(), ErrorKind::InvalidArgs, "diagram has no records");
  if (!paths.csv.empty()) write_text_file(paths.csv, diagram_csv(diagram));
  if (!paths.svg.empty()) write_text_file(paths.svg, diagram_svg(diagram));
}

}  // namespace superres
