#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include <superres/constructions.hpp>
#include <superres/measure.hpp>
#include <superres/random.hpp>

using namespace superres;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0), amp(0.5, 2.0);
  std::vector<double> y, a;
  for (int j = 0; j < n; ++j) {
    y.push_back(pos(rng));
    a.push_back(amp(rng));
  }
  return {y, a};
}

// direct sum, independent of fourier_at
cplx naive_transform(const std::vector<double>& y, const std::vector<double>& a, double w) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) acc += a[j] * cplx(std::cos(y[j] * w), std::sin(y[j] * w));
  return acc;
}

}  // namespace

TEST(DiscreteMeasure, CanonicalOrderAndDerivedQuantities) {
  DiscreteMeasure m({0.5, -1.0, 2.0}, {2.0, 3.0, 0.25});
  EXPECT_EQ(m.supports(), (std::vector<double>{-1.0, 0.5, 2.0}));
  EXPECT_EQ(m.amplitudes(), (std::vector<double>{3.0, 2.0, 0.25}));
  EXPECT_DOUBLE_EQ(m.min_amplitude(), 0.25);
  EXPECT_DOUBLE_EQ(m.min_separation(), 1.5);
}

TEST(DiscreteMeasure, RejectsBadInput) {
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  EXPECT_EQ(kind_of([] { DiscreteMeasure({0.0, 0.0}, {1.0, 1.0}); }), ErrorKind::DuplicateNodes);
  EXPECT_EQ(kind_of([] { DiscreteMeasure({0.0}, {0.0}); }), ErrorKind::InvalidArgs);
  EXPECT_EQ(kind_of([] { DiscreteMeasure({0.0}, {-1.0}); }), ErrorKind::InvalidArgs);
  EXPECT_EQ(kind_of([] { DiscreteMeasure({0.0, 1.0}, {1.0}); }), ErrorKind::InvalidArgs);
}

TEST(MeasurementConfig, GridIsSymmetricWithEndpoints) {
  MeasurementConfig c{2.5, 9, 0.0};
  const auto w = c.frequencies();
  ASSERT_EQ(w.size(), 9u);
  EXPECT_EQ(w.front(), -2.5);
  EXPECT_EQ(w.back(), 2.5);
  EXPECT_EQ(w[4], 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(w[i], -w[w.size() - 1 - i]);
  EXPECT_THROW((MeasurementConfig{1.0, 8, 0.0}.validate()), Error);
  EXPECT_THROW((MeasurementConfig{0.0, 9, 0.0}.validate()), Error);
  EXPECT_THROW((MeasurementConfig{1.0, 9, -1.0}.validate()), Error);
}

TEST(ClusterInterval, HalfWidth) {
  EXPECT_DOUBLE_EQ((ClusterInterval{3, 2.0}.half_width()), 2.0 * std::numbers::pi / 4.0);
}

TEST(FourierForward, SingleSourceAtOrigin) {
  const auto meas = fourier_forward(DiscreteMeasure({0.0}, {1.0}), {1.0, 5, 0.0});
  for (const cplx& v : meas.values) EXPECT_EQ(v, cplx(1.0, 0.0));
}

TEST(FourierForward, SymmetricPairIsRealCosine) {
  const double y0 = 0.7;
  const auto meas = fourier_forward(DiscreteMeasure({-y0, y0}, {1.0, 1.0}), {1.0, 11, 0.0});
  for (std::size_t m = 0; m < meas.size(); ++m) {
    EXPECT_NEAR(meas.values[m].real(), 2.0 * std::cos(y0 * meas.frequencies[m]), 1e-15);
    EXPECT_NEAR(meas.values[m].imag(), 0.0, 1e-15);
  }
}

TEST(FourierForward, PairMinusMergedMassIsSinSquared) {
  const double tau = 0.3;
  const MeasurementConfig c{1.0, 21, 0.0};
  const auto f = fourier_forward(DiscreteMeasure({-tau, tau}, {1.0, 1.0}), c);
  const auto g = fourier_forward(DiscreteMeasure({0.0}, {2.0}), c);
  for (std::size_t m = 0; m < f.size(); ++m) {
    const double w = f.frequencies[m];
    const double s = std::sin(tau * w / 2.0);
    EXPECT_NEAR((f.values[m] - g.values[m]).real(), -4.0 * s * s, 1e-14);
    const cplx direct = naive_transform({-tau, tau}, {1.0, 1.0}, w) - naive_transform({0.0}, {2.0}, w);
    EXPECT_NEAR(std::abs(f.values[m] - g.values[m] - direct), 0.0, 1e-14);
  }
}

TEST(FourierForward, PropertyLinearity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m1 = random_measure(rng, 3), m2 = random_measure(rng, 4);
    std::vector<double> y = m1.supports(), a = m1.amplitudes();
    y.insert(y.end(), m2.supports().begin(), m2.supports().end());
    a.insert(a.end(), m2.amplitudes().begin(), m2.amplitudes().end());
    const DiscreteMeasure sum(y, a);
    const MeasurementConfig c{1.3, 17, 0.0};
    const auto f1 = fourier_forward(m1, c), f2 = fourier_forward(m2, c), fs = fourier_forward(sum, c);
    for (std::size_t m = 0; m < fs.size(); ++m) {
      const cplx lin = f1.values[m] + f2.values[m];
      EXPECT_LE(std::abs(fs.values[m] - lin), 1e-12 * std::max(1.0, std::abs(lin)));
    }
  }
}

TEST(FourierForward, PropertyConjugateSymmetry) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto meas = fourier_forward(random_measure(rng, 5), {2.0, 21, 0.0});
    const std::size_t m = meas.size();
    for (std::size_t i = 0; i < m; ++i) EXPECT_LE(std::abs(meas.values[m - 1 - i] - std::conj(meas.values[i])), 1e-12);
  }
}

TEST(FourierForward, PropertyTranslationCovariance) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = random_measure(rng, 4);
    const double c = shift(rng);
    std::vector<double> y = mu.supports();
    for (double& v : y) v += c;
    const MeasurementConfig cfg{1.0, 13, 0.0};
    const auto base = fourier_forward(mu, cfg);
    const auto moved = fourier_forward(DiscreteMeasure(y, mu.amplitudes()), cfg);
    for (std::size_t m = 0; m < base.size(); ++m) {
      const cplx expect = base.values[m] * std::polar(1.0, c * base.frequencies[m]);
      EXPECT_LE(std::abs(moved.values[m] - expect), 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(BoundedNoise, ZeroSigmaIsIdentity) {
  const auto meas = fourier_forward(DiscreteMeasure({-1.0, 0.4}, {1.0, 2.0}), {1.0, 9, 0.0});
  const auto out = add_bounded_noise(meas, 0.0, 5);
  EXPECT_EQ(out.values, meas.values);
}

TEST(BoundedNoise, StrictlyBoundedAndDeterministic) {
  const auto meas = fourier_forward(DiscreteMeasure({-1.0, 0.4}, {1.0, 2.0}), {1.0, 41, 0.0});
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto out = add_bounded_noise(meas, 0.1, seed);
    EXPECT_EQ(out.config.sigma, 0.1);
    for (std::size_t m = 0; m < meas.size(); ++m) EXPECT_LT(std::abs(out.values[m] - meas.values[m]), 0.1);
    if (seed == 7) EXPECT_EQ(out.values, add_bounded_noise(meas, 0.1, 7).values);
  }
  EXPECT_NE(add_bounded_noise(meas, 0.1, 1).values, add_bounded_noise(meas, 0.1, 2).values);
}

TEST(SupNormGap, IdenticalMeasuresGiveExactZero) {
  const DiscreteMeasure m({-0.3, 1.1}, {1.0, 4.0});
  EXPECT_EQ(sup_norm_gap(m, m, 1.0, 4096), 0.0);
}

TEST(SupNormGap, PairVersusMergedMass) {
  const double tau = 0.03679;
  const double gap = sup_norm_gap(DiscreteMeasure({-tau, tau}, {1.0, 1.0}), DiscreteMeasure({0.0}, {2.0}), 1.0);
  const double s = std::sin(tau / 2.0);
  EXPECT_NEAR(gap, 4.0 * s * s, 1e-15);
  EXPECT_NEAR(gap, 1.354e-3, 1e-6);
}

TEST(SupNormGap, InterleavedPairsMatchSinCubed) {
  const double tau = 0.2;
  const DiscreteMeasure f({-1.5 * tau, 0.5 * tau}, {1.0, 3.0});
  const DiscreteMeasure g({-0.5 * tau, 1.5 * tau}, {3.0, 1.0});
  const double s = std::sin(tau / 2.0);
  EXPECT_NEAR(sup_norm_gap(f, g, 1.0), 8.0 * s * s * s, 1e-14);
}

TEST(SupNormGap, PropertyRefinementChangesLessThanOnePercent) {
  for (int n = 2; n <= 5; ++n) {
    const auto pair = construct_support_adversarial(n, 1.0, 1e-2, 1.0);
    const double coarse = sup_norm_gap(pair.mu, pair.mu_hat, 1.0, 4096);
    const double fine = sup_norm_gap(pair.mu, pair.mu_hat, 1.0, 8192);
    EXPECT_LT(std::abs(fine - coarse), 0.01 * fine) << "n=" << n;
  }
}

TEST(SupNormGap, RejectsCoarseGrid) {
  const DiscreteMeasure m({0.0}, {1.0});
  EXPECT_THROW(sup_norm_gap(m, m, 1.0, 999), Error);
}

TEST(Admissibility, Examples) {
  const DiscreteMeasure mu({-1.0, 1.0}, {1.0, 2.0});
  auto meas = fourier_forward(mu, {1.0, 9, 0.0});
  meas.config.sigma = 1e-6;
  EXPECT_TRUE(is_sigma_admissible(mu, meas));
  EXPECT_FALSE(is_sigma_admissible(DiscreteMeasure({-1.0, 1.0}, {2.0, 2.0}), meas));

  const auto pair = construct_number_adversarial(3, 1.0, 1e-2, 1.0);
  auto adv = fourier_forward(pair.mu, {1.0, 13, 0.0});
  adv.config.sigma = pair.sigma;
  EXPECT_TRUE(is_sigma_admissible(pair.mu_hat, adv));
  EXPECT_TRUE(is_sigma_admissible_dense(pair.mu_hat, pair.mu, 1.0, pair.sigma, kConstructionGapGrid));
}

TEST(DeltaNeighborhood, Examples) {
  const double tau = 0.5, eps = 0.1, delta = 0.2;
  const DiscreteMeasure truth({-tau, tau}, {1.0, 1.0});
  EXPECT_TRUE(is_in_delta_neighborhood(truth, truth, 0.3));
  EXPECT_TRUE(is_in_delta_neighborhood(DiscreteMeasure({-tau + eps, tau - eps}, {5.0, 1.0}), truth, delta));
  EXPECT_FALSE(is_in_delta_neighborhood(DiscreteMeasure({-tau + eps}, {5.0}), truth, delta));
  EXPECT_FALSE(is_in_delta_neighborhood(DiscreteMeasure({-tau + eps, -tau - eps}, {1.0, 1.0}), truth, delta));
  EXPECT_THROW(is_in_delta_neighborhood(truth, truth, tau + 1e-9), Error);

  const auto pair = construct_support_adversarial(3, 1.0, 1e-3, 1.0);
  EXPECT_FALSE(is_in_delta_neighborhood(pair.mu_hat, pair.mu, pair.mu.min_separation() / 2.0));
}

TEST(DeltaNeighborhood, PropertyRelabelingSymmetry) {
  // DiscreteMeasure sorts on construction, so any labeling of the same
  // (location, amplitude) pairs must produce the same verdict.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  const DiscreteMeasure truth({-2.0, 0.0, 2.0}, {1.0, 1.0, 1.0});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> y{-2.0 + jitter(rng), jitter(rng), 2.0 + jitter(rng)};
    std::vector<double> a{1.0, 2.0, 3.0};
    const bool base = is_in_delta_neighborhood(DiscreteMeasure(y, a), truth, 0.25);
    std::vector<int> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      std::vector<double> yp, ap;
      for (int p : perm) {
        yp.push_back(y[static_cast<std::size_t>(p)]);
        ap.push_back(a[static_cast<std::size_t>(p)]);
      }
      EXPECT_EQ(is_in_delta_neighborhood(DiscreteMeasure(yp, ap), truth, 0.25), base);
    }
  }
}

TEST(Random, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}
