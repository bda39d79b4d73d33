#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "gibbsrec/entropy.hpp"
#include "gibbsrec/sphere.hpp"

namespace gibbsrec {
namespace {

// Hand evaluation: 1/4 ln(1/2) + 3/4 ln(3/2).
const double kQuarterVsHalf = 0.25 * std::log(0.5) + 0.75 * std::log(1.5);

DensityOperator diag_state(std::initializer_list<double> p) {
  RealVector v(static_cast<Index>(p.size()));
  Index k = 0;
  for (double x : p) v(k++) = x;
  return diagonal_state(v);
}

TEST(KlDivergence, Examples) {
  const std::array p{0.25, 0.75};
  EXPECT_EQ(kl_divergence(p, p).value(), 0.0);

  const std::array q{0.5, 0.5};
  EXPECT_NEAR(kl_divergence(p, q).value(), 0.130812, 1e-6);
  EXPECT_NEAR(kl_divergence(p, q).value(), kQuarterVsHalf, 1e-15);

  const std::array half{0.5, 0.5};
  const std::array point{1.0, 0.0};
  EXPECT_TRUE(kl_divergence(half, point).is_infinite());
  // 0 log(0 / q) = 0: a zero in p never forces infinity.
  EXPECT_TRUE(kl_divergence(point, half).is_finite());
  EXPECT_NEAR(kl_divergence(point, half).value(), std::log(2.0), 1e-15);
}

TEST(KlDivergence, Errors) {
  const std::array p{0.25, 0.75};
  const std::array q3{0.2, 0.3, 0.5};
  const std::array bad{0.3, 0.3};
  EXPECT_THROW(kl_divergence(p, q3), Error);
  try {
    kl_divergence(p, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalized);
  }
  try {
    kl_divergence(p, q3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LengthMismatch);
  }
}

TEST(VonNeumann, Examples) {
  EXPECT_NEAR(von_neumann_entropy(diag_state({1.0, 0.0})), 0.0, 1e-15);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.5, 0.5})), std::log(2.0), 1e-15);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.25, 0.75})), 0.562335, 1e-6);
  EXPECT_NEAR(von_neumann_entropy(diag_state({0.25, 0.75})),
              -0.25 * std::log(0.25) - 0.75 * std::log(0.75), 1e-15);
}

TEST(VonNeumann, BoundedByLogDimension) {
  SeededStream rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::random_dim(1, 8, rng);
    const double s = von_neumann_entropy(testing::random_density(n, rng));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log(static_cast<double>(n)) + 1e-12);
  }
}

TEST(QuantumRelativeEntropy, Examples) {
  SeededStream rng(8);
  const auto rho = testing::random_density(4, rng);
  EXPECT_NEAR(quantum_relative_entropy(rho, rho).value(), 0.0, 1e-12);

  EXPECT_NEAR(quantum_relative_entropy(diag_state({0.25, 0.75}), diag_state({0.5, 0.5})).value(),
              0.130812, 1e-6);
  EXPECT_TRUE(
      quantum_relative_entropy(diag_state({0.5, 0.5}), diag_state({1.0, 0.0})).is_infinite());
  EXPECT_THROW(quantum_relative_entropy(diag_state({0.5, 0.5}), diag_state({0.2, 0.3, 0.5})),
               Error);
}

TEST(QuantumRelativeEntropy, CommutingReductionProperty) {
  SeededStream rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = testing::random_dim(1, 6, rng);
    const Matrix u = testing::random_unitary(n, rng);
    std::vector<double> p(static_cast<std::size_t>(n));
    std::vector<double> q(p.size());
    double sp = 0.0;
    double sq = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] = rng.uniform() + 0.01;
      q[k] = rng.uniform() + 0.01;
      sp += p[k];
      sq += q[k];
    }
    RealVector pv(n);
    RealVector qv(n);
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] /= sp;
      q[k] /= sq;
      pv(static_cast<Index>(k)) = p[k];
      qv(static_cast<Index>(k)) = q[k];
    }
    const auto rho = validate_density(u * pv.cast<Complex>().asDiagonal() * u.adjoint(), 1e-10);
    const auto sigma = validate_density(u * qv.cast<Complex>().asDiagonal() * u.adjoint(), 1e-10);
    const double expected = kl_divergence(p, q).value();
    // Co-diagonal in a rotated basis goes through two eigensolvers; in the
    // computational basis the reduction is exact to rounding.
    EXPECT_NEAR(quantum_relative_entropy(rho, sigma).value(), expected, 1e-10);
    EXPECT_NEAR(quantum_relative_entropy(diagonal_state(pv), diagonal_state(qv)).value(), expected,
                1e-12);
  }
}

TEST(LuedersState, Examples) {
  const auto rho = diag_state({0.25, 0.75});
  const auto sigma = diag_state({0.6, 0.4});
  EXPECT_LT((lueders_state(rho, sigma).matrix() - sigma.matrix()).cwiseAbs().maxCoeff(), 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const auto plus = validate_density(projector(PureState::from_amplitudes(Vector{{r, r}})), 1e-12);
  EXPECT_LT((lueders_state(rho, plus).matrix() - diag_state({0.5, 0.5}).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);

  const auto zero = validate_density(projector(PureState::from_amplitudes(Vector{{1.0, 0.0}})));
  EXPECT_LT((lueders_state(rho, zero).matrix() - diag_state({1.0, 0.0}).matrix())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(LuedersState, DiagonalInEigenbasisAndTracePreserving) {
  SeededStream rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = testing::random_dim(2, 6, rng);
    const auto rho = testing::random_density(n, rng);
    const auto sigma = testing::random_density(n, rng);
    const auto dec = spectral_decompose(rho);
    const Matrix l = lueders_state(dec, sigma).matrix();
    const Matrix in_basis = dec.eigenvectors.adjoint() * l * dec.eigenvectors;
    const Matrix sigma_basis = dec.eigenvectors.adjoint() * sigma.matrix() * dec.eigenvectors;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        if (i == j) {
          EXPECT_NEAR(std::abs(in_basis(i, i) - sigma_basis(i, i)), 0.0, 1e-12);
        } else {
          EXPECT_NEAR(std::abs(in_basis(i, j)), 0.0, 1e-12);
        }
      }
    }
    EXPECT_NEAR(l.trace().real(), 1.0, 1e-12);
  }
}

TEST(APosterioriDistance, Examples) {
  const auto rho = diag_state({0.25, 0.75});
  const auto on_support = PureState::from_amplitudes(Vector{{0.5, std::sqrt(3.0) / 2.0}});
  EXPECT_NEAR(a_posteriori_distance(rho, on_support).value(), 0.0, 1e-15);

  const double r = 1.0 / std::sqrt(2.0);
  const auto plus = PureState::from_amplitudes(Vector{{r, r}});
  EXPECT_NEAR(a_posteriori_distance(rho, plus).value(), 0.130812, 1e-6);
  EXPECT_NEAR(a_posteriori_distance(rho, plus).value(), kQuarterVsHalf, 1e-14);

  EXPECT_TRUE(a_posteriori_distance(rho, PureState::from_amplitudes(Vector{{1.0, 0.0}}))
                  .is_infinite());
  EXPECT_THROW(a_posteriori_distance(rho, PureState::from_amplitudes(Vector{{1.0, 0.0, 0.0}})),
               Error);
}

TEST(APosterioriDistance, BreakdownTermsSumToTotal) {
  const auto dec = spectral_decompose(diag_state({0.2, 0.3, 0.5}));
  SeededStream rng(2);
  const auto phi = testing::random_pure(3, rng);
  const auto b = a_posteriori_breakdown(dec, phi);
  double total = 0.0;
  for (const auto& t : b.terms) total += t.contribution.value();
  EXPECT_NEAR(total, b.total.value(), 1e-15);
  ASSERT_EQ(b.terms.size(), 3u);
  EXPECT_DOUBLE_EQ(b.terms[0].probability, 0.5);
}

TEST(APosterioriDistance, OverlapConditionIsWeakerThanFiniteness) {
  // <phi|rho|phi> > 0 but one support component is missed: still infinite.
  const auto rho = diag_state({0.25, 0.75});
  const auto phi = PureState::from_amplitudes(Vector{{0.0, 1.0}});
  EXPECT_GT(overlap(phi, rho), 0.0);
  EXPECT_TRUE(a_posteriori_distance(rho, phi).is_infinite());
}

TEST(DistanceSuite, NonnegativityProperty) {
  SeededStream rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = testing::random_dim(1, 6, rng);
    const auto rho = testing::random_density(n, rng);
    const auto sigma = testing::random_density(n, rng);
    const auto phi = testing::random_pure(n, rng);
    EXPECT_GE(a_posteriori_distance(rho, phi).value(), -1e-12);
    EXPECT_GE(quantum_relative_entropy(rho, sigma).value(), -1e-12);
    std::vector<double> p(static_cast<std::size_t>(n));
    std::vector<double> q(p.size());
    const auto dr = spectral_decompose(rho);
    const auto ds = spectral_decompose(sigma);
    for (std::size_t k = 0; k < p.size(); ++k) {
      p[k] = dr.eigenvalues(static_cast<Index>(k));
      q[k] = ds.eigenvalues(static_cast<Index>(k));
    }
    EXPECT_GE(kl_divergence(p, q).value(), -1e-12);
  }
}

TEST(DistanceSuite, LuedersCompositionProperty) {
  SeededStream rng(2000);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = testing::random_dim(1, 6, rng);
    const auto rho = testing::random_density(n, rng);
    const auto phi = testing::random_pure(n, rng);
    const auto d = a_posteriori_distance(rho, phi);
    const auto l = lueders_state(rho, validate_density(projector(phi), 1e-10));
    const auto s = quantum_relative_entropy(rho, l);
    ASSERT_EQ(d.is_infinite(), s.is_infinite());
    if (d.is_finite()) {
      EXPECT_NEAR(d.value(), s.value(), 1e-10);
      ++compared;
    }
  }
  EXPECT_EQ(compared, 1000);
}

TEST(DistanceSuite, TorusZeroSetProperty) {
  SeededStream rng(3000);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = testing::random_dim(1, 6, rng);
    const auto dec = spectral_decompose(testing::random_density(n, rng));
    const auto phi = sample_torus(dec, rng);
    EXPECT_LT(std::abs(a_posteriori_distance(dec, phi).value()), 1e-10);
  }
}

TEST(DistanceSuite, MixedVersusPureFiniteness) {
  SeededStream rng(4000);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = testing::random_dim(2, 6, rng);
    const auto rho = testing::random_density(n, rng);
    const auto phi = testing::random_pure(n, rng);
    EXPECT_TRUE(a_posteriori_distance(rho, phi).is_finite());
    EXPECT_TRUE(
        quantum_relative_entropy(rho, validate_density(projector(phi), 1e-10)).is_infinite());
  }
}

TEST(DistanceSuite, SupportRuleProperty) {
  // phi orthogonal to one eigenvector of a full-range rho: infinite.
  SeededStream rng(5000);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = testing::random_dim(2, 6, rng);
    const auto dec = spectral_decompose(testing::random_density(n, rng));
    const Index miss = testing::random_dim(0, n - 1, rng);
    Vector coords(n);
    for (Index k = 0; k < n; ++k) coords(k) = k == miss ? 0.0 : Complex(rng.normal(), rng.normal());
    const auto phi = PureState::normalized(dec.eigenvectors * coords);
    EXPECT_TRUE(a_posteriori_distance(dec, phi).is_infinite());
  }
}

TEST(ExtendedReal, RendersInfinityLiterally) {
  EXPECT_EQ(ExtendedReal::infinity().to_string(), "+inf");
  EXPECT_EQ(ExtendedReal(0.5).to_string(), "0.5");
}

}  // namespace
}  // namespace gibbsrec
