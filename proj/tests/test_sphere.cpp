#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "generators.hpp"
#include "gibbsrec/estimate.hpp"
#include "gibbsrec/sphere.hpp"

namespace gibbsrec {
namespace {

constexpr double kPi = std::numbers::pi;

DensityOperator diag_state(double a, double b) {
  return diagonal_state((RealVector(2) << a, b).finished());
}

TEST(SphereArea, Examples) {
  EXPECT_NEAR(sphere_area(1), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi * kPi, 1e-13);
  EXPECT_NEAR(sphere_area(3), kPi * kPi * kPi, 1e-12);
  EXPECT_NEAR(std::log(sphere_area(7)), log_sphere_area(7), 1e-13);
  EXPECT_THROW(sphere_area(0), Error);
}

TEST(GibbsParams, BetaAndExponents) {
  const GibbsParams params(diag_state(0.25, 0.75), 0.1);
  EXPECT_NEAR(params.beta(), 18.0, 1e-12);
  EXPECT_NEAR(params.dirichlet_exponents()(0), 13.5, 1e-12);
  EXPECT_NEAR(params.dirichlet_exponents()(1), 4.5, 1e-12);
  EXPECT_FALSE(params.near_singular());
  EXPECT_EQ(GibbsParams(diag_state(0.25, 0.75), 1.0).beta(), 0.0);
}

TEST(GibbsParams, Errors) {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Parse;
  };
  EXPECT_EQ(kind([] { GibbsParams(diag_state(0.25, 0.75), 0.0); }), ErrorKind::EpsilonOutOfRange);
  EXPECT_EQ(kind([] { GibbsParams(diag_state(0.25, 0.75), 1.5); }), ErrorKind::EpsilonOutOfRange);
  EXPECT_EQ(kind([] { GibbsParams(diag_state(1.0, 0.0), 0.5); }), ErrorKind::NotFullRange);
  EXPECT_TRUE(GibbsParams(diag_state(1.0 - 1e-8, 1e-8), 0.5).near_singular());
}

TEST(SampleHaar, UnitNormAndMeanModulus) {
  SeededStream rng(1);
  RunningMoments first;
  for (int s = 0; s < 100000; ++s) {
    const auto phi = sample_haar(2, rng);
    ASSERT_NEAR(phi.amplitudes().norm(), 1.0, 1e-14);
    first.push(std::norm(phi[0]));
  }
  EXPECT_LE(std::abs(first.mean - 0.5), 3.0 * first.standard_error());
}

TEST(SampleHaar, MeanProjectorIsMaximallyMixed) {
  SeededStream rng(2);
  MatrixMoments acc(3);
  for (int s = 0; s < 100000; ++s) acc.push(projector(sample_haar(3, rng)));
  const auto est = acc.finish();
  EXPECT_LE(est.max_abs_z(Matrix::Identity(3, 3) / 3.0), 3.5);
}

TEST(SampleGibbs, MeanSecondWeight) {
  // Component 2 carries p = 3/4, a = 13.5; the other a = 4.5.
  // t_2 ~ Beta(14.5, 5.5), mean 0.725.
  const GibbsParams params(diag_state(0.25, 0.75), 0.1);
  SeededStream rng(3);
  RunningMoments t2;
  for (int s = 0; s < 100000; ++s) {
    const auto phi = sample_gibbs(params, rng);
    ASSERT_NEAR(phi.amplitudes().norm(), 1.0, 1e-14);
    t2.push(std::norm(phi[1]));
  }
  EXPECT_LE(std::abs(t2.mean - 0.725), 3.0 * t2.standard_error());
}

TEST(SampleGibbs, EpsilonOneMatchesHaarMoments) {
  SeededStream rng(4);
  const auto dec = spectral_decompose(testing::random_density(3, rng));
  const GibbsParams params(dec, 1.0);
  RunningMoments gibbs_t;
  RunningMoments gibbs_t2;
  for (int s = 0; s < 200000; ++s) {
    const double t = std::norm(dec.eigenvectors.col(0).dot(sample_gibbs(params, rng).amplitudes()));
    gibbs_t.push(t);
    gibbs_t2.push(t * t);
  }
  // Haar in C^3: t ~ Beta(1, 2), E t = 1/3, E t^2 = 1/6.
  EXPECT_LE(std::abs(gibbs_t.mean - 1.0 / 3.0), 4.0 * gibbs_t.standard_error());
  EXPECT_LE(std::abs(gibbs_t2.mean - 1.0 / 6.0), 4.0 * gibbs_t2.standard_error());
}

TEST(SampleGibbs, DirichletMomentsAndHaarReweighting) {
  // Route 1: exact Dirichlet sampler. Route 2: Haar draws reweighted by
  // exp(-beta D). Both must reproduce the Dirichlet mean and variance of t_1.
  const GibbsParams params(diag_state(0.4, 0.6), 0.5);
  const RealVector a = params.dirichlet_exponents();
  const double a0 = a.sum() + 2.0;
  const double alpha = a(0) + 1.0;
  const double mean = alpha / a0;
  const double var = alpha * (a0 - alpha) / (a0 * a0 * (a0 + 1.0));

  SeededStream rng(5);
  RunningMoments t1;
  RunningMoments sq;
  const Vector e0 = params.decomposition().eigenvectors.col(0);
  for (int s = 0; s < 1000000; ++s) {
    const double t = std::norm(e0.dot(sample_gibbs(params, rng).amplitudes()));
    t1.push(t);
    sq.push((t - mean) * (t - mean));
  }
  EXPECT_LE(std::abs(t1.mean - mean), 4.0 * t1.standard_error());
  EXPECT_LE(std::abs(sq.mean - var), 4.0 * sq.standard_error());

  SeededStream haar(6);
  double sw = 0.0;
  double swt = 0.0;
  std::vector<std::pair<double, double>> draws;
  draws.reserve(1000000);
  for (int s = 0; s < 1000000; ++s) {
    const auto phi = sample_haar(2, haar);
    const double w = std::exp(-params.beta() * a_posteriori_distance(params.decomposition(), phi).value());
    const double t = std::norm(e0.dot(phi.amplitudes()));
    sw += w;
    swt += w * t;
    draws.emplace_back(w, t);
  }
  const double is_mean = swt / sw;
  // Delta-method standard error of the self-normalized ratio.
  double num = 0.0;
  for (const auto& [w, t] : draws) num += w * w * (t - is_mean) * (t - is_mean);
  const double is_se = std::sqrt(num) / sw;
  EXPECT_LE(std::abs(is_mean - mean), 4.0 * is_se);
}

TEST(SampleTorus, FixedModuliAndZeroDistance) {
  SeededStream rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dec = spectral_decompose(testing::random_density(testing::random_dim(1, 6, rng), rng));
    const auto phi = sample_torus(dec, rng);
    const Vector coords = dec.eigenvectors.adjoint() * phi.amplitudes();
    for (Index k = 0; k < dec.dim(); ++k) {
      EXPECT_NEAR(std::norm(coords(k)), dec.eigenvalues(k), 1e-12);
    }
    EXPECT_LT(std::abs(a_posteriori_distance(dec, phi).value()), 1e-10);
  }
}

TEST(Normalization, ClosedFormValues) {
  const GibbsParams half(diag_state(0.5, 0.5), 0.5);
  EXPECT_NEAR(std::exp(log_normalization_K(half)), 3.0 / (4.0 * kPi * kPi),
              1e-12 * 3.0 / (4.0 * kPi * kPi));
  const GibbsParams one(diagonal_state(RealVector::Ones(1)), 0.3);
  EXPECT_NEAR(std::exp(log_normalization_K(one)), 1.0 / (2.0 * kPi), 1e-14);
}

// For n = 2 the Haar law makes t = |<e_1|phi>|^2 uniform on [0, 1] with
// uniform phases, so int mu dS = area * int_0^1 K exp(-beta D(t)) dt.
double quadrature_mass(double p1, double epsilon) {
  const GibbsParams params(diag_state(p1, 1.0 - p1), epsilon);
  const double pa = params.decomposition().eigenvalues(0);
  const double pb = params.decomposition().eigenvalues(1);
  const double k = std::exp(log_normalization_K(params));
  auto integrand = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double d = pa * std::log(pa / t) + pb * std::log(pb / (1.0 - t));
    return k * std::exp(-params.beta() * d);
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 20, 1e-14);
  return sphere_area(2) * integral;
}

TEST(Normalization, QuadratureOracle) {
  for (double p1 : {0.5, 0.25, 0.1, 0.9}) {
    for (double eps : {0.9, 0.5, 0.1, 0.02}) {
      EXPECT_NEAR(quadrature_mass(p1, eps), 1.0, 1e-9) << "p1=" << p1 << " eps=" << eps;
    }
  }
}

TEST(Normalization, HaarMonteCarloMass) {
  const GibbsParams params(diag_state(0.5, 0.5), 0.5);
  SeededStream rng(8);
  RunningMoments acc;
  for (int s = 0; s < 1000000; ++s) {
    acc.push(std::exp(gibbs_log_density(params, sample_haar(2, rng))));
  }
  const double area = sphere_area(2);
  EXPECT_LE(std::abs(area * acc.mean - 1.0), 3.0 * area * acc.standard_error());
}

TEST(Normalization, HigherDimensionMonteCarloMass) {
  SeededStream rng(9);
  const auto rho = testing::rotated_density((RealVector(3) << 0.2, 0.3, 0.5).finished(), rng);
  const GibbsParams params(rho, 0.6);
  RunningMoments acc;
  for (int s = 0; s < 400000; ++s) {
    acc.push(std::exp(gibbs_log_density(params, sample_haar(3, rng))));
  }
  const double area = sphere_area(3);
  EXPECT_LE(std::abs(area * acc.mean - 1.0), 4.0 * area * acc.standard_error());
}

TEST(GibbsLogDensity, InfiniteDistanceAndMismatch) {
  const GibbsParams params(diag_state(0.25, 0.75), 0.5);
  EXPECT_EQ(gibbs_log_density(params, PureState::from_amplitudes(Vector{{1.0, 0.0}})),
            -std::numeric_limits<double>::infinity());
  EXPECT_THROW(gibbs_log_density(params, PureState::from_amplitudes(Vector{{1.0, 0.0, 0.0}})),
               Error);
}

TEST(SeededStream, Reproducible) {
  SeededStream a(42);
  SeededStream b(42);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.gamma(2.5), b.gamma(2.5));
  }
  SeededStream c(42, 1);
  EXPECT_NE(SeededStream(42).uniform(), c.uniform());
}

}  // namespace
}  // namespace gibbsrec
