#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "tcvol/numerics.hpp"
#include "tcvol/rng.hpp"

namespace {

using tcvol::cplx;

// ============================================================================
// Compensated summation
// ============================================================================

TEST(NeumaierSum, RecoversCancelledSmallTerms) {
  tcvol::NeumaierSum acc;
  acc.add(1.0);
  acc.add(1e100);
  acc.add(1.0);
  acc.add(-1e100);
  EXPECT_DOUBLE_EQ(acc.value(), 2.0)
      << "compensated sum must survive catastrophic cancellation";
}

TEST(NeumaierSum, MatchesPlainSumOnBenignData) {
  tcvol::NeumaierSum acc;
  double plain = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double term = 1.0 / static_cast<double>(i * i);
    acc.add(term);
    plain += term;
  }
  EXPECT_NEAR(acc.value(), plain, 1e-12);
  EXPECT_NEAR(acc.value(), std::numbers::pi * std::numbers::pi / 6.0, 1e-3);
}

// ============================================================================
// Adaptive Gauss-Kronrod on finite intervals
// ============================================================================

class AdaptiveQuadTest : public ::testing::Test {
 protected:
  static constexpr double kTol = 1e-12;
};

TEST_F(AdaptiveQuadTest, PolynomialIsExact) {
  // Degree-9 polynomial: inside the G7-K15 exactness range.
  const auto f = [](double x) {
    return cplx(x * x * x * x * x * x * x * x * x + 3.0 * x * x - x, 0.0);
  };
  const auto out = tcvol::integrate_adaptive(f, -1.0, 2.0, kTol);
  // int x^9 = (2^10 - 1)/10, int 3x^2 = 9, int -x = -3/2
  const double exact = (1024.0 - 1.0) / 10.0 + 9.0 - 1.5;
  EXPECT_TRUE(out.converged);
  EXPECT_NEAR(out.value.real(), exact, 1e-10) << "degree-9 polynomial";
  EXPECT_NEAR(out.value.imag(), 0.0, 1e-14);
}

TEST_F(AdaptiveQuadTest, OscillatoryGaussian) {
  // int_{-8}^{8} e^{-x^2} cos(6x) dx ~ sqrt(pi) e^{-9}; tails beyond 8 are
  // below 1e-28 so the finite window is exact to double precision.
  const auto f = [](double x) {
    return cplx(std::exp(-x * x) * std::cos(6.0 * x), 0.0);
  };
  const auto out = tcvol::integrate_adaptive(f, -8.0, 8.0, kTol);
  const double exact = std::sqrt(std::numbers::pi) * std::exp(-9.0);
  EXPECT_TRUE(out.converged);
  EXPECT_NEAR(out.value.real(), exact, 1e-12)
      << "oscillatory integrand needs panel subdivision";
}

TEST_F(AdaptiveQuadTest, ComplexIntegrandSplitsCorrectly) {
  // int_0^1 e^{ix} dx = sin(1) + i(1 - cos(1))
  const auto f = [](double x) { return std::exp(cplx(0.0, x)); };
  const auto out = tcvol::integrate_adaptive(f, 0.0, 1.0, kTol);
  EXPECT_NEAR(out.value.real(), std::sin(1.0), 1e-13);
  EXPECT_NEAR(out.value.imag(), 1.0 - std::cos(1.0), 1e-13);
}

TEST_F(AdaptiveQuadTest, PanelBudgetExhaustionIsFlagged) {
  // A needle the initial panels cannot resolve within 3 subdivisions.
  const auto f = [](double x) {
    return cplx(1.0 / (1e-12 + (x - 0.123456) * (x - 0.123456)), 0.0);
  };
  const auto out = tcvol::integrate_adaptive(f, 0.0, 1.0, 1e-12, 3);
  EXPECT_FALSE(out.converged) << "exhausted budget must not report success";
}

// ============================================================================
// Whole-line marching integrator
// ============================================================================

class LineMarchTest : public ::testing::Test {
 protected:
  tcvol::LineMarchPolicy policy_{};  // defaults under test
};

TEST_F(LineMarchTest, GaussianIntegratesToSqrtPi) {
  const auto f = [](double x) { return cplx(std::exp(-x * x), 0.0); };
  const auto out = tcvol::integrate_real_line(f, policy_);
  EXPECT_TRUE(out.converged);
  EXPECT_NEAR(out.value.real(), std::sqrt(std::numbers::pi), 1e-10);
  EXPECT_NEAR(out.value.imag(), 0.0, 1e-14)
      << "even real integrand has no imaginary part";
}

TEST_F(LineMarchTest, OffCentreMassIsNotMissed) {
  // Mass sits around x = 9: the march must not stop on the quiet blocks near
  // the origin.
  const auto f = [](double x) {
    const double u = x - 9.0;
    return cplx(std::exp(-u * u), 0.0);
  };
  const auto out = tcvol::integrate_real_line(f, policy_);
  EXPECT_TRUE(out.converged);
  EXPECT_NEAR(out.value.real(), std::sqrt(std::numbers::pi), 1e-9)
      << "marching stopped before reaching off-centre mass";
}

TEST_F(LineMarchTest, HardCapReportsNonConvergence) {
  // A constant never decays; the march must give up and say so rather than
  // return a number silently.
  const auto f = [](double) { return cplx(1e-6, 0.0); };
  tcvol::LineMarchPolicy tight = policy_;
  tight.hard_cap = 32.0;
  const auto out = tcvol::integrate_real_line(f, tight);
  EXPECT_FALSE(out.converged) << "non-decaying integrand must be flagged";
}

TEST_F(LineMarchTest, ConjugateSymmetricIntegrandHasExactlyZeroImagPart) {
  // f(-x) = conj(f(x)) implies the true integral is real.  The mirrored-block
  // evaluation makes the imaginary residual cancel exactly in floating point,
  // which later serves as a pricing diagnostic.
  const auto f = [](double x) {
    return std::exp(cplx(-0.1 * x * x, 0.3 * x)) * cplx(2.0, x);
  };
  const auto out = tcvol::integrate_real_line(f, policy_);
  EXPECT_TRUE(out.converged);
  EXPECT_EQ(out.value.imag(), 0.0)
      << "mirrored evaluation must cancel the imaginary part bitwise";
}

// ============================================================================
// Deterministic ordered Monte-Carlo reduction
// ============================================================================

TEST(McReduce, ResultIndependentOfThreadCount) {
  const auto sample = [](std::size_t i) {
    tcvol::Xoshiro256pp rng = tcvol::Xoshiro256pp::for_stream(777, i);
    return rng.next_normal();
  };
  const auto one = tcvol::mc_reduce(20000, 1, sample);
  const auto four = tcvol::mc_reduce(20000, 4, sample);
  EXPECT_EQ(one.mean, four.mean)
      << "reduction must be bitwise reproducible across thread counts";
  EXPECT_EQ(one.std_error, four.std_error);
}

TEST(McReduce, MeanAndErrorOfKnownStream) {
  // Standard normals: mean ~ 0 within 3 standard errors, stderr ~ 1/sqrt(n).
  const auto sample = [](std::size_t i) {
    tcvol::Xoshiro256pp rng = tcvol::Xoshiro256pp::for_stream(2024, i);
    return rng.next_normal();
  };
  const auto out = tcvol::mc_reduce(100000, 1, sample);
  EXPECT_LT(std::abs(out.mean), 3.0 * out.std_error);
  EXPECT_NEAR(out.std_error, 1.0 / std::sqrt(100000.0), 2e-4);
}

TEST(McReduce, ComplexVariantMatchesComponentwiseMeans) {
  const auto sample = [](std::size_t i) {
    tcvol::Xoshiro256pp rng = tcvol::Xoshiro256pp::for_stream(55, i);
    const double a = rng.next_normal();
    const double b = rng.next_normal();
    return cplx(a, 2.0 * b + 1.0);
  };
  const auto out = tcvol::mc_reduce_complex(50000, 2, sample);
  EXPECT_LT(std::abs(out.mean.real()), 4.0 * out.std_error);
  EXPECT_NEAR(out.mean.imag(), 1.0, 4.0 * out.std_error);
}

// ============================================================================
// RNG primitives
// ============================================================================

TEST(Rng, StreamsAreReproducible) {
  tcvol::Xoshiro256pp a = tcvol::Xoshiro256pp::for_stream(42, 9);
  tcvol::Xoshiro256pp b = tcvol::Xoshiro256pp::for_stream(42, 9);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next(), b.next()) << "same (seed, stream) must replay exactly";
  }
}

TEST(Rng, DistinctStreamsDiffer) {
  tcvol::Xoshiro256pp a = tcvol::Xoshiro256pp::for_stream(42, 0);
  tcvol::Xoshiro256pp b = tcvol::Xoshiro256pp::for_stream(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next() == b.next()) ++same;
  }
  EXPECT_EQ(same, 0) << "adjacent streams must not collide";
}

TEST(Rng, UniformDrawsAreStrictlyInsideUnitInterval) {
  tcvol::Xoshiro256pp rng(314159);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, InverseNormalHitsKnownQuantiles) {
  // Moro (1995) inverse CDF: spot-check against classic quantile values.
  EXPECT_NEAR(tcvol::detail::moro_inverse_normal(0.5), 0.0, 1e-9);
  EXPECT_NEAR(tcvol::detail::moro_inverse_normal(0.975), 1.959963984540054,
              1e-7);
  EXPECT_NEAR(tcvol::detail::moro_inverse_normal(0.0013498980316300946), -3.0,
              1e-6);
  EXPECT_NEAR(tcvol::detail::moro_inverse_normal(0.841344746068543), 1.0, 1e-7);
}

TEST(Rng, NormalMomentsMatchStandardGaussian) {
  tcvol::Xoshiro256pp rng(8675309);
  tcvol::NeumaierSum sum, sum2;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    sum.add(z);
    sum2.add(z * z);
  }
  EXPECT_NEAR(sum.value() / n, 0.0, 3.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(sum2.value() / n, 1.0,
              3.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

}  // namespace
