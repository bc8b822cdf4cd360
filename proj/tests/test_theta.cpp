#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "zpole/fixtures.hpp"
#include "zpole/theta.hpp"

namespace zpole {
namespace {

CVec vec1(cplx z) { return CVec::Constant(1, z); }

TEST(Theta, ValueAtOriginMatchesGammaFunctionClosedForm) {
  // theta(0 | i) = pi^(1/4) / Gamma(3/4)
  const double oracle = std::pow(kPi, 0.25) / std::tgamma(0.75);
  const ThetaEngine engine(PeriodMatrix::genus1(kI));
  EXPECT_NEAR(engine.theta(vec1(0.0)).real(), oracle, 1e-13);
  EXPECT_NEAR(engine.theta(vec1(0.0)).real(), 1.0864348112, 1e-9);
}

TEST(Theta, OddThetaDerivativeMatchesProductFormula) {
  for (cplx tau : {cplx(0, 1), cplx(0.3, 0.8), cplx(-0.4, 1.7)}) {
    const ThetaEngine engine(PeriodMatrix::genus1(tau));
    const cplx nome = std::exp(kI * kPi * tau);
    cplx prod = 1.0;
    for (int n = 1; n < 60; ++n) prod *= std::pow(1.0 - std::pow(nome, 2 * n), 3);
    const cplx oracle = -kPi * 2.0 * std::exp(kI * kPi * tau / 4.0) * prod;
    const cplx got = engine.gradient(Characteristic::half_odd(), vec1(0.0))(0);
    EXPECT_LT(std::abs(got - oracle), 1e-12 * std::abs(oracle)) << tau;
  }
}

TEST(Theta, DiagonalGenus2Factorizes) {
  CMat omega = CMat::Zero(2, 2);
  omega(0, 0) = cplx(0.1, 1.1);
  omega(1, 1) = cplx(-0.2, 0.7);
  const ThetaEngine g2{PeriodMatrix(omega)};
  const ThetaEngine a(PeriodMatrix::genus1(omega(0, 0))), b(PeriodMatrix::genus1(omega(1, 1)));
  CVec z(2);
  z << cplx(0.3, 0.1), cplx(-0.2, 0.25);
  const cplx expect = a.theta(vec1(z(0))) * b.theta(vec1(z(1)));
  EXPECT_LT(std::abs(g2.theta(z) - expect), 1e-12 * std::abs(expect));
}

TEST(Theta, QuasiPeriodicityGenus2) {
  fixtures::Rng rng(11);
  const PeriodMatrix period = fixtures::random_period_matrix(2, rng);
  const ThetaEngine engine(period);
  for (int k = 0; k < 20; ++k) {
    CVec z = fixtures::random_vector(rng, 2) * 0.5;
    CVec m(2), n(2);
    m << double(k % 3 - 1), 1.0;
    n << double(k % 2), double(k % 3 - 1);
    const cplx quad = (n.transpose() * period.omega() * n)(0, 0);
    const cplx lin = (n.transpose() * z)(0, 0);
    const cplx rhs = std::exp(-kPi * kI * quad - 2.0 * kPi * kI * lin) * engine.theta(z);
    const cplx lhs = engine.theta(z + m + period.omega() * n);
    EXPECT_LT(std::abs(lhs - rhs), 1e-11 * std::abs(rhs));
  }
}

TEST(Theta, CharacteristicMatchesReductionForm) {
  const ThetaEngine engine(PeriodMatrix::genus1(cplx(0.3, 0.8)));
  const Characteristic ch = Characteristic::scalar(1.3, -0.6);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.4, 0.0), cplx(0.7, -0.3)}) {
    const cplx direct = engine.theta_char(ch, vec1(z));
    EXPECT_LT(std::abs(direct - engine.theta_char_by_reduction(ch, vec1(z))), 1e-12 * std::abs(direct));
  }
}

TEST(Theta, GradientMatchesCentralDifference) {
  const ThetaEngine engine(PeriodMatrix::genus1(cplx(0.2, 0.9)));
  const Characteristic ch = Characteristic::scalar(0.3, 0.45);
  const cplx z(0.31, 0.12);
  const double h = 1e-5;
  const cplx fd = (engine.theta_char(ch, vec1(z + h)) - engine.theta_char(ch, vec1(z - h))) / (2 * h);
  EXPECT_LT(std::abs(engine.gradient(ch, vec1(z))(0) - fd), 1e-8);
}

TEST(Theta, RejectsInvalidPeriodMatrix) {
  CMat bad(2, 2);
  bad << kI, 0.3, 0.1, kI;  // not symmetric
  EXPECT_THROW(PeriodMatrix{bad}, Error);
  EXPECT_THROW(PeriodMatrix::genus1(cplx(0.5, -1.0)), Error);
}

TEST(Theta, ReductionRecordsIntegerShift) {
  const ReducedCharacteristic r = reduce_characteristic(Characteristic::scalar(2.25, -0.5));
  EXPECT_DOUBLE_EQ(r.reduced.a(0), 0.25);
  EXPECT_DOUBLE_EQ(r.reduced.b(0), 0.5);
  EXPECT_EQ(r.shift_a(0), 2);
  EXPECT_EQ(r.shift_b(0), -1);
}

}  // namespace
}  // namespace zpole
