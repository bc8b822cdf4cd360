#include <cmath>

#include <gtest/gtest.h>

#include "zpole/absint.hpp"
#include "zpole/fixtures.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InputError;  // sentinel: nothing thrown
}

class ScalarTorus : public ::testing::TestWithParam<int> {};

TEST_P(ScalarTorus, FormsAgreeAndConditionsHold) {
  const int n = GetParam();
  auto torus = std::make_shared<const Torus>(cplx(0.2, 0.9));
  fixtures::Rng rng(100 + n);
  const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, n);
  const cplx Q(0.7, -0.2);
  const ScalarMultiplicative mult(torus, prob.divisor, prob.chi, prob.tilde, prob.q, Q);
  const ScalarPartialFraction pf(torus, prob.divisor, prob.chi, prob.tilde, prob.q, Q);
  EXPECT_LT(relative_residual(mult(prob.q), Q), 1e-13);
  for (int k = 0; k < 10; ++k) {
    const cplx p = fixtures::random_point(*torus, rng);
    EXPECT_LT(relative_residual(mult(p), pf(p)), 1e-10);
  }
  const BundleMap& map = pf.map();
  const SolutionReport sr = verify_solution([&](cplx p) { return map(p); },
                                            [&](cplx p) { return map.inverse(p); }, map.data(), *map.tilde());
  EXPECT_TRUE(sr.pass());
  for (const auto& rc : residue_condition_check(map.data(), prob.q, CMat::Constant(1, 1, Q), map.chi(), map.tilde())) {
    EXPECT_LT(rc.residual, 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(DivisorSizes, ScalarTorus, ::testing::Values(1, 2, 3));

TEST(Absint, SinglePairThetaAssembly) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  fixtures::Rng rng(4);
  const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, 1);
  const ScalarMultiplicative mult(torus, prob.divisor, prob.chi, prob.tilde, prob.q, 1.0);
  const cplx z = prob.chi.point(torus->engine().period())(0);
  for (int k = 0; k < 5; ++k) {
    const cplx p = fixtures::random_point(*torus, rng);
    const cplx s = special_partial_fraction(*torus, z, prob.divisor.zeros[0], prob.divisor.poles[0], prob.q, 1.0, p);
    EXPECT_LT(relative_residual(mult(p), s), 1e-10);
  }
}

TEST(Absint, NecessaryConditionEnforced) {
  auto torus = std::make_shared<const Torus>(cplx(0, 1));
  fixtures::Rng rng(8);
  const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, 2);
  EXPECT_EQ(code_of([&] { ScalarMultiplicative(torus, prob.divisor, prob.chi, prob.chi, prob.q, 1.0); }),
            ErrorCode::NecessityViolated);
  EXPECT_LT(check_necessity(*torus, prob.chi, prob.tilde, prob.divisor).defect, 1e-12);
}

TEST(Absint, ShiftedPoleLeavesResidue) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  fixtures::Rng rng(12);
  const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, 2);
  InterpolationData data = scalar_data(prob.divisor);
  data.poles[0].point += 0.01;
  double worst = 0;
  for (const auto& rc : residue_condition_check(data, prob.q, CMat::Identity(1, 1), line_kernel(torus, prob.chi),
                                                line_kernel(torus, prob.tilde))) {
    worst = std::max(worst, rc.residual);
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(Absint, FayIdentityAndCollapses) {
  fixtures::Rng rng(2);
  for (cplx tau : {cplx(0, 1), cplx(0, 2), cplx(0.3, 0.8)}) {
    const Torus torus(tau);
    for (int k = 0; k < 20; ++k) {
      const cplx z = fixtures::random_point(torus, rng);
      const auto pts = fixtures::separated_points(torus, rng, 4, 1e-3);
      EXPECT_LT(fay_residual(torus, z, pts[0], pts[1], pts[2], pts[3]), 1e-10);
      EXPECT_LT(fay_residual(torus, z, pts[0], pts[1], pts[2], pts[2]), 1e-10);
      EXPECT_LT(fay_residual(torus, z, pts[2], pts[1], pts[2], pts[3]), 1e-10);
    }
  }
}

TEST(Absint, CoupledRank2RoundTrip) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const fixtures::CoupledFixture fx = fixtures::coupled_rank2_fixture(torus);
  const BundleMap map(fx.data, fx.q, fx.Q, fx.chi, fx.tilde);
  for (cplx p : {cplx(0.05, 0.4), cplx(0.62, 0.31), cplx(0.9, 0.7)}) {
    EXPECT_LT(relative_residual(map(p), fx.map(p)), 1e-12);
    EXPECT_LT(relative_residual(CMat(map(p) * map.inverse(p)), CMat::Identity(2, 2)), 1e-12);
  }
  const SolutionReport sr = verify_solution([&](cplx p) { return map(p); },
                                            [&](cplx p) { return map.inverse(p); }, fx.data, *fx.tilde);
  EXPECT_TRUE(sr.pass());
  ASSERT_EQ(sr.coupling_errors.size(), 2u);
}

TEST(Absint, MatrixFayBothGenera) {
  fixtures::Rng rng(21);
  const fixtures::MatrixFayFixture g0 = fixtures::genus0_matrix_fay(rng);
  EXPECT_LT(matrix_fay_residual(g0.map, *g0.chi, *g0.tilde, g0.lambda, g0.mu, g0.x, g0.u, g0.q,
                                {cplx(2.5, 0.3), cplx(-1.7, -2.2)}),
            1e-10);
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  fixtures::MatrixFayFixture g1 = fixtures::genus1_matrix_fay(torus, rng);
  const std::vector<cplx> samples =
      fixtures::separated_points(*torus, rng, 5, 0.05, {g1.lambda, g1.mu, g1.q});
  EXPECT_LT(matrix_fay_residual(g1.map, *g1.chi, *g1.tilde, g1.lambda, g1.mu, g1.x, g1.u, g1.q, samples), 1e-8);
  g1.x(1) += 0.01;
  EXPECT_GT(matrix_fay_residual(g1.map, *g1.chi, *g1.tilde, g1.lambda, g1.mu, g1.x, g1.u, g1.q, samples), 1e-3);
}

TEST(Absint, FullRankMultiplicativeMatchesBundleMap) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const Characteristic chi = Characteristic::scalar(0.23, 0.61);
  const cplx lam(0.3, 0.2), mu(0.65, 0.45), q(0.1, 0.6);
  const auto [s, t] = torus->lattice_coords(lam - mu);
  const Characteristic tilde = Characteristic::scalar(0.23 + s, 0.61 + t);
  const KernelPtr in = direct_sum_kernel({line_kernel(torus, chi), line_kernel(torus, chi)});
  const KernelPtr out = direct_sum_kernel({line_kernel(torus, tilde), line_kernel(torus, tilde)});
  InterpolationData data;
  data.rank = 2;
  data.zeros = {{lam, {CVec::Unit(2, 0), CVec::Unit(2, 1)}}};
  data.poles = {{mu, {CVec::Unit(2, 0), CVec::Unit(2, 1)}}};
  const FullRankSolution fr = full_rank_multiplicative(data, in, out, q, CMat::Identity(2, 2));
  const BundleMap map(data, q, CMat::Identity(2, 2), in, out);
  for (cplx p : {cplx(0.5, 0.1), cplx(0.2, 0.7)}) EXPECT_LT(relative_residual(fr.map(p), map(p)), 1e-10);
}

TEST(Absint, Rejections) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const fixtures::CoupledFixture fx = fixtures::coupled_rank2_fixture(torus);
  InterpolationData lopsided = fx.data;
  lopsided.poles.pop_back();
  lopsided.couplings.pop_back();
  EXPECT_EQ(code_of([&] { BundleMap(lopsided, fx.q, fx.Q, fx.chi, fx.tilde); }), ErrorCode::NotSquare);
  EXPECT_EQ(code_of([&] { BundleMap(fx.data, fx.data.zeros[1].point, fx.Q, fx.chi, fx.tilde); }),
            ErrorCode::BasePointCollision);
  InterpolationData uncoupled = fx.data;
  uncoupled.couplings.clear();
  EXPECT_EQ(code_of([&] { uncoupled.validate(*fx.tilde); }), ErrorCode::InvalidProblem);
  auto other = std::make_shared<const Torus>(cplx(0, 1));
  const KernelPtr elsewhere = direct_sum_kernel({line_kernel(other, Characteristic::scalar(0.2, 0.3)),
                                                 line_kernel(other, Characteristic::scalar(0.2, 0.3))});
  EXPECT_EQ(code_of([&] { BundleMap(fx.data, fx.q, fx.Q, fx.chi, elsewhere); }), ErrorCode::SurfaceMismatch);
}

}  // namespace
}  // namespace zpole
