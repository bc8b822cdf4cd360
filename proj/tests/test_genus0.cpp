#include <cmath>
#include <fstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "zpole/fixtures.hpp"
#include "zpole/genus0.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

Genus0Problem one_pair() {
  Genus0Problem p;
  p.rank = 1;
  p.zeros = {{2.0, CRow::Ones(1)}};
  p.poles = {{3.0, CVec::Ones(1)}};
  return p;
}

TEST(Genus0, SylvesterCoefficientsByHand) {
  // zeros {0, 1}, poles {2, 3}: T = z(z-1)/((z-2)(z-3)) = 1 - 2/(z-2) + 6/(z-3)
  const CVec c = sylvester_coefficients({0.0, 1.0}, {2.0, 3.0});
  EXPECT_NEAR(std::abs(c(0) + 2.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(c(1) - 6.0), 0.0, 1e-13);
}

TEST(Genus0, ScalarValuesFromProductForm) {
  const Genus0Solution sol = solve_genus0(one_pair());
  EXPECT_NEAR(std::abs(sol.function(10.0)(0, 0) - 8.0 / 7.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sol.function.inverse(10.0)(0, 0) - 7.0 / 8.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(sol.function(2.0)(0, 0)), 0.0, 1e-14);
}

TEST(Genus0, ProductAndPartialFractionAgree) {
  fixtures::Rng rng(3);
  for (int n = 1; n <= 4; ++n) {
    const Genus0Problem p = fixtures::random_genus0_problem(rng, 1, n);
    std::vector<cplx> zeros, poles;
    for (const auto& z : p.zeros) zeros.push_back(z.point);
    for (const auto& q : p.poles) poles.push_back(q.point);
    const CVec c = sylvester_coefficients(zeros, poles);
    const Genus0Solution sol = solve_genus0(p);
    for (int k = 0; k < 10; ++k) {
      const cplx w = fixtures::random_complex(rng, 3.0);
      const cplx prod = scalar_product_form(zeros, poles, w);
      EXPECT_LT(relative_residual(prod, partial_fraction_form(poles, c, w)), 1e-11);
      EXPECT_LT(relative_residual(prod, sol.function(w)(0, 0)), 1e-11);
    }
  }
}

TEST(Genus0, MatrixConditionsHold) {
  fixtures::Rng rng(5);
  for (int rank = 1; rank <= 3; ++rank) {
    const Genus0Problem p = fixtures::random_genus0_problem(rng, rank, 3);
    const Genus0Solution sol = solve_genus0(p);
    for (const auto& z : p.zeros) {
      const CMat v = sol.function(z.point);
      EXPECT_LT((z.x * v).norm(), 1e-10 * std::max(1.0, (v - CMat::Identity(rank, rank)).norm()));
    }
    for (const auto& q : p.poles) {
      const CMat res = laurent_matrix([&](cplx w) { return sol.function(w); }, q.point, 0.05).residue;
      EXPECT_LT(span_gap(res, q.u), 1e-10);
    }
    const cplx w(0.37, -1.3);
    EXPECT_LT(relative_residual(CMat(sol.function(w) * sol.function.inverse(w)), CMat::Identity(rank, rank)), 1e-11);
    // equal numbers of zeros and poles: det T winds zero times on a large circle
    EXPECT_NEAR(sol.function.det_winding(10.0), 0.0, 1e-9);
  }
}

TEST(Genus0, DeterminantHasExpectedDivisor) {
  fixtures::Rng rng(9);
  const Genus0Problem p = fixtures::random_genus0_problem(rng, 2, 2);
  const Genus0Solution sol = solve_genus0(p);
  // one zero inside a small circle around each lambda, one pole around each mu
  for (const auto& z : p.zeros) {
    double total = 0;
    cplx prev = sol.function(z.point + 0.05).determinant();
    for (int k = 1; k <= 512; ++k) {
      const cplx cur = sol.function(z.point + std::polar(0.05, 2 * kPi * k / 512)).determinant();
      total += std::arg(cur / prev);
      prev = cur;
    }
    EXPECT_NEAR(total / (2 * kPi), 1.0, 1e-9);
  }
}

TEST(Genus0, RejectsNonSquareAndSingular) {
  Genus0Problem wide = one_pair();
  wide.zeros.push_back({5.0, CRow::Ones(1)});
  try {
    solve_genus0(wide);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSquare);
  }
  std::ifstream f(ZPOLE_TEST_DATA "/genus0_singular.json");
  const Genus0Problem flat = Genus0Problem::from_json(nlohmann::json::parse(f));
  try {
    solve_genus0(flat);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularGamma);
  }
}

TEST(Genus0, ReadsProblemFile) {
  std::ifstream f(ZPOLE_TEST_DATA "/genus0_problem.json");
  const Genus0Problem p = Genus0Problem::from_json(nlohmann::json::parse(f));
  EXPECT_EQ(p.rank, 1);
  EXPECT_NEAR(std::abs(solve_genus0(p).function(10.0)(0, 0) - 8.0 / 7.0), 0.0, 1e-14);
  EXPECT_THROW(Genus0Problem::from_json(nlohmann::json::parse(R"({"rank": 1, "zeros": [{"point": 1}]})")), Error);
}

}  // namespace
}  // namespace zpole
