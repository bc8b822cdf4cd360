#include <cmath>

#include <gtest/gtest.h>

#include "zpole/fixtures.hpp"
#include "zpole/numerics.hpp"
#include "zpole/surface.hpp"

namespace zpole {
namespace {

TEST(Torus, LatticeCoordinatesAndReduction) {
  const Torus torus(cplx(0.3, 0.8));
  const cplx w = 0.25 * torus.tau() + 0.6;
  const auto [s, t] = torus.lattice_coords(w);
  EXPECT_NEAR(s, 0.25, 1e-14);
  EXPECT_NEAR(t, 0.6, 1e-14);
  EXPECT_LT(std::abs(torus.reduce(w + 2.0 - 3.0 * torus.tau()) - w), 1e-13);
  EXPECT_TRUE(torus.same_point(w, w + torus.tau() + 1.0));
  EXPECT_NEAR(torus.lattice_defect(1.0 + torus.tau() + 0.01), 0.01, 1e-13);
}

TEST(Torus, PrimeFormIsOddAndSimpleZero) {
  const Torus torus(cplx(0.1, 1.2));
  const cplx p(0.2, 0.3), q(0.55, 0.1);
  EXPECT_LT(std::abs(torus.prime_form(p, q) + torus.prime_form(q, p)), 1e-14);
  // E(p, q) ~ (q - p) near the diagonal in the sqrt(dz) frame
  const cplx e = torus.prime_form(p, p + 1e-6);
  EXPECT_NEAR(std::abs(e / 1e-6 - 1.0), 0.0, 1e-6);
}

TEST(Torus, OddLogDerivativeIsThetaRatio) {
  const Torus torus(cplx(0.3, 0.8));
  const cplx w(0.21, 0.17);
  const cplx ratio = torus.theta_char_derivative(Characteristic::half_odd(), w) / torus.odd_theta(w);
  EXPECT_LT(std::abs(torus.odd_log_derivative(w) - ratio), 1e-12 * std::abs(ratio));
}

TEST(Embedding, LaurentTablesMatchCircleExtraction) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  for (int i = 0; i < 3; ++i) {
    const cplx x = emb.poles()[i];
    for (int k = 0; k < 2; ++k) {
      const auto coeffs = circle_coefficients(
          [&](cplx z) { return CMat::Constant(1, 1, emb.value(k, z)); }, x, 0.05, -1, 0, 64);
      EXPECT_LT(std::abs(coeffs[0](0, 0) + emb.residue_table()(i, k)), 1e-11);
      EXPECT_LT(std::abs(coeffs[1](0, 0) + emb.const_table()(i, k)), 1e-11);
    }
  }
  // residues of an elliptic function sum to zero
  EXPECT_LT(emb.residue_table().colwise().sum().cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Embedding, DerivativesAgreeWithDifferenceQuotients) {
  auto torus = std::make_shared<const Torus>(cplx(0, 1));
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const cplx p(0.3, 0.55);
  const double h = 1e-4;
  const Eigen::Vector2cd fd = (emb.values(p + h) - emb.values(p - h)) / (2 * h);
  EXPECT_LT((emb.first_derivatives(p) - fd).norm(), 1e-6 * fd.norm());
}

TEST(Embedding, FunctionsAreElliptic) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const cplx p(0.33, 0.12);
  EXPECT_LT((emb.values(p + 1.0) - emb.values(p)).norm(), 1e-11);
  EXPECT_LT((emb.values(p + torus->tau()) - emb.values(p)).norm(), 1e-11);
}

TEST(Embedding, RejectsCoincidentPoles) {
  auto torus = std::make_shared<const Torus>(cplx(0, 1));
  EXPECT_THROW(build_embedding_functions(torus, 0.1, 0.1 + torus->tau(), 0.5), Error);
}

}  // namespace
}  // namespace zpole
