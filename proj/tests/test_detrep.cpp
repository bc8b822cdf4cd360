#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "zpole/detrep.hpp"
#include "zpole/fixtures.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

struct PencilCase {
  std::shared_ptr<const Torus> torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  EmbeddingPair emb = fixtures::default_embedding(torus);
  KernelPtr kernel;
  PencilRep pencil;
  explicit PencilCase(int rank) {
    std::vector<KernelPtr> parts;
    for (int k = 0; k < rank; ++k) parts.push_back(line_kernel(torus, Characteristic::scalar(0.2 + 0.3 * k, 0.35)));
    kernel = rank == 1 ? parts[0] : direct_sum_kernel(parts);
    pencil = build_pencil(*kernel, emb);
  }
};

TEST(Detrep, PencilShapeAndSymmetry) {
  const PencilCase s(2);
  EXPECT_EQ(s.pencil.size(), 6);
  EXPECT_EQ(s.pencil.m, 3);
  // sigma blocks are scalar multiples of the identity on each fiber
  EXPECT_LT((s.pencil.sigma1 - s.pencil.sigma1.diagonal().asDiagonal().toDenseMatrix()).norm(), 1e-15);
}

TEST(Detrep, KernelIdentitiesAtRandomPoints) {
  for (int rank : {1, 2}) {
    const PencilCase s(rank);
    const NormalizedSections sec(s.kernel, s.emb);
    for (cplx p : {cplx(0.3, 0.2), cplx(0.6, 0.5), cplx(0.15, 0.7)}) {
      for (const Eigen::Vector2cd& xi : {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)}) {
        const IdentityResiduals r = check_kernel_identities(s.pencil, sec, p, xi);
        EXPECT_LT(r.right, 1e-12);
        EXPECT_LT(r.left, 1e-12);
        EXPECT_LT(r.pairing, 1e-10);
      }
    }
    EXPECT_THROW(check_kernel_identities(s.pencil, sec, s.emb.poles()[0], Eigen::Vector2cd(1, 0)), Error);
  }
}

TEST(Detrep, GammaPerturbationSensitivity) {
  // Relative residual responds linearly to a change in one entry of gamma,
  // at the size predicted from the kernel section and the pencil norm.
  const PencilCase s(1);
  const NormalizedSections sec(s.kernel, s.emb);
  const cplx p(0.3, 0.2);
  const CMat right = sec.cross(p);
  for (int i = 0; i < s.pencil.size(); ++i) {
    PencilRep nudged = s.pencil;
    nudged.gamma(i, 0) += 1e-3;
    const double predicted =
        1e-3 * right.row(0).norm() / (nudged.at_point(s.emb, p).norm() * right.norm());
    const double got = check_kernel_identities(nudged, sec, p, Eigen::Vector2cd(1, 0)).right;
    EXPECT_NEAR(got / predicted, 1.0, 1e-3);
    EXPECT_GT(got, 1e-5);
  }
}

TEST(Detrep, CurveMembership) {
  for (int rank : {1, 2}) {
    const PencilCase s(rank);
    for (cplx p : {cplx(0.3, 0.2), cplx(0.6, 0.5), cplx(0.9, 0.1)}) {
      const Membership m = curve_membership(s.pencil, s.emb, p);
      EXPECT_LT(m.relative_det, 1e-12);
      EXPECT_EQ(m.kernel_dim, rank);
      const Eigen::Vector2cd z = s.emb.values(p);
      EXPECT_GT(pencil_membership(s.pencil, z(0) + 1.0, z(1) - 0.5).relative_det, 1e-3);
    }
  }
}

TEST(Detrep, AdjustedPencilStaysOnCurve) {
  const PencilCase s(2);
  EXPECT_EQ(adjust_gamma_by_map(s.pencil, std::vector<CMat>(3, CMat::Identity(2, 2))).gamma, s.pencil.gamma);
  std::vector<CMat> values;
  for (int i = 0; i < 3; ++i) {
    CMat v = CMat::Identity(2, 2);
    v(0, 1) = 0.4 * (i + 1);
    values.push_back(v);
  }
  const PencilRep adjusted = adjust_gamma_by_map(s.pencil, values);
  const Membership m = curve_membership(adjusted, s.emb, cplx(0.45, 0.55));
  EXPECT_LT(m.relative_det, 1e-12);
  EXPECT_EQ(m.kernel_dim, 2);
  values[0] = CMat::Zero(2, 2);
  EXPECT_THROW(adjust_gamma_by_map(s.pencil, values), Error);
  values.pop_back();
  EXPECT_THROW(adjust_gamma_by_map(s.pencil, values), Error);
}

TEST(Detrep, LineSectionBlockIsInvertible) {
  const PencilCase s(1);
  EXPECT_LT(line_section_condition(*s.kernel, s.emb, cplx(0.2, 0.1), cplx(0.5, 0.6)), 1e10);
}

TEST(Detrep, JsonRoundTrip) {
  const PencilCase s(2);
  const PencilRep back = pencil_from_json(pencil_to_json(s.pencil));
  EXPECT_EQ(back.r, 2);
  EXPECT_EQ(back.m, 3);
  EXPECT_EQ(back.gamma, s.pencil.gamma);
  EXPECT_EQ(back.sigma2, s.pencil.sigma2);
}

}  // namespace
}  // namespace zpole
