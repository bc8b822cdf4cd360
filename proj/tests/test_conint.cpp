#include <cmath>

#include <gtest/gtest.h>

#include "zpole/conint.hpp"
#include "zpole/fixtures.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

struct Coupled {
  std::shared_ptr<const Torus> torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  fixtures::CoupledFixture fx = fixtures::coupled_rank2_fixture(torus);
  EmbeddingPair emb = fixtures::default_embedding(torus);
  PencilRep tilde_pencil = build_pencil(*fx.tilde, emb);
  ConintData data = convert_absint_to_conint(fx.data, fx.tilde, emb, tilde_pencil);
};

const Eigen::Vector2cd kXiA(1.0, 0.0);
const Eigen::Vector2cd kXiB(cplx(0.4, 0.2), cplx(-0.7, 0.9));

TEST(Conint, GammaMatchesAbstractGamma) {
  const Coupled c;
  EXPECT_LT(check_gamma_equality(c.fx.data, *c.fx.tilde, c.data, kXiA), 1e-12);
  EXPECT_LT(check_gamma_equality(c.fx.data, *c.fx.tilde, c.data, kXiB), 1e-12);
  EXPECT_LT(relative_residual(build_gamma0(c.data, kXiA), build_gamma0(c.data, kXiB)), 1e-12);
}

TEST(Conint, UpdatedPencilIsAdjustedInputPencil) {
  const Coupled c;
  const ConintSolution sol = solve_conint(c.data, kXiA);
  std::vector<CMat> boundary;
  for (cplx x : c.emb.poles()) boundary.push_back(c.fx.map(x));
  const PencilRep expect = adjust_gamma_by_map(build_pencil(*c.fx.chi, c.emb), boundary);
  EXPECT_LT(relative_residual(sol.pencil().gamma, expect.gamma), 1e-12);
  EXPECT_LT(relative_residual(sol.pencil().gamma, solve_conint(c.data, kXiB).pencil().gamma), 1e-12);
}

TEST(Conint, IntertwinesAndMapsKernels) {
  const Coupled c;
  const ConintSolution sol = solve_conint(c.data, kXiB);
  const NormalizedSections in(c.fx.chi, c.emb), out(c.fx.tilde, c.emb);
  for (cplx p : {cplx(0.05, 0.4), cplx(0.62, 0.12), cplx(0.9, 0.7)}) {
    EXPECT_LT(check_intertwining(sol, c.fx.map, in, out, c.fx.special, p), 1e-12);
    const Eigen::Vector2cd z = c.emb.values(p);
    EXPECT_LT(kernel_mapping_residual(sol, c.tilde_pencil, z(0), z(1)), 1e-12);
  }
  EXPECT_THROW(check_intertwining(sol, c.fx.map, in, out, c.fx.special, c.fx.special[0]), Error);
}

TEST(Conint, FactorsCarryReferencePencilToUpdatedPencil) {
  const Coupled c;
  const ConintSolution sol = solve_conint(c.data, kXiA);
  for (const auto& [z1, z2] : {std::pair<cplx, cplx>{cplx(1.3, -0.4), cplx(0.2, 2.1)},
                              std::pair<cplx, cplx>{cplx(-2.0, 0.5), cplx(3.1, -1.0)}}) {
    const CMat moved = sol.S_left_inverse(z1, z2) * c.tilde_pencil.at(z1, z2) * sol.S(z1, z2);
    EXPECT_LT(relative_residual(moved, sol.pencil().at(z1, z2)), 1e-12);
  }
}

TEST(Conint, CouplingNumbersRecovered) {
  const Coupled c;
  const ConintSolution a = solve_conint(c.data, kXiA), b = solve_conint(c.data, kXiB);
  for (const auto& cp : c.data.couplings) {
    const cplx va = coupling_condition_value(a, c.data, c.emb, cp.zero, cp.pole, cp.alpha, cp.beta);
    const cplx vb = coupling_condition_value(b, c.data, c.emb, cp.zero, cp.pole, cp.alpha, cp.beta);
    EXPECT_LT(std::abs(va - cp.rho) / std::max(1.0, std::abs(cp.rho)), 1e-8);
    EXPECT_LT(std::abs(va - vb) / std::max(1.0, std::abs(va)), 1e-8);
    // linear response to a shifted coupling number
    const double shifted = check_coupling_condition(a, c.data, c.emb, cp.zero, cp.pole, cp.alpha, cp.beta,
                                              cp.rho + 0.01 * std::max(1.0, std::abs(cp.rho)));
    EXPECT_NEAR(shifted, 0.01, 2e-4);
  }
  EXPECT_THROW(coupling_condition_value(a, c.data, c.emb, 1, 1, 0, 0), Error);
}

TEST(Conint, ConsequenceIdentities) {
  const Coupled c;
  for (cplx p : {cplx(0.05, 0.4), cplx(0.62, 0.12)}) {
    const ConsequenceResiduals r = consequence_residuals(c.fx.data, *c.fx.tilde, c.emb, p, kXiB);
    EXPECT_LT(r.first, 1e-12);
    EXPECT_LT(r.second, 1e-12);
  }
}

TEST(Conint, Rejections) {
  const Coupled c;
  ConintData wide = c.data;
  wide.poles.pop_back();
  wide.couplings.pop_back();
  try {
    solve_conint(wide, kXiA);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSquare);
  }
  InterpolationData clash = c.fx.data;
  clash.poles[0].u = {CVec(CVec::Unit(2, 0) + 0.5 * CVec::Unit(2, 1))};
  try {
    solve_conint(convert_absint_to_conint(clash, c.fx.tilde, c.emb, c.tilde_pencil), kXiA);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZPViolated);
  }
  InterpolationData on_pole = c.fx.data;
  on_pole.zeros[1].point = c.emb.poles()[2];
  EXPECT_THROW(convert_absint_to_conint(on_pole, c.fx.tilde, c.emb, c.tilde_pencil), Error);
}

}  // namespace
}  // namespace zpole
