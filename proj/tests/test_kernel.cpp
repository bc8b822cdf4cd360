#include <cmath>

#include <gtest/gtest.h>

#include "zpole/fixtures.hpp"
#include "zpole/kernel.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

TEST(Kernel, Genus0IsCauchyKernel) {
  const KernelPtr k = genus0_kernel(2);
  const cplx p(0.3, 0.1), q(-1.0, 0.4);
  EXPECT_LT(relative_residual((*k)(p, q), CMat(CMat::Identity(2, 2) / (p - q))), 1e-15);
  EXPECT_LT(relative_residual((*k->dual())(p, q), CMat(-(*k)(q, p))), 1e-15);
}

TEST(Kernel, LineKernelResidueAndConnection) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const KernelPtr k = line_kernel(torus, Characteristic::scalar(0.2, 0.35));
  const ConnectionCoefficients cc = extract_laurent_coeffs(*k, cplx(0.4, 0.3));
  EXPECT_LT(std::abs(cc.residue(0, 0) - 1.0), 1e-8);
  EXPECT_LT(std::abs(cc.a(0, 0) + cc.a_ell(0, 0)), 1e-7);
  EXPECT_LT(std::abs(cc.a(0, 0) - k->closed_form_connection()(0, 0)), 1e-6);
  const auto* line = dynamic_cast<const LineKernel*>(k.get());
  EXPECT_LT(std::abs(line->connection_from_point() - k->closed_form_connection()(0, 0)), 1e-10);
}

TEST(Kernel, LineKernelTransformsAlongPeriods) {
  // moving p by 1 multiplies by a unimodular constant; the kernel is a
  // section, so the ratio does not depend on q
  auto torus = std::make_shared<const Torus>(cplx(0.1, 1.1));
  const KernelPtr k = line_kernel(torus, Characteristic::scalar(0.3, 0.6));
  const cplx p(0.2, 0.25);
  const cplx r1 = (*k)(p + 1.0, 0.4)(0, 0) / (*k)(p, 0.4)(0, 0);
  const cplx r2 = (*k)(p + 1.0, cplx(0.7, 0.5))(0, 0) / (*k)(p, cplx(0.7, 0.5))(0, 0);
  EXPECT_LT(std::abs(r1 - r2), 1e-12);
  EXPECT_NEAR(std::abs(r1), 1.0, 1e-12);
}

TEST(Kernel, InverseKernelPoleIsAZero) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const KernelPtr k = line_kernel(torus, Characteristic::scalar(0.2, 0.35));
  const cplx q(0.15, 0.2);
  for (cplx p : k->inverse_kernel_poles(q)) EXPECT_LT(std::abs((*k)(p, q)(0, 0)), 1e-12);
}

TEST(Kernel, DirectSumIsBlockDiagonal) {
  auto torus = std::make_shared<const Torus>(cplx(0, 1));
  const KernelPtr a = line_kernel(torus, Characteristic::scalar(0.2, 0.35));
  const KernelPtr b = line_kernel(torus, Characteristic::scalar(0.6, 0.1));
  const KernelPtr s = direct_sum_kernel({a, b});
  const cplx p(0.1, 0.2), q(0.6, 0.7);
  const CMat m = (*s)(p, q);
  EXPECT_EQ(s->rank(), 2);
  EXPECT_EQ(m(0, 1), cplx(0));
  EXPECT_EQ(m(1, 0), cplx(0));
  EXPECT_EQ(m(1, 1), (*b)(p, q)(0, 0));
  auto other = std::make_shared<const Torus>(cplx(0, 2));
  EXPECT_THROW(direct_sum_kernel({a, line_kernel(other, Characteristic::scalar(0.2, 0.35))}), Error);
}

TEST(Kernel, DegenerateBundleRejected) {
  auto torus = std::make_shared<const Torus>(cplx(0, 1));
  EXPECT_THROW(line_kernel(torus, Characteristic::half_odd()), Error);
}

TEST(Kernel, CollectionFormula) {
  auto torus = std::make_shared<const Torus>(cplx(0.3, 0.8));
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const KernelPtr k = direct_sum_kernel({line_kernel(torus, Characteristic::scalar(0.2, 0.35)),
                                         line_kernel(torus, Characteristic::scalar(0.7, 0.4))});
  const Eigen::Vector2cd xi(cplx(0.3, 0.2), cplx(-1.1, 0.5));
  EXPECT_LT(collection_residual(*k, emb, cplx(0.2, 0.6), cplx(0.8, 0.1), xi), 1e-12);
  EXPECT_LT(collection_residual(*k, emb, cplx(0.2, 0.6), cplx(0.2, 0.6), xi), 1e-10);
  EXPECT_THROW(collection_residual(*k, emb, emb.poles()[1], 0.5, xi), Error);
}

TEST(Kernel, Genus0KernelHasNoConnection) {
  const KernelPtr k = genus0_kernel(1);
  const ConnectionCoefficients cc = extract_laurent_coeffs(*k, cplx(0.5, 0.5));
  EXPECT_LT(std::abs(cc.residue(0, 0) - 1.0), 1e-10);
  EXPECT_LT(std::abs(cc.a(0, 0)), 1e-10);
}

}  // namespace
}  // namespace zpole
