#pragma once

#include <functional>
#include <vector>

#include "zpole/common.hpp"

namespace zpole {

// Taylor/Laurent coefficients of f around `center` from equispaced samples on
// a circle. Entry k of the result is the coefficient of t^(kmin + k).
std::vector<CMat> circle_coefficients(const std::function<CMat(cplx)>& f,
                                      cplx center, double radius, int kmin,
                                      int kmax, int nodes = 32);

struct LaurentResult {
  CMat residue;
  CMat constant;
  CMat second_order;  // coefficient of t^-2, ~0 for a simple pole
  double spread = 0;  // disagreement between the two radii
};

// Coefficients of t^-1, t^0, t^-2 of f at center, estimated on two circles
// (radius and radius/2) and extrapolated.
LaurentResult laurent_matrix(const std::function<CMat(cplx)>& f, cplx center,
                             double radius = 1e-2);

struct ScalarLaurent {
  cplx residue;
  cplx constant;
};

// Scalar simple-pole expansion. Throws HigherOrderPole when the t^-2 part is
// not negligible.
ScalarLaurent laurent_coeffs(const std::function<cplx(cplx)>& f, cplx center,
                             double radius = 1e-2);

// Central differences at h and h/2 combined by one Richardson step.
cplx derivative(const std::function<cplx(cplx)>& f, cplx z, double h = 1e-3);
cplx second_derivative(const std::function<cplx(cplx)>& f, cplx z,
                       double h = 1e-3);

struct SvdSummary {
  RVec singular;  // descending
  double condition = 0;
};

SvdSummary svd_summary(const CMat& m);

// Orthonormal basis of the numerical kernel: the trailing `dim` right
// singular vectors.
CMat right_kernel(const CMat& m, int dim);
// Rows spanning the numerical left kernel.
CMat left_kernel(const CMat& m, int dim);

// Relative distance of the columns of r from span(basis); 1 when the
// numerical rank of r (1e-8 cutoff) differs from the basis size.
double span_gap(const CMat& r, const CMat& basis);

double relative_residual(const CMat& lhs, const CMat& rhs);
double relative_residual(cplx lhs, cplx rhs);

}  // namespace zpole
