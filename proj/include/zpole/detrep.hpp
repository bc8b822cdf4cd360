#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zpole/kernel.hpp"

namespace zpole {

// z1 * sigma2 - z2 * sigma1 + gamma, of size M = m * r.
struct PencilRep {
  int m = 0;
  int r = 0;
  CMat sigma1;
  CMat sigma2;
  CMat gamma;

  int size() const { return static_cast<int>(gamma.rows()); }
  CMat at(cplx z1, cplx z2) const;
  // Pencil evaluated at the image of a surface point.
  CMat at_point(const EmbeddingPair& embedding, cplx p) const;
};

// Throws SurfaceMismatch if the kernel and the embedding live on different tori.
PencilRep build_pencil(const KernelOracle& oracle, const EmbeddingPair& embedding);

// u_cross(p) stacks K(x_i, p) (M x r); u_cross_left(p) = -[K(p, x_1) ... K(p, x_m)].
class NormalizedSections {
 public:
  NormalizedSections(KernelPtr oracle, EmbeddingPair embedding);
  CMat cross(cplx p) const;
  CMat cross_left(cplx p) const;
  const KernelOracle& oracle() const { return *oracle_; }
  const EmbeddingPair& embedding() const { return embedding_; }

 private:
  KernelPtr oracle_;
  EmbeddingPair embedding_;
};

NormalizedSections normalized_sections(KernelPtr oracle, const EmbeddingPair& embedding);

struct IdentityResiduals {
  double right = 0;    // U(lambda(p)) u_cross(p)
  double left = 0;     // u_cross_left(p) U(lambda(p))
  double pairing = 0;  // u_cross_left (xi.sigma) u_cross / (xi.lambda') vs I
};

// Throws PointOnPoleSet.
IdentityResiduals check_kernel_identities(const PencilRep& pencil,
                                          const NormalizedSections& sections, cplx p,
                                          const Eigen::Vector2cd& xi);

struct Membership {
  double relative_det = 0;  // geometric mean of the r smallest singular values over s_max
  int kernel_dim = 0;       // size of the tail past a singular-value gap >= 1e6
  double gap_ratio = 0;
};

Membership pencil_membership(const PencilRep& pencil, cplx z1, cplx z2);
// Throws PointOnPoleSet.
Membership curve_membership(const PencilRep& pencil, const EmbeddingPair& embedding, cplx p);

// gamma_ij -> T(x_i) gamma_ij T(x_j)^-1. Throws SingularBoundaryValue.
PencilRep adjust_gamma_by_map(const PencilRep& pencil, const std::vector<CMat>& boundary_values);

// Condition number of the block matrix [K(x_i, y_j)] for the line section
// y_1, y_2, y_3 = x_1 + x_2 + x_3 - y_1 - y_2.
double line_section_condition(const KernelOracle& oracle, const EmbeddingPair& embedding,
                              cplx y1, cplx y2);

nlohmann::json pencil_to_json(const PencilRep& pencil);
PencilRep pencil_from_json(const nlohmann::json& j);

}  // namespace zpole
