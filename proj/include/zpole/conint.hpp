#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "zpole/absint.hpp"
#include "zpole/detrep.hpp"

namespace zpole {

// A point of the image curve. The surface point, when known, decides
// coincidences (two surface points may share affine coordinates at a node).
struct CurvePoint {
  cplx z1;
  cplx z2;
  std::optional<cplx> surface;
};

struct ConintData {
  struct Zero {
    CurvePoint point;
    std::vector<CRow> psi;  // left kernel rows at the point
  };
  struct Pole {
    CurvePoint point;
    std::vector<CVec> phi;  // kernel vectors at the point
  };

  PencilRep reference;  // sigma1, sigma2 and the output gamma
  std::shared_ptr<const Torus> torus;  // optional, for lattice point equality
  std::vector<Zero> zeros;
  std::vector<Pole> poles;
  std::vector<InterpolationData::Coupling> couplings;

  bool coincide(int zero, int pole) const;
  cplx coupling(int zero, int pole, int alpha, int beta) const;
  int zero_vector_count() const;
  int pole_vector_count() const;
  // Kernel membership (1e-8, relative) and per-point independence.
  void validate() const;
};

struct BlockMatrices {
  CMat A1, A2;  // pole coordinates, N_inf x N_inf
  CMat Z1, Z2;  // zero coordinates, N_0 x N_0
  CMat phi;     // M x N_inf
  CMat psi;     // N_0 x M
};

BlockMatrices block_matrices(const ConintData& data);

// Throws XiDenominatorZero.
CMat build_gamma0(const ConintData& data, const Eigen::Vector2cd& xi);

class ConintSolution {
 public:
  ConintSolution(const ConintData& data, const Eigen::Vector2cd& xi);

  // New pencil with the updated gamma.
  const PencilRep& pencil() const { return pencil_; }
  const CMat& gamma0() const { return gamma0_; }
  const Eigen::Vector2cd& xi() const { return xi_; }

  // Full matrix expressions; only meaningful on the kernel (resp. left
  // kernel) of the new pencil at (z1, z2).
  CMat S(cplx z1, cplx z2) const;
  CMat S_left_inverse(cplx z1, cplx z2) const;
  // S applied after projecting v onto the numerical kernel of the new pencil.
  CVec apply_S(cplx z1, cplx z2, const CVec& v) const;

 private:
  ConintData data_;
  Eigen::Vector2cd xi_;
  BlockMatrices blocks_;
  CMat gamma0_;
  CMat gamma0_inv_;
  PencilRep pencil_;
};

// Throws SingularGamma0, ZPViolated, NotSquare.
ConintSolution solve_conint(const ConintData& data, const Eigen::Vector2cd& xi);

// phi = u~x(mu) u, psi = x^T u~x_left(lambda), couplings copied.
// Throws PoleCollision when an embedding pole meets a data point.
ConintData convert_absint_to_conint(const InterpolationData& data, KernelPtr tilde,
                                    const EmbeddingPair& embedding,
                                    const PencilRep& tilde_pencil);

// Max entrywise |Gamma - Gamma0| relative to max |Gamma|.
double check_gamma_equality(const InterpolationData& data, const KernelOracle& tilde,
                            const ConintData& converted, const Eigen::Vector2cd& xi);

// Relative residual of S(p) diag(T(x_i)) u'x(p) = u~x(p) T(p), with u'x the
// normalized sections of the input bundle. Throws PointOnExcludedSet.
double check_intertwining(const ConintSolution& solution, const MatrixFunction& map,
                          const NormalizedSections& input_sections,
                          const NormalizedSections& output_sections,
                          const std::vector<cplx>& excluded, cplx p);

// |U~(z) S(z) V| / (|U~| |S V|), V a kernel basis of the new pencil at z.
double kernel_mapping_residual(const ConintSolution& solution, const PencilRep& reference,
                               cplx z1, cplx z2);

// Left side of the coupling condition at a coincident pair, with the
// surface coordinate as local parameter. Throws NoCoincidence.
cplx coupling_condition_value(const ConintSolution& solution, const ConintData& data,
                              const EmbeddingPair& embedding, int zero, int pole, int alpha,
                              int beta);

// |value - rho| / max(1, |rho|).
double check_coupling_condition(const ConintSolution& solution, const ConintData& data,
                          const EmbeddingPair& embedding, int zero, int pole, int alpha,
                          int beta, cplx rho);

struct ConsequenceResiduals {
  double first = 0;   // sum_j w_j K^lambda(x_j) K~(x_j, p) vs diag(w.(lambda(p) - lambda_i)) K^lambda(p)
  double second = 0;  // sum_j w_j K^lambda(x_j) K_mu(x_j) vs diag(w.lambda_i) Gamma - Gamma diag(w.mu_j)
};

ConsequenceResiduals consequence_residuals(const InterpolationData& data,
                                           const KernelOracle& tilde,
                                           const EmbeddingPair& embedding, cplx p,
                                           const Eigen::Vector2cd& xi);

}  // namespace zpole
