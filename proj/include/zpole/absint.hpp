#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zpole/kernel.hpp"

namespace zpole {

using MatrixFunction = std::function<CMat(cplx)>;

struct InterpolationData {
  struct Zero {
    cplx point;
    std::vector<CVec> x;  // null vectors in the dual fiber
  };
  struct Pole {
    cplx point;
    std::vector<CVec> u;
  };
  struct Coupling {
    int zero = 0;
    int pole = 0;
    int alpha = 0;
    int beta = 0;
    cplx rho;
  };

  int rank = 1;
  std::vector<Zero> zeros;
  std::vector<Pole> poles;
  std::vector<Coupling> couplings;

  int zero_vector_count() const;
  int pole_vector_count() const;
  // Throws InvalidProblem on repeated points, dependent vectors, a
  // compatibility violation or a coincidence without coupling numbers.
  void validate(const KernelOracle& oracle) const;
  cplx coupling(int zero, int pole, int alpha, int beta) const;
};

struct GammaMatrix {
  CMat matrix;
  bool square = false;
  double condition = 0;
};

// Gamma_{ij,ab} = -x^T K~(lambda_i, mu_j) u, or -rho on coincidence.
GammaMatrix build_gamma(const InterpolationData& data, const KernelOracle& tilde);

// T(p) = [K~(p,q) + K_mu(p) Gamma^-1 K^lambda(q)] Q K(p,q)^-1
class BundleMap {
 public:
  BundleMap(InterpolationData data, cplx q, CMat Q, KernelPtr chi, KernelPtr tilde);

  CMat operator()(cplx p) const;
  // T^-1(p) = K(q,p)^-1 Q^-1 [K~(q,p) + K_mu(q) Gamma^-1 K^lambda(p)]
  CMat inverse(cplx p) const;
  CMat bracket(cplx p) const;

  cplx base_point() const { return q_; }
  const CMat& base_value() const { return Q_; }
  const GammaMatrix& gamma() const { return gamma_; }
  const InterpolationData& data() const { return data_; }
  const KernelPtr& chi() const { return chi_; }
  const KernelPtr& tilde() const { return tilde_; }

 private:
  CMat pole_block(cplx p) const;  // K_mu(p), r x N_inf
  CMat zero_block(cplx p) const;  // K^lambda(p), N_0 x r
  CMat safe_inverse(const CMat& k, cplx p) const;

  InterpolationData data_;
  cplx q_;
  CMat Q_;
  CMat Q_inv_;
  KernelPtr chi_;
  KernelPtr tilde_;
  GammaMatrix gamma_;
  Eigen::FullPivLU<CMat> lu_;
  CMat zero_block_q_;
  CMat pole_block_q_;
};

BundleMap build_solution(const InterpolationData& data, cplx q, const CMat& Q, KernelPtr chi,
                         KernelPtr tilde);
// Evaluator of the inverse map.
MatrixFunction build_inverse(const BundleMap& map);

struct ResidueCheck {
  cplx pole;
  double residual = 0;
};

// At each pole of K(chi; ., q)^-1 checks [K~ + K_mu Gamma^-1 K^lambda] Q Res = 0.
std::vector<ResidueCheck> residue_condition_check(const InterpolationData& data, cplx q,
                                                  const CMat& Q, KernelPtr chi, KernelPtr tilde);

struct SolutionReport {
  std::vector<double> pole_gaps;       // residue of T outside span(u), per pole
  std::vector<double> zero_gaps;       // residue of T^-1 outside span(x), per zero
  std::vector<double> coupling_errors; // |lhs + rho| / (1 + |rho|), per coupling
  bool pass(double gap_tol = 1e-6, double coupling_tol = 1e-5) const;
};

SolutionReport verify_solution(const MatrixFunction& map, const MatrixFunction& inverse,
                               const InterpolationData& data, const KernelOracle& tilde);

// Scalar (line bundle) case on the torus or at genus 0.
struct Divisor {
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
};

struct NecessityCheck {
  double defect = 0;  // lattice distance of z~ - z - (sum zeros - sum poles)
  double a = 0;       // sum zeros - sum poles = tau a + b
  double b = 0;
};

NecessityCheck check_necessity(const Torus& torus, const Characteristic& chi,
                               const Characteristic& tilde, const Divisor& divisor);

// Product of prime-form ratios times exp(-2 pi i a (p - q)) Q.
class ScalarMultiplicative {
 public:
  // Throws NecessityViolated (tolerance 1e-9) or CountMismatch.
  ScalarMultiplicative(std::shared_ptr<const Torus> torus, Divisor divisor,
                       const Characteristic& chi, const Characteristic& tilde, cplx q, cplx Q);
  cplx operator()(cplx p) const;
  const NecessityCheck& necessity() const { return necessity_; }

 private:
  std::shared_ptr<const Torus> torus_;
  Divisor divisor_;
  cplx q_;
  cplx Q_;
  NecessityCheck necessity_;
};

class ScalarPartialFraction {
 public:
  ScalarPartialFraction(std::shared_ptr<const Torus> torus, const Divisor& divisor,
                        const Characteristic& chi, const Characteristic& tilde, cplx q, cplx Q);
  cplx operator()(cplx p) const { return map_(p)(0, 0); }
  const BundleMap& map() const { return map_; }

 private:
  BundleMap map_;
};

InterpolationData scalar_data(const Divisor& divisor);

// One zero/pole pair assembled from plain theta values and prime forms,
// z the Jacobian point of the input bundle.
cplx special_partial_fraction(const Torus& torus, cplx z, cplx lam, cplx mu, cplx q, cplx Q,
                              cplx p);

// Relative residual of the three-term theta identity on the torus.
double fay_residual(const Torus& torus, cplx z, cplx p, cplx q, cplx lam, cplx mu);
class SurfaceDataBundle;
double fay_residual(const SurfaceDataBundle& bundle, const CVec& z, const std::string& p,
                    const std::string& q, const std::string& lam, const std::string& mu);

// max over samples of the relative residual of
//   T(p) K(p,q) T(q)^-1 = K~(p,q) - K~(p,mu) u x^T K~(lam,q) / (x^T K~(lam,mu) u)
double matrix_fay_residual(const MatrixFunction& map, const KernelOracle& chi,
                           const KernelOracle& tilde, cplx lam, cplx mu, const CVec& x,
                           const CVec& u, cplx q, const std::vector<cplx>& samples);

struct FullRankSolution {
  CMat gamma;
  MatrixFunction map;
};

// Zeros and poles of full rank (standard basis vectors); direct sums of line
// bundles on the torus. Throws NotFullRank.
FullRankSolution full_rank_multiplicative(const InterpolationData& data, KernelPtr chi,
                                          KernelPtr tilde, cplx q, const CMat& Q);

}  // namespace zpole
