#pragma once

#include <vector>

#include "zpole/common.hpp"

namespace zpole {

class PeriodMatrix {
 public:
  // Validates symmetry and positive definiteness of the imaginary part.
  explicit PeriodMatrix(CMat omega);
  static PeriodMatrix genus1(cplx tau);

  int genus() const { return static_cast<int>(omega_.rows()); }
  const CMat& omega() const { return omega_; }

 private:
  CMat omega_;
};

struct Characteristic {
  RVec a;
  RVec b;

  static Characteristic zero(int g);
  static Characteristic half_odd();  // [1/2; 1/2] at genus 1
  static Characteristic scalar(double a, double b);
  Characteristic dual() const { return {-a, -b}; }
  // Jacobian point Omega*a + b.
  CVec point(const PeriodMatrix& period) const;
};

struct ReducedCharacteristic {
  Characteristic reduced;  // entries in [0, 1)
  Eigen::VectorXi shift_a;  // a = reduced.a + shift_a
  Eigen::VectorXi shift_b;
};

// Explicit reduction to the unit cube; never applied by the evaluators.
ReducedCharacteristic reduce_characteristic(const Characteristic& ch);

struct ThetaConfig {
  double target_abs_error = 1e-12;
  int max_lattice_radius = 60;

  void validate() const;
};

struct ThetaValue {
  cplx value;
  CVec gradient;
};

// Lattice-sum evaluator bound to one period matrix. The truncation error of
// each sum is below target_abs_error times the Gaussian envelope
// exp(pi * y^T (Im Omega)^-1 y), y = Im(argument); for real arguments that is
// an absolute bound.
class ThetaEngine {
 public:
  explicit ThetaEngine(PeriodMatrix period, ThetaConfig cfg = {});

  const PeriodMatrix& period() const { return period_; }
  const ThetaConfig& config() const { return cfg_; }
  int genus() const { return period_.genus(); }

  cplx theta(const CVec& z) const;
  cplx theta_char(const Characteristic& ch, const CVec& lam) const;
  // Same quantity assembled from the shifted plain theta.
  cplx theta_char_by_reduction(const Characteristic& ch, const CVec& lam) const;
  CVec gradient(const Characteristic& ch, const CVec& lam) const;
  ThetaValue value_and_gradient(const Characteristic& ch, const CVec& lam) const;

  double ellipsoid_radius() const { return radius_; }
  double shortest_vector() const { return rho_; }

 private:
  ThetaValue sum(const Characteristic& ch, const CVec& lam, bool want_gradient) const;
  double tail_bound(double radius, int power) const;

  PeriodMatrix period_;
  ThetaConfig cfg_;
  Eigen::MatrixXd y_;       // Im Omega
  Eigen::MatrixXd y_inv_;
  Eigen::MatrixXd chol_;    // lower L with L L^T = pi Im Omega
  double rho_ = 0;          // shortest vector of the lattice L^T Z^g
  double inv_norm_ = 0;     // operator norm of L^-T
  double radius_ = 0;
};

cplx riemann_theta(const CVec& z, const PeriodMatrix& omega, const ThetaConfig& cfg = {});
cplx theta_with_char(const Characteristic& ch, const CVec& lam,
                     const PeriodMatrix& omega, const ThetaConfig& cfg = {});
CVec theta_gradient(const Characteristic& ch, const CVec& lam,
                    const PeriodMatrix& omega, const ThetaConfig& cfg = {});

}  // namespace zpole
