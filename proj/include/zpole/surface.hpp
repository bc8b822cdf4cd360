#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zpole/theta.hpp"

namespace zpole {

enum class SurfaceKind { Genus0, Genus1Torus, DataBundle };

// Genus-1 surface C / (Z + tau Z). The coordinate z is global, so points are
// complex numbers and half-differentials are plain functions in the frame
// sqrt(dz).
class Torus {
 public:
  explicit Torus(cplx tau, ThetaConfig cfg = {});

  cplx tau() const { return tau_; }
  const ThetaEngine& engine() const { return engine_; }

  cplx abel_jacobi(cplx p) const { return p; }
  // Real coordinates (s, t) with w = s * tau + t.
  std::pair<double, double> lattice_coords(cplx w) const;
  // Representative with lattice coordinates in [0, 1).
  cplx reduce(cplx p) const;
  // Distance from w to the nearest lattice point.
  double lattice_defect(cplx w) const;
  bool same_point(cplx p, cplx q, double tol = 1e-12) const;

  // theta[a;b](w) and its derivative in w.
  cplx theta_char(const Characteristic& ch, cplx w) const;
  cplx theta_char_derivative(const Characteristic& ch, cplx w) const;
  cplx plain_theta(cplx w) const;
  cplx plain_theta_derivative(cplx w) const;

  // Odd half-period characteristic [1/2; 1/2] and its log-derivative.
  cplx odd_theta(cplx w) const { return theta_char(Characteristic::half_odd(), w); }
  cplx odd_log_derivative(cplx w) const;
  cplx odd_theta_prime_zero() const { return odd_prime_zero_; }

  cplx prime_form(cplx p, cplx q) const;

  // Flat line bundle test: |theta[a;b](0)| > 1e-10.
  bool nondegenerate(const Characteristic& ch) const;

 private:
  cplx tau_;
  ThetaEngine engine_;
  cplx odd_prime_zero_;
};

// Geometry supplied as tables for genus >= 2.
class SurfaceDataBundle {
 public:
  struct Point {
    std::string label;
    CVec phi;
  };

  SurfaceDataBundle(PeriodMatrix period, std::vector<Point> points, CMat prime_form,
                    std::vector<CVec> differentials, ThetaConfig cfg = {});
  static SurfaceDataBundle from_json(const nlohmann::json& j);

  int genus() const { return engine_.genus(); }
  const ThetaEngine& engine() const { return engine_; }
  const CVec& abel_jacobi(const std::string& label) const;
  cplx prime_form(const std::string& p, const std::string& q) const;
  const CVec& differentials(const std::string& label) const;

 private:
  int index(const std::string& label) const;

  ThetaEngine engine_;
  std::vector<Point> points_;
  CMat prime_;
  std::vector<CVec> differentials_;
};

struct SurfaceDescriptor {
  SurfaceKind kind = SurfaceKind::Genus1Torus;
  std::shared_ptr<const Torus> torus;
  std::shared_ptr<const SurfaceDataBundle> bundle;
};

// Two elliptic functions with simple poles at x1, x2, x3:
//   f1(z) = L(z - x1) - L(z - x2),  f2(z) = L(z - x1) - L(z - x3),
// with L the log-derivative of the odd theta. Near x^i,
//   f_k = -c(i,k) / t - d(i,k) + O(t).
class EmbeddingPair {
 public:
  EmbeddingPair(std::shared_ptr<const Torus> torus, std::array<cplx, 3> poles);

  const Torus& torus() const { return *torus_; }
  std::shared_ptr<const Torus> torus_ptr() const { return torus_; }
  const std::array<cplx, 3>& poles() const { return poles_; }
  int m() const { return 3; }
  const CMat& residue_table() const { return c_; }
  const CMat& const_table() const { return d_; }

  cplx value(int k, cplx p) const;  // k in {0, 1}
  Eigen::Vector2cd values(cplx p) const;
  Eigen::Vector2cd first_derivatives(cplx p) const;
  Eigen::Vector2cd second_derivatives(cplx p) const;
  bool is_pole(cplx p, double tol = 1e-9) const;

 private:
  std::shared_ptr<const Torus> torus_;
  std::array<cplx, 3> poles_;
  CMat c_;
  CMat d_;
};

EmbeddingPair build_embedding_functions(std::shared_ptr<const Torus> torus, cplx x1,
                                        cplx x2, cplx x3);

}  // namespace zpole
