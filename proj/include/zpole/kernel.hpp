#pragma once

#include <memory>
#include <vector>

#include "zpole/surface.hpp"

namespace zpole {

class KernelOracle;
using KernelPtr = std::shared_ptr<const KernelOracle>;

// Cauchy kernel of a flat bundle, evaluated in the global frame
// (coordinate z at genus 0, sqrt(dz) on the torus).
class KernelOracle {
 public:
  virtual ~KernelOracle() = default;

  virtual int rank() const = 0;
  virtual CMat operator()(cplx p, cplx q) const = 0;
  // nullptr at genus 0.
  virtual const Torus* torus() const = 0;
  // Kernel of the dual bundle.
  virtual KernelPtr dual() const = 0;
  // Frame-relative connection matrix A, constant in p for these kernels.
  virtual CMat closed_form_connection() const = 0;
  // Points p where K(p, q) is singular (poles of the inverse kernel).
  virtual std::vector<cplx> inverse_kernel_poles(cplx q) const = 0;

  int genus() const { return torus() ? 1 : 0; }
  bool same_point(cplx p, cplx q, double tol = 1e-12) const;
  bool same_surface(const KernelOracle& other) const;
};

class Genus0Kernel final : public KernelOracle {
 public:
  explicit Genus0Kernel(int rank);
  int rank() const override { return rank_; }
  CMat operator()(cplx p, cplx q) const override;
  const Torus* torus() const override { return nullptr; }
  KernelPtr dual() const override;
  CMat closed_form_connection() const override;
  std::vector<cplx> inverse_kernel_poles(cplx) const override { return {}; }

 private:
  int rank_;
};

// K(p, q) = theta[a;b](q - p) / (theta[a;b](0) E(q, p)).
class LineKernel final : public KernelOracle {
 public:
  // Throws DegenerateBundle when |theta[a;b](0)| <= 1e-10.
  LineKernel(std::shared_ptr<const Torus> torus, Characteristic chi);

  int rank() const override { return 1; }
  CMat operator()(cplx p, cplx q) const override;
  cplx scalar(cplx p, cplx q) const;
  const Torus* torus() const override { return torus_.get(); }
  KernelPtr dual() const override;
  // d/dw log theta[a;b](w) at w = 0.
  CMat closed_form_connection() const override;
  // 2 pi i a + theta'(z) / theta(z), z = tau a + b.
  cplx connection_from_point() const;
  std::vector<cplx> inverse_kernel_poles(cplx q) const override;

  const Characteristic& characteristic() const { return chi_; }
  cplx jacobian_point() const;
  std::shared_ptr<const Torus> torus_ptr() const { return torus_; }

 private:
  std::shared_ptr<const Torus> torus_;
  Characteristic chi_;
  cplx theta_zero_;
};

class DirectSumKernel final : public KernelOracle {
 public:
  // Throws SurfaceMismatch if the summands live on different surfaces.
  explicit DirectSumKernel(std::vector<KernelPtr> parts);

  int rank() const override { return rank_; }
  CMat operator()(cplx p, cplx q) const override;
  const Torus* torus() const override { return parts_.front()->torus(); }
  KernelPtr dual() const override;
  CMat closed_form_connection() const override;
  std::vector<cplx> inverse_kernel_poles(cplx q) const override;
  const std::vector<KernelPtr>& parts() const { return parts_; }

 private:
  std::vector<KernelPtr> parts_;
  int rank_ = 0;
};

KernelPtr genus0_kernel(int rank);
KernelPtr line_kernel(std::shared_ptr<const Torus> torus, const Characteristic& chi);
KernelPtr direct_sum_kernel(std::vector<KernelPtr> parts);

struct ConnectionCoefficients {
  CMat a;          // coefficient of t(q)
  CMat a_ell;      // coefficient of t(p)
  CMat residue;    // limit of (t(p) - t(q)) K(p, q)
  double disagreement = 0;  // between the two stencil sizes
};

// Finite-difference fit of
//   (t(p) - t(q)) K(p, q) = I + A_ell t(p) + A t(q) + O(t^2)
// at h = 1e-3 and 1e-4 with one Richardson step. Throws ExtractionUnstable.
ConnectionCoefficients extract_laurent_coeffs(const KernelOracle& oracle, cplx p0);

// Relative residual of
//   sum_j (xi . c_j) K(p, x_j) K(x_j, q) = xi . (f(q) - f(p)) K(p, q)
// or, when p == q, of the limiting form with right side -(xi . f'(p)) I.
double collection_residual(const KernelOracle& oracle, const EmbeddingPair& embedding,
                           cplx p, cplx q, const Eigen::Vector2cd& xi);

}  // namespace zpole
