#include "zpole/kernel.hpp"

#include <cmath>

#include "zpole/numerics.hpp"

namespace zpole {

bool KernelOracle::same_point(cplx p, cplx q, double tol) const {
  if (const Torus* t = torus()) return t->same_point(p, q, tol);
  return std::abs(p - q) <= tol * std::max({1.0, std::abs(p), std::abs(q)});
}

bool KernelOracle::same_surface(const KernelOracle& other) const {
  const Torus* a = torus();
  const Torus* b = other.torus();
  if (!a || !b) return a == b;
  return a == b || (a->tau() == b->tau() &&
                    a->engine().config().target_abs_error ==
                        b->engine().config().target_abs_error);
}

Genus0Kernel::Genus0Kernel(int rank) : rank_(rank) {
  if (rank < 1) throw Error(ErrorCode::InputError, "kernel rank must be positive");
}

CMat Genus0Kernel::operator()(cplx p, cplx q) const {
  return CMat::Identity(rank_, rank_) / (p - q);
}

KernelPtr Genus0Kernel::dual() const { return std::make_shared<Genus0Kernel>(rank_); }

CMat Genus0Kernel::closed_form_connection() const { return CMat::Zero(rank_, rank_); }

LineKernel::LineKernel(std::shared_ptr<const Torus> torus, Characteristic chi)
    : torus_(std::move(torus)), chi_(std::move(chi)) {
  if (chi_.a.size() != 1 || chi_.b.size() != 1) {
    throw Error(ErrorCode::InputError, "line bundle on the torus needs scalar a, b");
  }
  theta_zero_ = torus_->theta_char(chi_, 0.0);
  if (!(std::abs(theta_zero_) > 1e-10)) {
    throw Error(ErrorCode::DegenerateBundle,
                "|theta[a;b](0)| = " + std::to_string(std::abs(theta_zero_)));
  }
}

cplx LineKernel::scalar(cplx p, cplx q) const {
  const cplx num = torus_->theta_char(chi_, q - p) * torus_->odd_theta_prime_zero();
  return num / (theta_zero_ * torus_->odd_theta(p - q));
}

CMat LineKernel::operator()(cplx p, cplx q) const {
  CMat k(1, 1);
  k(0, 0) = scalar(p, q);
  return k;
}

KernelPtr LineKernel::dual() const { return std::make_shared<LineKernel>(torus_, chi_.dual()); }

CMat LineKernel::closed_form_connection() const {
  CMat a(1, 1);
  a(0, 0) = torus_->theta_char_derivative(chi_, 0.0) / theta_zero_;
  return a;
}

cplx LineKernel::jacobian_point() const { return chi_.point(torus_->engine().period())(0); }

cplx LineKernel::connection_from_point() const {
  const cplx z = jacobian_point();
  return 2.0 * kPi * kI * chi_.a(0) + torus_->plain_theta_derivative(z) / torus_->plain_theta(z);
}

std::vector<cplx> LineKernel::inverse_kernel_poles(cplx q) const {
  // theta[a;b](q - p) vanishes where q - p + z is the odd half period.
  return {q + jacobian_point() - 0.5 * (1.0 + torus_->tau())};
}

DirectSumKernel::DirectSumKernel(std::vector<KernelPtr> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::InputError, "direct sum of nothing");
  for (const auto& part : parts_) {
    if (!part->same_surface(*parts_.front())) {
      throw Error(ErrorCode::SurfaceMismatch, "direct sum summands on different surfaces");
    }
    rank_ += part->rank();
  }
}

CMat DirectSumKernel::operator()(cplx p, cplx q) const {
  CMat k = CMat::Zero(rank_, rank_);
  int offset = 0;
  for (const auto& part : parts_) {
    const int r = part->rank();
    k.block(offset, offset, r, r) = (*part)(p, q);
    offset += r;
  }
  return k;
}

KernelPtr DirectSumKernel::dual() const {
  std::vector<KernelPtr> duals;
  for (const auto& part : parts_) duals.push_back(part->dual());
  return std::make_shared<DirectSumKernel>(duals);
}

CMat DirectSumKernel::closed_form_connection() const {
  CMat a = CMat::Zero(rank_, rank_);
  int offset = 0;
  for (const auto& part : parts_) {
    const int r = part->rank();
    a.block(offset, offset, r, r) = part->closed_form_connection();
    offset += r;
  }
  return a;
}

std::vector<cplx> DirectSumKernel::inverse_kernel_poles(cplx q) const {
  std::vector<cplx> out;
  for (const auto& part : parts_) {
    for (cplx p : part->inverse_kernel_poles(q)) {
      bool seen = false;
      for (cplx known : out) seen = seen || same_point(known, p, 1e-9);
      if (!seen) out.push_back(p);
    }
  }
  return out;
}

KernelPtr genus0_kernel(int rank) { return std::make_shared<Genus0Kernel>(rank); }

KernelPtr line_kernel(std::shared_ptr<const Torus> torus, const Characteristic& chi) {
  return std::make_shared<LineKernel>(std::move(torus), chi);
}

KernelPtr direct_sum_kernel(std::vector<KernelPtr> parts) {
  return std::make_shared<DirectSumKernel>(std::move(parts));
}

ConnectionCoefficients extract_laurent_coeffs(const KernelOracle& oracle, cplx p0) {
  auto scaled = [&](cplx s, cplx u) { return CMat((s - u) * oracle(p0 + s, p0 + u)); };
  struct Stencil {
    CMat a, a_ell, residue;
  };
  auto stencil = [&](double h) {
    const CMat fp = scaled(h, 0.0);
    const CMat fm = scaled(-h, 0.0);
    const CMat gp = scaled(0.0, h);
    const CMat gm = scaled(0.0, -h);
    return Stencil{(gp - gm) / (2 * h), (fp - fm) / (2 * h), (fp + fm) / 2.0};
  };
  constexpr double h1 = 1e-3;
  constexpr double h2 = 1e-4;
  const Stencil coarse = stencil(h1);
  const Stencil fine = stencil(h2);
  auto richardson = [&](const CMat& c, const CMat& f) {
    return CMat((h1 * h1 * f - h2 * h2 * c) / (h1 * h1 - h2 * h2));
  };
  ConnectionCoefficients out;
  out.a = richardson(coarse.a, fine.a);
  out.a_ell = richardson(coarse.a_ell, fine.a_ell);
  out.residue = richardson(coarse.residue, fine.residue);
  out.disagreement = std::max((coarse.a - fine.a).cwiseAbs().maxCoeff(),
                              (coarse.a_ell - fine.a_ell).cwiseAbs().maxCoeff());
  if (out.disagreement > 1e-4) {
    throw Error(ErrorCode::ExtractionUnstable,
                "stencil disagreement " + std::to_string(out.disagreement));
  }
  return out;
}

double collection_residual(const KernelOracle& oracle, const EmbeddingPair& embedding,
                           cplx p, cplx q, const Eigen::Vector2cd& xi) {
  if (embedding.is_pole(p) || embedding.is_pole(q)) {
    throw Error(ErrorCode::PointOnPoleSet, "collection formula evaluated at an embedding pole");
  }
  const CMat& c = embedding.residue_table();
  const int r = oracle.rank();
  CMat lhs = CMat::Zero(r, r);
  for (int j = 0; j < embedding.m(); ++j) {
    const cplx weight = xi(0) * c(j, 0) + xi(1) * c(j, 1);
    const cplx x = embedding.poles()[j];
    lhs += weight * oracle(p, x) * oracle(x, q);
  }
  CMat rhs;
  if (oracle.same_point(p, q)) {
    const Eigen::Vector2cd d = embedding.first_derivatives(p);
    rhs = -(xi(0) * d(0) + xi(1) * d(1)) * CMat::Identity(r, r);
  } else {
    const Eigen::Vector2cd diff = embedding.values(q) - embedding.values(p);
    rhs = (xi(0) * diff(0) + xi(1) * diff(1)) * oracle(p, q);
  }
  return relative_residual(lhs, rhs);
}

}  // namespace zpole
