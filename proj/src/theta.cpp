#include "zpole/theta.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace zpole {
namespace {

// Upper incomplete gamma function for s a positive multiple of 1/2.
double upper_gamma_half(double s, double x) {
  double g;
  double t;
  if (std::abs(s - std::round(s)) < 1e-12) {
    g = std::exp(-x);
    t = 1.0;
  } else {
    g = std::sqrt(kPi) * std::erfc(std::sqrt(x));
    t = 0.5;
  }
  while (t + 0.5 < s) {
    g = t * g + std::pow(x, t) * std::exp(-x);
    t += 1.0;
  }
  return g;
}

// Visits every n in Z^g with |L^T (n - c)|^2 <= r^2, L lower triangular.
void enumerate_ellipsoid(const Eigen::MatrixXd& chol, const RVec& center,
                         double radius,
                         const std::function<void(const Eigen::VectorXi&)>& visit) {
  const int g = static_cast<int>(chol.rows());
  Eigen::VectorXi n(g);
  std::function<void(int, double)> level = [&](int k, double used) {
    // v_k = L_kk (n_k - c_k) + sum_{j>k} L_jk (n_j - c_j)
    double s = 0;
    for (int j = k + 1; j < g; ++j) s += chol(j, k) * (n(j) - center(j));
    const double room = radius * radius - used;
    if (room < 0) return;
    const double half = std::sqrt(room) / chol(k, k);
    const double mid = center(k) - s / chol(k, k);
    const int lo = static_cast<int>(std::ceil(mid - half));
    const int hi = static_cast<int>(std::floor(mid + half));
    for (int v = lo; v <= hi; ++v) {
      n(k) = v;
      const double vk = chol(k, k) * (v - center(k)) + s;
      const double next = used + vk * vk;
      if (next > radius * radius) continue;
      if (k == 0) {
        visit(n);
      } else {
        level(k - 1, next);
      }
    }
  };
  level(g - 1, 0.0);
}

}  // namespace

PeriodMatrix::PeriodMatrix(CMat omega) : omega_(std::move(omega)) {
  if (omega_.rows() == 0 || omega_.rows() != omega_.cols()) {
    throw Error(ErrorCode::InvalidPeriodMatrix, "period matrix must be square and nonempty");
  }
  if (!omega_.allFinite()) {
    throw Error(ErrorCode::InvalidPeriodMatrix, "non-finite entry");
  }
  const double scale = omega_.cwiseAbs().maxCoeff();
  const double asym = (omega_ - omega_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidPeriodMatrix,
                "not symmetric (defect " + std::to_string(asym) + ")");
  }
  const Eigen::MatrixXd y = 0.5 * (omega_.imag() + omega_.imag().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(y);
  if (eig.eigenvalues().minCoeff() <= 0) {
    throw Error(ErrorCode::InvalidPeriodMatrix, "imaginary part not positive definite");
  }
}

PeriodMatrix PeriodMatrix::genus1(cplx tau) {
  CMat m(1, 1);
  m(0, 0) = tau;
  return PeriodMatrix(m);
}

Characteristic Characteristic::zero(int g) { return {RVec::Zero(g), RVec::Zero(g)}; }

Characteristic Characteristic::half_odd() { return scalar(0.5, 0.5); }

Characteristic Characteristic::scalar(double a, double b) {
  RVec va(1), vb(1);
  va(0) = a;
  vb(0) = b;
  return {va, vb};
}

CVec Characteristic::point(const PeriodMatrix& period) const {
  return period.omega() * a.cast<cplx>() + b.cast<cplx>();
}

ReducedCharacteristic reduce_characteristic(const Characteristic& ch) {
  ReducedCharacteristic out;
  out.shift_a = ch.a.array().floor().cast<int>();
  out.shift_b = ch.b.array().floor().cast<int>();
  out.reduced.a = ch.a - out.shift_a.cast<double>();
  out.reduced.b = ch.b - out.shift_b.cast<double>();
  return out;
}

void ThetaConfig::validate() const {
  if (!(target_abs_error >= 1e-15)) {
    throw Error(ErrorCode::InputError, "target_abs_error must be >= 1e-15");
  }
  if (max_lattice_radius < 1) {
    throw Error(ErrorCode::InputError, "max_lattice_radius must be >= 1");
  }
}

ThetaEngine::ThetaEngine(PeriodMatrix period, ThetaConfig cfg)
    : period_(std::move(period)), cfg_(cfg) {
  cfg_.validate();
  const int g = genus();
  y_ = 0.5 * (period_.omega().imag() + period_.omega().imag().transpose());
  y_inv_ = y_.inverse();
  chol_ = Eigen::LLT<Eigen::MatrixXd>(kPi * y_).matrixL();

  // Shortest nonzero vector of L^T Z^g by enumeration around the origin.
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < g; ++k) best = std::min(best, chol_.col(k).norm());
  enumerate_ellipsoid(chol_, RVec::Zero(g), best * (1 + 1e-12),
                      [&](const Eigen::VectorXi& n) {
                        if (n.isZero()) return;
                        const double len =
                            (chol_.transpose() * n.cast<double>()).norm();
                        best = std::min(best, len);
                      });
  rho_ = best;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(chol_);
  inv_norm_ = 1.0 / svd.singularValues().minCoeff();

  double r = std::max(0.5 * (std::sqrt(static_cast<double>(g)) + rho_), 0.5);
  while (tail_bound(r, 0) > cfg_.target_abs_error) {
    r += 0.05;
    if (r > cfg_.max_lattice_radius) {
      throw Error(ErrorCode::NonConvergent, "ellipsoid radius exceeds max_lattice_radius");
    }
  }
  radius_ = r;
}

// Bound on sum over lattice points v outside the ball of radius r of
// |v|^power exp(-|v|^2).
double ThetaEngine::tail_bound(double r, int power) const {
  const int g = genus();
  const double edge = r - 0.5 * rho_;
  if (r < 0.5 * (std::sqrt(static_cast<double>(g + power)) + rho_) || edge <= 0) {
    return std::numeric_limits<double>::infinity();
  }
  return 0.5 * g * std::pow(2.0 / rho_, g) *
         upper_gamma_half(0.5 * (g + power), edge * edge);
}

ThetaValue ThetaEngine::sum(const Characteristic& ch, const CVec& lam,
                            bool want_gradient) const {
  const int g = genus();
  if (lam.size() != g || ch.a.size() != g || ch.b.size() != g) {
    throw Error(ErrorCode::InputError, "dimension mismatch in theta evaluation");
  }
  if (!lam.allFinite() || !ch.a.allFinite() || !ch.b.allFinite()) {
    throw Error(ErrorCode::InputError, "non-finite theta argument");
  }
  const RVec y = lam.imag();
  const RVec peak = -y_inv_ * y;  // maximiser of the Gaussian envelope in n + a
  const double shift = kPi * y.dot(y_inv_ * y);
  const RVec center = peak - ch.a;

  double r = radius_;
  if (want_gradient) {
    const double m_norm = peak.norm();
    auto bound = [&](double rad) {
      return 2 * kPi * (m_norm * tail_bound(rad, 0) + inv_norm_ * tail_bound(rad, 1));
    };
    while (bound(r) > cfg_.target_abs_error) {
      r += 0.05;
      if (r > cfg_.max_lattice_radius) {
        throw Error(ErrorCode::NonConvergent, "gradient radius exceeds max_lattice_radius");
      }
    }
  }

  const CMat& omega = period_.omega();
  const CVec shifted = lam + ch.b.cast<cplx>();
  cplx total = 0;
  CVec grad = CVec::Zero(want_gradient ? g : 0);
  enumerate_ellipsoid(chol_, center, r, [&](const Eigen::VectorXi& n) {
    const CVec m = (n.cast<double>() + ch.a).cast<cplx>();
    const cplx expo = kI * kPi * m.dot(omega * m) + 2.0 * kI * kPi * m.dot(shifted) - shift;
    const cplx term = std::exp(expo);
    total += term;
    if (want_gradient) grad += (2.0 * kI * kPi) * term * m;
  });
  const double envelope = std::exp(shift);
  ThetaValue out;
  out.value = envelope * total;
  out.gradient = envelope * grad;
  return out;
}

cplx ThetaEngine::theta(const CVec& z) const {
  return sum(Characteristic::zero(genus()), z, false).value;
}

cplx ThetaEngine::theta_char(const Characteristic& ch, const CVec& lam) const {
  return sum(ch, lam, false).value;
}

cplx ThetaEngine::theta_char_by_reduction(const Characteristic& ch,
                                          const CVec& lam) const {
  const CVec a = ch.a.cast<cplx>();
  const CVec b = ch.b.cast<cplx>();
  const CMat& omega = period_.omega();
  const cplx prefactor =
      std::exp(kI * kPi * a.dot(omega * a) + 2.0 * kI * kPi * a.dot(lam + b));
  return prefactor * theta(lam + omega * a + b);
}

CVec ThetaEngine::gradient(const Characteristic& ch, const CVec& lam) const {
  return sum(ch, lam, true).gradient;
}

ThetaValue ThetaEngine::value_and_gradient(const Characteristic& ch,
                                           const CVec& lam) const {
  return sum(ch, lam, true);
}

cplx riemann_theta(const CVec& z, const PeriodMatrix& omega, const ThetaConfig& cfg) {
  return ThetaEngine(omega, cfg).theta(z);
}

cplx theta_with_char(const Characteristic& ch, const CVec& lam,
                     const PeriodMatrix& omega, const ThetaConfig& cfg) {
  return ThetaEngine(omega, cfg).theta_char(ch, lam);
}

CVec theta_gradient(const Characteristic& ch, const CVec& lam,
                    const PeriodMatrix& omega, const ThetaConfig& cfg) {
  return ThetaEngine(omega, cfg).gradient(ch, lam);
}

}  // namespace zpole
