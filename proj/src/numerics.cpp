#include "zpole/numerics.hpp"

#include <cmath>

namespace zpole {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::InvalidPeriodMatrix: return "InvalidPeriodMatrix";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::UnsupportedGenus: return "UnsupportedGenus";
    case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::HigherOrderPole: return "HigherOrderPole";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::SingularGamma: return "SingularGamma";
    case ErrorCode::SingularSylvester: return "SingularSylvester";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::InvalidProblem: return "InvalidProblem";
    case ErrorCode::DegenerateBundle: return "DegenerateBundle";
    case ErrorCode::SurfaceMismatch: return "SurfaceMismatch";
    case ErrorCode::ExtractionUnstable: return "ExtractionUnstable";
    case ErrorCode::PointOnPoleSet: return "PointOnPoleSet";
    case ErrorCode::BasePointCollision: return "BasePointCollision";
    case ErrorCode::KernelSingular: return "KernelSingular";
    case ErrorCode::PoleLocationFailure: return "PoleLocationFailure";
    case ErrorCode::NecessityViolated: return "NecessityViolated";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::SingularBoundaryValue: return "SingularBoundaryValue";
    case ErrorCode::XiDenominatorZero: return "XiDenominatorZero";
    case ErrorCode::SingularGamma0: return "SingularGamma0";
    case ErrorCode::ZPViolated: return "ZPViolated";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::PointOnExcludedSet: return "PointOnExcludedSet";
    case ErrorCode::NoCoincidence: return "NoCoincidence";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

std::vector<CMat> circle_coefficients(const std::function<CMat(cplx)>& f,
                                      cplx center, double radius, int kmin,
                                      int kmax, int nodes) {
  std::vector<CMat> coeffs;
  for (int n = 0; n < nodes; ++n) {
    const cplx w = std::polar(1.0, 2.0 * kPi * n / nodes);
    const CMat value = f(center + radius * w);
    if (coeffs.empty()) {
      coeffs.assign(kmax - kmin + 1, CMat::Zero(value.rows(), value.cols()));
    }
    for (int k = kmin; k <= kmax; ++k) {
      coeffs[k - kmin] += value * std::pow(radius * w, -k);
    }
  }
  for (auto& c : coeffs) c /= static_cast<double>(nodes);
  return coeffs;
}

LaurentResult laurent_matrix(const std::function<CMat(cplx)>& f, cplx center,
                             double radius) {
  constexpr int kNodes = 32;
  const auto big = circle_coefficients(f, center, radius, -2, 0, kNodes);
  const auto small = circle_coefficients(f, center, radius / 2, -2, 0, kNodes);
  // Aliasing error of the trapezoid rule decays like radius^kNodes; the
  // Richardson weight for that order leaves the small-circle value.
  const double w = std::ldexp(1.0, kNodes);
  auto extrapolate = [&](int k) {
    return CMat((w * small[k] - big[k]) / (w - 1.0));
  };
  LaurentResult out;
  out.second_order = extrapolate(0);
  out.residue = extrapolate(1);
  out.constant = extrapolate(2);
  out.spread = std::max((big[1] - small[1]).norm(),
                        radius * (big[2] - small[2]).norm());
  return out;
}

ScalarLaurent laurent_coeffs(const std::function<cplx(cplx)>& f, cplx center,
                             double radius) {
  auto wrapped = [&](cplx z) {
    CMat m(1, 1);
    m(0, 0) = f(z);
    return m;
  };
  const LaurentResult r = laurent_matrix(wrapped, center, radius);
  const double scale = 1.0 + std::abs(r.residue(0, 0)) +
                       radius * std::abs(r.constant(0, 0));
  if (std::abs(r.second_order(0, 0)) > 1e-8 * scale * radius) {
    throw Error(ErrorCode::HigherOrderPole,
                "t^-2 coefficient " +
                    std::to_string(std::abs(r.second_order(0, 0))));
  }
  return {r.residue(0, 0), r.constant(0, 0)};
}

cplx derivative(const std::function<cplx(cplx)>& f, cplx z, double h) {
  auto central = [&](double s) { return (f(z + s) - f(z - s)) / (2.0 * s); };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

cplx second_derivative(const std::function<cplx(cplx)>& f, cplx z, double h) {
  const cplx f0 = f(z);
  auto central = [&](double s) {
    return (f(z + s) - 2.0 * f0 + f(z - s)) / (s * s);
  };
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

SvdSummary svd_summary(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  SvdSummary s;
  s.singular = svd.singularValues();
  const double smin = s.singular.size() ? s.singular.minCoeff() : 0.0;
  const double smax = s.singular.size() ? s.singular.maxCoeff() : 0.0;
  s.condition = smin > 0 ? smax / smin : INFINITY;
  return s;
}

CMat right_kernel(const CMat& m, int dim) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

CMat left_kernel(const CMat& m, int dim) {
  return right_kernel(m.transpose(), dim).transpose();
}

double relative_residual(const CMat& lhs, const CMat& rhs) {
  return (lhs - rhs).norm() / (lhs.norm() + rhs.norm() + 1e-300);
}

double relative_residual(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

double span_gap(const CMat& r, const CMat& basis) {
  const SvdSummary s = svd_summary(r);
  const double top = s.singular.size() ? s.singular(0) : 0.0;
  int rank = 0;
  for (int k = 0; k < s.singular.size(); ++k) rank += s.singular(k) > 1e-8 * top;
  if (top == 0.0 || rank != basis.cols()) return 1.0;
  Eigen::HouseholderQR<CMat> qr(basis);
  const CMat q = qr.householderQ() * CMat::Identity(basis.rows(), basis.cols());
  const CMat outside = r - q * (q.adjoint() * r);
  return outside.norm() / r.norm();
}

}  // namespace zpole
