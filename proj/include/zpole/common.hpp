#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zpole {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorCode {
  NonConvergent,
  InvalidPeriodMatrix,
  UnknownPoint,
  UnsupportedGenus,
  DegenerateEmbedding,
  HigherOrderPole,
  NotSquare,
  SingularGamma,
  SingularSylvester,
  CountMismatch,
  InvalidProblem,
  DegenerateBundle,
  SurfaceMismatch,
  ExtractionUnstable,
  PointOnPoleSet,
  BasePointCollision,
  KernelSingular,
  PoleLocationFailure,
  NecessityViolated,
  DegenerateDenominator,
  NotFullRank,
  SingularBoundaryValue,
  XiDenominatorZero,
  SingularGamma0,
  ZPViolated,
  PoleCollision,
  PointOnExcludedSet,
  NoCoincidence,
  InputError,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace zpole
