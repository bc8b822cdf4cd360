#include "zpole/genus0.hpp"

#include <cmath>

#include "zpole/io.hpp"
#include "zpole/numerics.hpp"

namespace zpole {

void Genus0Problem::validate() const {
  if (rank < 1) throw Error(ErrorCode::InvalidProblem, "rank must be positive");
  auto distinct = [](const auto& list, const char* what) {
    for (size_t i = 0; i < list.size(); ++i) {
      for (size_t k = i + 1; k < list.size(); ++k) {
        if (list[i].point == list[k].point) {
          throw Error(ErrorCode::InvalidProblem, std::string("repeated ") + what);
        }
      }
    }
  };
  distinct(zeros, "zero");
  distinct(poles, "pole");
  for (const auto& z : zeros) {
    if (z.x.size() != rank || z.x.norm() == 0) {
      throw Error(ErrorCode::InvalidProblem, "null vector must be nonzero of length rank");
    }
    for (const auto& p : poles) {
      if (z.point == p.point) throw Error(ErrorCode::InvalidProblem, "zero coincides with pole");
    }
  }
  for (const auto& p : poles) {
    if (p.u.size() != rank || p.u.norm() == 0) {
      throw Error(ErrorCode::InvalidProblem, "pole vector must be nonzero of length rank");
    }
  }
}

Genus0Problem Genus0Problem::from_json(const nlohmann::json& j) {
  Genus0Problem p;
  try {
    p.rank = j.value("rank", 1);
    for (const auto& z : j.value("zeros", nlohmann::json::array())) {
      p.zeros.push_back({io::complex_from(z.at("point")), io::vector_from(z.at("x")).transpose()});
    }
    for (const auto& q : j.value("poles", nlohmann::json::array())) {
      p.poles.push_back({io::complex_from(q.at("point")), io::vector_from(q.at("u"))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, e.what());
  }
  p.validate();
  return p;
}

RationalMatrixFunction::RationalMatrixFunction(int rank, std::vector<cplx> poles,
                                               std::vector<CVec> u, std::vector<CRow> c,
                                               std::vector<cplx> zeros, std::vector<CRow> x,
                                               std::vector<CVec> b)
    : rank_(rank),
      poles_(std::move(poles)),
      u_(std::move(u)),
      c_(std::move(c)),
      zeros_(std::move(zeros)),
      x_(std::move(x)),
      b_(std::move(b)) {}

CMat RationalMatrixFunction::operator()(cplx z) const {
  CMat t = CMat::Identity(rank_, rank_);
  for (size_t j = 0; j < poles_.size(); ++j) t += u_[j] * c_[j] / (z - poles_[j]);
  return t;
}

CMat RationalMatrixFunction::inverse(cplx z) const {
  CMat t = CMat::Identity(rank_, rank_);
  for (size_t i = 0; i < zeros_.size(); ++i) t -= b_[i] * x_[i] / (z - zeros_[i]);
  return t;
}

double RationalMatrixFunction::det_winding(double radius, int samples) const {
  double total = 0;
  cplx prev = (*this)(radius).determinant();
  for (int k = 1; k <= samples; ++k) {
    const cplx cur = (*this)(std::polar(radius, 2 * kPi * k / samples)).determinant();
    total += std::arg(cur / prev);
    prev = cur;
  }
  return total / (2 * kPi);
}

CMat build_gamma_genus0(const Genus0Problem& problem) {
  const int n0 = static_cast<int>(problem.zeros.size());
  const int ninf = static_cast<int>(problem.poles.size());
  CMat gamma(n0, ninf);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < ninf; ++j) {
      const auto& z = problem.zeros[i];
      const auto& p = problem.poles[j];
      gamma(i, j) = (z.x * p.u)(0, 0) / (p.point - z.point);
    }
  }
  return gamma;
}

Genus0Solution solve_genus0(const Genus0Problem& problem) {
  problem.validate();
  const int r = problem.rank;
  const int n = static_cast<int>(problem.zeros.size());
  if (n != static_cast<int>(problem.poles.size())) {
    throw Error(ErrorCode::NotSquare, "need as many zeros as poles");
  }
  const CMat gamma = build_gamma_genus0(problem);
  std::vector<cplx> poles, zeros;
  std::vector<CVec> u, b;
  std::vector<CRow> c, x;
  double cond = 1.0;
  if (n > 0) {
    cond = svd_summary(gamma).condition;
    if (!(cond <= 1e12)) {
      throw Error(ErrorCode::SingularGamma, "condition number " + std::to_string(cond));
    }
    Eigen::FullPivLU<CMat> lu(gamma);
    CMat xs(n, r), us(r, n);
    for (int i = 0; i < n; ++i) xs.row(i) = problem.zeros[i].x;
    for (int j = 0; j < n; ++j) us.col(j) = problem.poles[j].u;
    const CMat coef = lu.solve(xs);                  // rows c_j
    const CMat back = us * lu.inverse();             // columns b_i
    for (int j = 0; j < n; ++j) {
      poles.push_back(problem.poles[j].point);
      u.push_back(problem.poles[j].u);
      c.push_back(coef.row(j));
    }
    for (int i = 0; i < n; ++i) {
      zeros.push_back(problem.zeros[i].point);
      x.push_back(problem.zeros[i].x);
      b.push_back(back.col(i));
    }
  }
  return {RationalMatrixFunction(r, poles, u, c, zeros, x, b), gamma, cond};
}

cplx scalar_product_form(const std::vector<cplx>& zeros, const std::vector<cplx>& poles,
                         cplx z) {
  if (zeros.size() != poles.size()) {
    throw Error(ErrorCode::CountMismatch, "product form needs equal zero and pole counts");
  }
  cplx value = 1.0;
  for (size_t k = 0; k < zeros.size(); ++k) value *= (z - zeros[k]) / (z - poles[k]);
  return value;
}

CVec sylvester_coefficients(const std::vector<cplx>& zeros, const std::vector<cplx>& poles) {
  if (zeros.size() != poles.size()) {
    throw Error(ErrorCode::CountMismatch, "Sylvester solve needs equal counts");
  }
  const int n = static_cast<int>(zeros.size());
  if (n == 0) return CVec(0);
  CMat s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx gap = poles[j] - zeros[i];
      if (gap == cplx(0.0)) throw Error(ErrorCode::SingularSylvester, "zero meets pole");
      s(i, j) = 1.0 / gap;
    }
  }
  const double cond = svd_summary(s).condition;
  if (!(cond <= 1e12)) {
    throw Error(ErrorCode::SingularSylvester, "condition number " + std::to_string(cond));
  }
  return Eigen::FullPivLU<CMat>(s).solve(CVec::Ones(n));
}

cplx partial_fraction_form(const std::vector<cplx>& poles, const CVec& c, cplx z) {
  cplx value = 1.0;
  for (size_t j = 0; j < poles.size(); ++j) value += c(static_cast<int>(j)) / (z - poles[j]);
  return value;
}

}  // namespace zpole
