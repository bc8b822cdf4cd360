#pragma once

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zpole/common.hpp"

namespace zpole {

struct Genus0Problem {
  struct Zero {
    cplx point;
    CRow x;  // left null vector, 1 x r
  };
  struct Pole {
    cplx point;
    CVec u;  // pole vector, r x 1
  };

  int rank = 1;
  std::vector<Zero> zeros;
  std::vector<Pole> poles;

  // Distinct points, disjoint zero/pole sets, nonzero vectors of length r.
  void validate() const;
  static Genus0Problem from_json(const nlohmann::json& j);
};

// T(z) = I + sum_j u_j (z - mu_j)^-1 c_j.
class RationalMatrixFunction {
 public:
  RationalMatrixFunction(int rank, std::vector<cplx> poles, std::vector<CVec> u,
                         std::vector<CRow> c, std::vector<cplx> zeros,
                         std::vector<CRow> x, std::vector<CVec> b);

  int rank() const { return rank_; }
  CMat operator()(cplx z) const;
  // T(z)^-1 = I - sum_i b_i (z - lambda_i)^-1 x_i.
  CMat inverse(cplx z) const;
  const std::vector<CRow>& coefficients() const { return c_; }
  // Winding number of det T along |z| = radius.
  double det_winding(double radius, int samples = 2048) const;

 private:
  int rank_;
  std::vector<cplx> poles_;
  std::vector<CVec> u_;
  std::vector<CRow> c_;
  std::vector<cplx> zeros_;
  std::vector<CRow> x_;
  std::vector<CVec> b_;
};

struct Genus0Solution {
  RationalMatrixFunction function;
  CMat gamma;
  double condition = 0;
};

CMat build_gamma_genus0(const Genus0Problem& problem);
// Throws NotSquare, SingularGamma (condition > 1e12).
Genus0Solution solve_genus0(const Genus0Problem& problem);

cplx scalar_product_form(const std::vector<cplx>& zeros, const std::vector<cplx>& poles,
                         cplx z);
// c = S^-1 [1..1] with S_ij = 1 / (mu_j - lambda_i). Throws SingularSylvester.
CVec sylvester_coefficients(const std::vector<cplx>& zeros, const std::vector<cplx>& poles);
cplx partial_fraction_form(const std::vector<cplx>& poles, const CVec& c, cplx z);

}  // namespace zpole
