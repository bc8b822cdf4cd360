#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zpole/common.hpp"

namespace zpole {

struct Check {
  std::string name;
  double value = 0;
  double bound = 0;
  bool upper = true;  // value <= bound, else value >= bound
  bool pass = false;
};

struct CriterionReport {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  double time_limit = 0;  // 0: none

  bool pass() const;
  // Adds a residual check; the bound is scaled by tol_scale (divided for
  // lower bounds).
  void expect_below(const std::string& name, double value, double bound, double tol_scale);
  void expect_above(const std::string& name, double value, double bound, double tol_scale);
  // Unscaled boolean check.
  void expect_true(const std::string& name, bool ok);
};

nlohmann::json to_json(const CriterionReport& report);

struct VerifyOptions {
  std::uint64_t seed = 7;
  int samples = 0;  // 0: per-criterion default
  double tol_scale = 1.0;
};

CriterionReport verify_theta(const VerifyOptions& opts);
CriterionReport verify_genus0(const VerifyOptions& opts);
CriterionReport verify_kernel(const VerifyOptions& opts);
CriterionReport verify_fay(const VerifyOptions& opts);
CriterionReport verify_line_equivalence(const VerifyOptions& opts);
CriterionReport verify_matrix_fay(const VerifyOptions& opts);
CriterionReport verify_detrep(const VerifyOptions& opts);
CriterionReport verify_conint(const VerifyOptions& opts);
CriterionReport verify_negative_controls(const VerifyOptions& opts);

// Criterion by number 1..9.
CriterionReport run_criterion(int id, const VerifyOptions& opts);
std::vector<CriterionReport> verify_all(const VerifyOptions& opts);

// Sweeps used by individual CLI commands.
CriterionReport fay_sweep(cplx tau, const VerifyOptions& opts);
CriterionReport matrix_fay_sweep(cplx tau, const VerifyOptions& opts);
CriterionReport kernel_sweep(cplx tau, int rank, const VerifyOptions& opts);
CriterionReport detrep_sweep(cplx tau, int rank, const VerifyOptions& opts);
CriterionReport conint_run(cplx tau, const VerifyOptions& opts);
CriterionReport line_sweep(cplx tau, int n, const VerifyOptions& opts);

}  // namespace zpole
