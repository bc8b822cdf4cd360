#include "zpole/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "zpole/conint.hpp"
#include "zpole/fixtures.hpp"
#include "zpole/genus0.hpp"
#include "zpole/numerics.hpp"

namespace zpole {

using fixtures::Rng;

bool CriterionReport::pass() const {
  for (const Check& c : checks) {
    if (!c.pass) return false;
  }
  return time_limit <= 0 || seconds < time_limit;
}

void CriterionReport::expect_below(const std::string& name, double value, double bound,
                                   double tol_scale) {
  const double b = bound * tol_scale;
  checks.push_back({name, value, b, true, value <= b});
}

void CriterionReport::expect_above(const std::string& name, double value, double bound,
                                   double tol_scale) {
  const double b = bound / tol_scale;
  checks.push_back({name, value, b, false, value >= b});
}

void CriterionReport::expect_true(const std::string& name, bool ok) {
  checks.push_back({name, ok ? 1.0 : 0.0, 1.0, false, ok});
}

nlohmann::json to_json(const CriterionReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", c.value},
                      {"tolerance", c.bound},
                      {"comparison", c.upper ? "<=" : ">="},
                      {"pass", c.pass}});
  }
  nlohmann::json out = {{"criterion", report.id},
                        {"title", report.title},
                        {"pass", report.pass()},
                        {"seconds", report.seconds},
                        {"checks", checks}};
  if (report.time_limit > 0) out["time_limit_seconds"] = report.time_limit;
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int samples_or(const VerifyOptions& opts, int fallback) {
  return opts.samples > 0 ? opts.samples : fallback;
}

void absorb(CriterionReport& into, const CriterionReport& part, const std::string& prefix) {
  for (Check c : part.checks) {
    c.name = prefix + c.name;
    into.checks.push_back(std::move(c));
  }
}

template <class Fn>
bool throws_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

std::string tau_label(cplx tau) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "tau=%g%+gi", tau.real(), tau.imag());
  return buf;
}

Eigen::Vector2cd random_xi(Rng& rng) {
  Eigen::Vector2cd xi(fixtures::random_complex(rng), fixtures::random_complex(rng));
  return xi / xi.norm();
}

std::vector<Eigen::Vector2cd> xi_draws(Rng& rng) {
  Eigen::Vector2cd fixed(1.0, cplx(0.7, 0.3));
  fixed /= fixed.norm();
  return {Eigen::Vector2cd(1.0, 0.0), fixed, random_xi(rng)};
}

// Points away from `avoid` (lattice distance >= gap).
cplx free_point(const Torus& torus, Rng& rng, const std::vector<cplx>& avoid, double gap) {
  return fixtures::separated_points(torus, rng, 1, gap, avoid).front();
}

// Plain double sum of exp(-pi n^2), frozen once against mpmath.
double theta_zero_i_reference() {
  long double sum = 0;
  for (int n = -40; n <= 40; ++n) sum += std::exp(-3.141592653589793238462643383279L * n * n);
  return static_cast<double>(sum);
}

CVec random_cvec(Rng& rng, int g, double re, double im) {
  CVec z(g);
  for (int k = 0; k < g; ++k) z(k) = cplx(fixtures::uniform(rng, -re, re), fixtures::uniform(rng, -im, im));
  return z;
}

// One zero and one pole for the L + L~ fixture.
InterpolationData distinct_data(const fixtures::MatrixFayFixture& mf) {
  InterpolationData d;
  d.rank = 2;
  d.zeros = {{mf.lambda, {mf.x}}};
  d.poles = {{mf.mu, {mf.u}}};
  return d;
}

}  // namespace

CriterionReport verify_theta(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 1;
  rep.title = "theta engine: quasi-periodicity, reference value, gradient";
  rep.time_limit = 10;
  Rng rng(opts.seed);
  std::vector<PeriodMatrix> periods = {PeriodMatrix::genus1(kI), PeriodMatrix::genus1(2.0 * kI),
                                       PeriodMatrix::genus1(cplx(0.3, 0.8)),
                                       fixtures::random_period_matrix(2, rng)};
  const int total = samples_or(opts, 200);
  double worst_qp = 0;
  double worst_grad = 0;
  for (size_t s = 0; s < periods.size(); ++s) {
    const ThetaEngine engine(periods[s]);
    const CMat& omega = periods[s].omega();
    const int g = engine.genus();
    const int count = total / static_cast<int>(periods.size()) +
                      (static_cast<int>(s) < total % static_cast<int>(periods.size()) ? 1 : 0);
    for (int k = 0; k < count; ++k) {
      const CVec z = random_cvec(rng, g, 1.0, 0.5);
      CVec m(g), n(g);
      for (int i = 0; i < g; ++i) {
        m(i) = static_cast<double>(std::uniform_int_distribution<int>(-2, 2)(rng));
        n(i) = static_cast<double>(std::uniform_int_distribution<int>(-2, 2)(rng));
      }
      const cplx lhs = engine.theta(z + m + omega * n);
      const cplx quad = (n.transpose() * omega * n)(0, 0);
      const cplx lin = (n.transpose() * z)(0, 0);
      const cplx rhs = std::exp(-kPi * kI * quad - 2.0 * kPi * kI * lin) * engine.theta(z);
      worst_qp = std::max(worst_qp, relative_residual(lhs, rhs));
    }
    for (int k = 0; k < 10; ++k) {
      Characteristic ch{RVec(g), RVec(g)};
      for (int i = 0; i < g; ++i) {
        ch.a(i) = fixtures::uniform(rng);
        ch.b(i) = fixtures::uniform(rng);
      }
      const CVec z = random_cvec(rng, g, 1.0, 0.3);
      const CVec grad = engine.gradient(ch, z);
      const double h = 1e-5;
      for (int i = 0; i < g; ++i) {
        CVec dz = CVec::Zero(g);
        dz(i) = h;
        const cplx fd = (engine.theta_char(ch, z + dz) - engine.theta_char(ch, z - dz)) / (2 * h);
        worst_grad = std::max(worst_grad, std::abs(grad(i) - fd) / std::max(1.0, std::abs(grad(i))));
      }
    }
  }
  rep.expect_below("quasi_periodicity_max_relative", worst_qp, 1e-10, opts.tol_scale);
  const double value = ThetaEngine(PeriodMatrix::genus1(kI)).theta(CVec::Zero(1)).real();
  rep.expect_below("theta_0_i_vs_direct_sum", std::abs(value - theta_zero_i_reference()), 1e-9,
                   opts.tol_scale);
  rep.expect_below("theta_0_i_vs_frozen_1.0864348112", std::abs(value - 1.0864348112), 1e-9,
                   opts.tol_scale);
  rep.expect_below("gradient_vs_central_difference", worst_grad, 1e-6, opts.tol_scale);
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport verify_genus0(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 2;
  rep.title = "genus-0 interpolation";
  rep.time_limit = 5;
  Rng rng(opts.seed + 2);
  const int count = samples_or(opts, 50);
  double worst_zero = 0, worst_pole = 0, worst_inv_pole = 0, worst_inverse = 0;
  for (int k = 0; k < count; ++k) {
    const int rank = 1 + k % 3;
    const int n = 1 + (k / 3) % 4;
    const Genus0Problem p = fixtures::random_genus0_problem(rng, rank, n);
    const Genus0Solution sol = solve_genus0(p);
    const RationalMatrixFunction& t = sol.function;
    for (const auto& z : p.zeros) {
      const CMat value = t(z.point);
      // Scale of the summed pole terms; T(lambda) itself may vanish.
      const double scale = std::max(1.0, (value - CMat::Identity(rank, rank)).norm());
      worst_zero = std::max(worst_zero, (z.x * value).norm() / (z.x.norm() * scale));
      const CMat res = laurent_matrix([&](cplx w) { return t.inverse(w); }, z.point, 0.05).residue;
      worst_inv_pole = std::max(worst_inv_pole, span_gap(res.transpose(), z.x.transpose()));
    }
    for (const auto& pole : p.poles) {
      const CMat res = laurent_matrix([&](cplx w) { return t(w); }, pole.point, 0.05).residue;
      worst_pole = std::max(worst_pole, span_gap(res, pole.u));
    }
    for (int s = 0; s < 5; ++s) {
      const cplx w = fixtures::random_complex(rng, 3.0);
      const CMat prod = t(w) * t.inverse(w);
      worst_inverse = std::max(worst_inverse, relative_residual(prod, CMat::Identity(rank, rank)));
    }
  }
  rep.expect_below("zero_condition_x_T(lambda)", worst_zero, 1e-10, opts.tol_scale);
  rep.expect_below("pole_residue_span_gap", worst_pole, 1e-10, opts.tol_scale);
  rep.expect_below("inverse_residue_span_gap", worst_inv_pole, 1e-10, opts.tol_scale);
  rep.expect_below("T_times_inverse_minus_I", worst_inverse, 1e-10, opts.tol_scale);

  double worst_forms = 0;
  for (int n = 1; n <= 4; ++n) {
    for (int rep_k = 0; rep_k < 3; ++rep_k) {
      const Genus0Problem p = fixtures::random_genus0_problem(rng, 1, n);
      std::vector<cplx> zeros, poles;
      for (const auto& z : p.zeros) zeros.push_back(z.point);
      for (const auto& q : p.poles) poles.push_back(q.point);
      const CVec c = sylvester_coefficients(zeros, poles);
      for (int s = 0; s < 50; ++s) {
        const cplx w = fixtures::random_complex(rng, 3.0);
        worst_forms = std::max(worst_forms, relative_residual(scalar_product_form(zeros, poles, w),
                                                              partial_fraction_form(poles, c, w)));
      }
    }
  }
  rep.expect_below("product_vs_sylvester_partial_fraction", worst_forms, 1e-10, opts.tol_scale);

  const CVec hand = sylvester_coefficients({0.0, 1.0}, {2.0, 3.0});
  rep.expect_below("sylvester_coefficients_(-2,6)",
                   std::abs(hand(0) + 2.0) + std::abs(hand(1) - 6.0), 1e-12, opts.tol_scale);
  Genus0Problem single;
  single.rank = 1;
  single.zeros = {{2.0, CRow::Ones(1)}};
  single.poles = {{3.0, CVec::Ones(1)}};
  const cplx at10 = solve_genus0(single).function(10.0)(0, 0);
  rep.expect_below("T(10)_equals_8/7", std::abs(at10 - 8.0 / 7.0), 1e-12, opts.tol_scale);
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport kernel_sweep(cplx tau, int rank, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 3;
  rep.title = "Cauchy kernel invariants";
  Rng rng(opts.seed + 3 + static_cast<std::uint64_t>(rank));
  auto torus = std::make_shared<const Torus>(tau);
  std::vector<KernelPtr> parts;
  for (int k = 0; k < rank; ++k) parts.push_back(line_kernel(torus, fixtures::random_characteristic(*torus, rng)));
  const KernelPtr kernel = rank == 1 ? parts.front() : direct_sum_kernel(parts);
  const int r = kernel->rank();

  double res_err = 0, sum_err = 0, closed_err = 0, point_err = 0;
  for (int k = 0; k < 5; ++k) {
    const cplx p0 = fixtures::random_point(*torus, rng);
    const ConnectionCoefficients cc = extract_laurent_coeffs(*kernel, p0);
    res_err = std::max(res_err, (cc.residue - CMat::Identity(r, r)).cwiseAbs().maxCoeff());
    sum_err = std::max(sum_err, (cc.a + cc.a_ell).cwiseAbs().maxCoeff());
    closed_err = std::max(closed_err, (cc.a - kernel->closed_form_connection()).cwiseAbs().maxCoeff());
  }
  for (const auto& part : parts) {
    const auto* line = dynamic_cast<const LineKernel*>(part.get());
    point_err = std::max(point_err, std::abs(line->closed_form_connection()(0, 0) -
                                             line->connection_from_point()));
  }
  rep.expect_below("diagonal_residue_minus_I", res_err, 1e-8, opts.tol_scale);
  rep.expect_below("A_plus_A_ell", sum_err, 1e-7, opts.tol_scale);
  rep.expect_below("A_vs_closed_form", closed_err, 1e-6, opts.tol_scale);
  rep.expect_below("closed_form_vs_jacobian_point_form", point_err, 1e-10, opts.tol_scale);

  const KernelPtr dual = kernel->dual();
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const std::vector<cplx> avoid(emb.poles().begin(), emb.poles().end());
  const int count = samples_or(opts, 50);
  double dual_err = 0, coll_err = 0, degen_err = 0;
  for (int k = 0; k < count; ++k) {
    const std::vector<cplx> pq = fixtures::separated_points(*torus, rng, 2, 0.05, avoid);
    dual_err = std::max(dual_err, relative_residual((*dual)(pq[0], pq[1]), CMat(-(*kernel)(pq[1], pq[0]))));
    const Eigen::Vector2cd xi(fixtures::random_complex(rng), fixtures::random_complex(rng));
    coll_err = std::max(coll_err, collection_residual(*kernel, emb, pq[0], pq[1], xi));
    if (k % 5 == 0) degen_err = std::max(degen_err, collection_residual(*kernel, emb, pq[0], pq[0], xi));
  }
  rep.expect_below("duality", dual_err, 1e-10, opts.tol_scale);
  rep.expect_below("collection_formula", coll_err, 1e-8, opts.tol_scale);
  rep.expect_below("collection_formula_diagonal_limit", degen_err, 1e-8, opts.tol_scale);
  return rep;
}

CriterionReport verify_kernel(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 3;
  rep.title = "Cauchy kernel invariants";
  rep.time_limit = 20;
  for (cplx tau : {cplx(0, 1), cplx(0.3, 0.8)}) {
    for (int rank : {1, 2}) {
      absorb(rep, kernel_sweep(tau, rank, opts), tau_label(tau) + " r=" + std::to_string(rank) + " ");
    }
  }
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport fay_sweep(cplx tau, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 4;
  rep.title = "three-term theta identity";
  Rng rng(opts.seed);
  const Torus torus(tau);
  const int count = samples_or(opts, 200);
  double worst = 0, worst_equal = 0, worst_on_zero = 0;
  for (int k = 0; k < count; ++k) {
    const cplx z = fixtures::random_point(torus, rng);
    const std::vector<cplx> pts = fixtures::separated_points(torus, rng, 4, 1e-3);
    worst = std::max(worst, fay_residual(torus, z, pts[0], pts[1], pts[2], pts[3]));
    if (k % 10 == 0) {
      worst_equal = std::max(worst_equal, fay_residual(torus, z, pts[0], pts[1], pts[2], pts[2]));
      worst_on_zero = std::max(worst_on_zero, fay_residual(torus, z, pts[2], pts[1], pts[2], pts[3]));
    }
  }
  rep.expect_below("max_relative_residual", worst, 1e-9, opts.tol_scale);
  rep.expect_below("collapse_lambda_eq_mu", worst_equal, 1e-10, opts.tol_scale);
  rep.expect_below("collapse_p_eq_lambda", worst_on_zero, 1e-10, opts.tol_scale);
  return rep;
}

CriterionReport verify_fay(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 4;
  rep.title = "three-term theta identity";
  rep.time_limit = 30;
  for (cplx tau : {cplx(0, 1), cplx(0, 2), cplx(0.3, 0.8)}) {
    absorb(rep, fay_sweep(tau, opts), tau_label(tau) + " ");
  }
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport line_sweep(cplx tau, int n, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 5;
  rep.title = "scalar torus problem: product and partial-fraction forms";
  Rng rng(opts.seed + 5 + static_cast<std::uint64_t>(n));
  auto torus = std::make_shared<const Torus>(tau);
  const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, n);
  const ScalarMultiplicative mult(torus, prob.divisor, prob.chi, prob.tilde, prob.q, 1.0);
  const ScalarPartialFraction pf(torus, prob.divisor, prob.chi, prob.tilde, prob.q, 1.0);
  std::vector<cplx> avoid = prob.divisor.zeros;
  avoid.insert(avoid.end(), prob.divisor.poles.begin(), prob.divisor.poles.end());
  avoid.push_back(prob.q);
  const cplx z = prob.chi.point(torus->engine().period())(0);
  const int count = samples_or(opts, 50);
  double worst = 0, worst_special = 0;
  for (int k = 0; k < count; ++k) {
    const cplx p = free_point(*torus, rng, avoid, 0.05);
    const cplx m = mult(p);
    worst = std::max(worst, relative_residual(m, pf(p)));
    if (n == 1) {
      const cplx s = special_partial_fraction(*torus, z, prob.divisor.zeros[0],
                                              prob.divisor.poles[0], prob.q, 1.0, p);
      worst_special = std::max(worst_special, relative_residual(m, s));
    }
  }
  const std::string tag = "n=" + std::to_string(n) + " ";
  rep.expect_below(tag + "product_vs_partial_fraction", worst, 1e-9, opts.tol_scale);
  if (n == 1) rep.expect_below(tag + "single_pair_theta_assembly", worst_special, 1e-9, opts.tol_scale);

  const BundleMap& map = pf.map();
  const SolutionReport sr = verify_solution([&](cplx p) { return map(p); },
                                            [&](cplx p) { return map.inverse(p); }, map.data(),
                                            *map.tilde());
  double gap = 0;
  for (double g : sr.pole_gaps) gap = std::max(gap, g);
  for (double g : sr.zero_gaps) gap = std::max(gap, g);
  rep.expect_below(tag + "zero_pole_conditions", gap, 1e-6, opts.tol_scale);
  double res = 0;
  for (const auto& rc : residue_condition_check(map.data(), prob.q, CMat::Identity(1, 1),
                                                map.chi(), map.tilde())) {
    res = std::max(res, rc.residual);
  }
  rep.expect_below(tag + "inverse_kernel_residue_condition", res, 1e-8, opts.tol_scale);
  rep.expect_true(tag + "necessity_enforced", throws_code(ErrorCode::NecessityViolated, [&] {
                    ScalarMultiplicative(torus, prob.divisor, prob.chi, prob.chi, prob.q, 1.0);
                  }));
  return rep;
}

CriterionReport verify_line_equivalence(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 5;
  rep.title = "scalar torus problem: product and partial-fraction forms";
  for (cplx tau : {cplx(0, 1), cplx(0.3, 0.8)}) {
    for (int n = 1; n <= 3; ++n) absorb(rep, line_sweep(tau, n, opts), tau_label(tau) + " ");
  }
  rep.seconds = elapsed(start);
  return rep;
}

namespace {

double matrix_fay_max(const fixtures::MatrixFayFixture& fx, const std::vector<cplx>& samples) {
  return matrix_fay_residual(fx.map, *fx.chi, *fx.tilde, fx.lambda, fx.mu, fx.x, fx.u, fx.q,
                             samples);
}

}  // namespace

CriterionReport matrix_fay_sweep(cplx tau, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 6;
  rep.title = "matrix three-term identity";
  Rng rng(opts.seed + 6);
  const int count = samples_or(opts, 30);

  const fixtures::MatrixFayFixture g0 = fixtures::genus0_matrix_fay(rng);
  std::vector<cplx> samples;
  while (static_cast<int>(samples.size()) < count) {
    const cplx p = fixtures::random_complex(rng, 3.0);
    if (std::abs(p - g0.lambda) > 0.05 && std::abs(p - g0.mu) > 0.05 && std::abs(p - g0.q) > 0.05) {
      samples.push_back(p);
    }
  }
  rep.expect_below("genus0_r2", matrix_fay_max(g0, samples), 1e-10, opts.tol_scale);

  auto torus = std::make_shared<const Torus>(tau);
  const fixtures::MatrixFayFixture g1 = fixtures::genus1_matrix_fay(torus, rng);
  samples.clear();
  for (int k = 0; k < count; ++k) samples.push_back(free_point(*torus, rng, {g1.lambda, g1.mu, g1.q}, 0.05));
  rep.expect_below("genus1_r2_direct_sum " + tau_label(tau), matrix_fay_max(g1, samples), 1e-8,
                   opts.tol_scale);
  return rep;
}

CriterionReport verify_matrix_fay(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep = matrix_fay_sweep(cplx(0.3, 0.8), opts);
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport detrep_sweep(cplx tau, int rank, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 7;
  rep.title = "determinantal representation";
  Rng rng(opts.seed + 7 + static_cast<std::uint64_t>(rank));
  auto torus = std::make_shared<const Torus>(tau);
  std::vector<KernelPtr> parts;
  for (int k = 0; k < rank; ++k) parts.push_back(line_kernel(torus, fixtures::random_characteristic(*torus, rng)));
  const KernelPtr kernel = rank == 1 ? parts.front() : direct_sum_kernel(parts);
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const std::vector<cplx> poles(emb.poles().begin(), emb.poles().end());
  const PencilRep pencil = build_pencil(*kernel, emb);
  const NormalizedSections sections(kernel, emb);
  const std::string tag = "r=" + std::to_string(rank) + " ";

  double id_right = 0, id_left = 0, id_pair = 0;
  for (int k = 0; k < 20; ++k) {
    const cplx p = free_point(*torus, rng, poles, 0.05);
    for (const auto& xi : xi_draws(rng)) {
      const IdentityResiduals r = check_kernel_identities(pencil, sections, p, xi);
      id_right = std::max(id_right, r.right);
      id_left = std::max(id_left, r.left);
      id_pair = std::max(id_pair, r.pairing);
    }
  }
  rep.expect_below(tag + "identity_right_kernel", id_right, 1e-7, opts.tol_scale);
  rep.expect_below(tag + "identity_left_kernel", id_left, 1e-7, opts.tol_scale);
  rep.expect_below(tag + "identity_pairing", id_pair, 1e-7, opts.tol_scale);

  const int count = samples_or(opts, 100);
  double on_curve = 0;
  int wrong_dim = 0;
  double off_curve = INFINITY;
  for (int k = 0; k < count; ++k) {
    const cplx p = free_point(*torus, rng, poles, 0.05);
    const Membership m = curve_membership(pencil, emb, p);
    on_curve = std::max(on_curve, m.relative_det);
    wrong_dim += m.kernel_dim != rank;
  }
  for (int k = 0; k < 20; ++k) {
    const cplx p = free_point(*torus, rng, poles, 0.05);
    const Eigen::Vector2cd z = emb.values(p);
    const double scale = 0.5 * (1.0 + z.norm());
    const Membership m = pencil_membership(pencil, z(0) + scale * std::polar(1.0, fixtures::uniform(rng, 0, 2 * kPi)),
                                           z(1) + scale * std::polar(1.0, fixtures::uniform(rng, 0, 2 * kPi)));
    off_curve = std::min(off_curve, m.relative_det);
  }
  rep.expect_below(tag + "on_curve_relative_det", on_curve, 1e-7, opts.tol_scale);
  rep.expect_true(tag + "on_curve_kernel_dimension_equals_rank", wrong_dim == 0);
  rep.expect_above(tag + "off_curve_min_relative_det", off_curve, 1e-3, opts.tol_scale);

  double worst_cond = 0;
  for (int k = 0; k < 5; ++k) {
    const std::vector<cplx> y = fixtures::separated_points(*torus, rng, 2, 0.05, poles);
    const cplx y3 = poles[0] + poles[1] + poles[2] - y[0] - y[1];
    if (emb.is_pole(y3, 0.05)) continue;
    worst_cond = std::max(worst_cond, line_section_condition(*kernel, emb, y[0], y[1]));
  }
  rep.expect_below(tag + "line_section_block_condition", worst_cond, 1e10, 1.0);

  std::vector<CMat> identity(emb.m(), CMat::Identity(rank, rank));
  rep.expect_below(tag + "adjust_by_identity_unchanged",
                   (adjust_gamma_by_map(pencil, identity).gamma - pencil.gamma).norm(), 1e-15, 1.0);
  std::vector<CMat> values;
  for (int i = 0; i < emb.m(); ++i) {
    values.push_back(CMat::Identity(rank, rank) + 0.3 * fixtures::random_vector(rng, rank) *
                                                      fixtures::random_vector(rng, rank).transpose());
  }
  const PencilRep adjusted = adjust_gamma_by_map(pencil, values);
  double adjusted_det = 0;
  int adjusted_dim = 0;
  for (int k = 0; k < 20; ++k) {
    const Membership m = curve_membership(adjusted, emb, free_point(*torus, rng, poles, 0.05));
    adjusted_det = std::max(adjusted_det, m.relative_det);
    adjusted_dim += m.kernel_dim != rank;
  }
  rep.expect_below(tag + "adjusted_pencil_on_curve", adjusted_det, 1e-7, opts.tol_scale);
  rep.expect_true(tag + "adjusted_pencil_kernel_dimension", adjusted_dim == 0);
  return rep;
}

CriterionReport verify_detrep(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 7;
  rep.title = "determinantal representation";
  for (int rank : {1, 2}) absorb(rep, detrep_sweep(cplx(0.3, 0.8), rank, opts), "");
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport conint_run(cplx tau, const VerifyOptions& opts) {
  CriterionReport rep;
  rep.id = 8;
  rep.title = "concrete interpolation";
  Rng rng(opts.seed + 8);
  auto torus = std::make_shared<const Torus>(tau);
  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const std::vector<cplx> poles(emb.poles().begin(), emb.poles().end());
  const std::vector<Eigen::Vector2cd> xis = xi_draws(rng);

  struct Case {
    std::string name;
    KernelPtr chi, tilde;
    InterpolationData data;
    MatrixFunction map;
    std::vector<cplx> special;
  };
  std::vector<Case> cases;
  {
    const fixtures::CoupledFixture fx = fixtures::coupled_rank2_fixture(torus);
    cases.push_back({"coupled_r2 ", fx.chi, fx.tilde, fx.data, fx.map, fx.special});
  }
  {
    const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, 2, poles);
    const ScalarMultiplicative mult(torus, prob.divisor, prob.chi, prob.tilde, prob.q, 1.0);
    std::vector<cplx> special = prob.divisor.zeros;
    special.insert(special.end(), prob.divisor.poles.begin(), prob.divisor.poles.end());
    special.push_back(prob.q);
    cases.push_back({"scalar_n2 ", line_kernel(torus, prob.chi), line_kernel(torus, prob.tilde),
                     scalar_data(prob.divisor),
                     [mult](cplx p) { return CMat::Constant(1, 1, mult(p)); }, special});
  }

  {
    const fixtures::MatrixFayFixture mf = fixtures::genus1_matrix_fay(torus, rng);
    InterpolationData d = distinct_data(mf);
    const BundleMap map(d, mf.q, mf.map(mf.q), mf.chi, mf.tilde);
    cases.push_back({"distinct_r2 ", mf.chi, mf.tilde, d,
                     [map](cplx p) { return map(p); }, {mf.lambda, mf.mu, mf.q}});
  }

  for (const Case& c : cases) {
    const PencilRep tilde_pencil = build_pencil(*c.tilde, emb);
    const PencilRep chi_pencil = build_pencil(*c.chi, emb);
    const ConintData data = convert_absint_to_conint(c.data, c.tilde, emb, tilde_pencil);
    const int r = c.tilde->rank();

    const CMat g_a = build_gamma0(data, xis[0]);
    const CMat g_b = build_gamma0(data, xis[1]);
    const CMat g_c = build_gamma0(data, xis[2]);
    const double scale = g_a.cwiseAbs().maxCoeff();
    rep.expect_below(c.name + "gamma0_xi_independence",
                     std::max((g_a - g_b).cwiseAbs().maxCoeff(), (g_a - g_c).cwiseAbs().maxCoeff()) / scale,
                     1e-8, opts.tol_scale);
    double eq = 0;
    for (const auto& xi : xis) eq = std::max(eq, check_gamma_equality(c.data, *c.tilde, data, xi));
    rep.expect_below(c.name + "gamma_equals_gamma0", eq, 1e-8, opts.tol_scale);

    const ConintSolution sol = solve_conint(data, xis[1]);
    const ConintSolution sol_other = solve_conint(data, xis[2]);
    rep.expect_below(c.name + "updated_gamma_xi_independence",
                     relative_residual(sol.pencil().gamma, sol_other.pencil().gamma), 1e-8,
                     opts.tol_scale);
    std::vector<CMat> boundary;
    for (cplx x : emb.poles()) boundary.push_back(c.map(x));
    rep.expect_below(c.name + "updated_gamma_vs_adjusted_input_pencil",
                     relative_residual(sol.pencil().gamma, adjust_gamma_by_map(chi_pencil, boundary).gamma),
                     1e-8, opts.tol_scale);

    std::vector<cplx> avoid = c.special;
    avoid.insert(avoid.end(), poles.begin(), poles.end());
    const NormalizedSections in_sections(c.chi, emb);
    const NormalizedSections out_sections(c.tilde, emb);
    double memb = 0, kmap = 0, inter = 0;
    int wrong_dim = 0;
    for (int k = 0; k < 20; ++k) {
      const cplx p = free_point(*torus, rng, avoid, 0.05);
      const Eigen::Vector2cd z = emb.values(p);
      const Membership m = curve_membership(sol.pencil(), emb, p);
      memb = std::max(memb, m.relative_det);
      wrong_dim += m.kernel_dim != r;
      kmap = std::max(kmap, kernel_mapping_residual(sol, tilde_pencil, z(0), z(1)));
      inter = std::max(inter, check_intertwining(sol, c.map, in_sections, out_sections, c.special, p));
    }
    rep.expect_below(c.name + "updated_pencil_on_curve", memb, 1e-7, opts.tol_scale);
    rep.expect_true(c.name + "updated_pencil_kernel_dimension", wrong_dim == 0);
    rep.expect_below(c.name + "kernel_mapping", kmap, 1e-7, opts.tol_scale);
    rep.expect_below(c.name + "intertwining", inter, 1e-7, opts.tol_scale);

    double cons1 = 0, cons2 = 0;
    for (int k = 0; k < 5; ++k) {
      const ConsequenceResiduals cr = consequence_residuals(c.data, *c.tilde, emb,
                                                            free_point(*torus, rng, avoid, 0.05), xis[k % 3]);
      cons1 = std::max(cons1, cr.first);
      cons2 = std::max(cons2, cr.second);
    }
    rep.expect_below(c.name + "collection_consequence_1", cons1, 1e-7, opts.tol_scale);
    rep.expect_below(c.name + "collection_consequence_2", cons2, 1e-7, opts.tol_scale);

    for (const auto& cp : data.couplings) {
      const std::string tag = c.name + "coupling(" + std::to_string(cp.zero) + "," +
                              std::to_string(cp.pole) + ") ";
      const cplx v1 = coupling_condition_value(sol, data, emb, cp.zero, cp.pole, cp.alpha, cp.beta);
      const cplx v2 = coupling_condition_value(sol_other, data, emb, cp.zero, cp.pole, cp.alpha, cp.beta);
      rep.expect_below(tag + "round_trip", std::abs(v1 - cp.rho) / std::max(1.0, std::abs(cp.rho)),
                       1e-5, opts.tol_scale);
      rep.expect_below(tag + "xi_independence", std::abs(v1 - v2) / std::max(1.0, std::abs(v1)),
                       1e-6, opts.tol_scale);
    }
  }
  return rep;
}

CriterionReport verify_conint(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep = conint_run(cplx(0.3, 0.8), opts);
  rep.time_limit = 60;
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport verify_negative_controls(const VerifyOptions& opts) {
  const auto start = Clock::now();
  CriterionReport rep;
  rep.id = 9;
  rep.title = "negative controls";
  Rng rng(opts.seed + 9);

  // Genus 0.
  Genus0Problem wide = fixtures::random_genus0_problem(rng, 2, 2);
  wide.poles.pop_back();
  rep.expect_true("genus0_rejects_non_square", throws_code(ErrorCode::NotSquare, [&] { solve_genus0(wide); }));
  Genus0Problem flat;
  flat.rank = 2;
  flat.zeros = {{0.0, CRow::Unit(2, 0)}, {1.0, CRow::Unit(2, 0)}};
  flat.poles = {{2.0, CVec::Unit(2, 1)}, {3.0, CVec::Unit(2, 1)}};
  rep.expect_true("genus0_rejects_singular_gamma", throws_code(ErrorCode::SingularGamma, [&] { solve_genus0(flat); }));

  // Torus, abstract problem.
  const cplx tau(0.3, 0.8);
  auto torus = std::make_shared<const Torus>(tau);
  const fixtures::CoupledFixture fx = fixtures::coupled_rank2_fixture(torus);
  InterpolationData lopsided = fx.data;
  lopsided.poles.pop_back();
  lopsided.couplings.pop_back();
  rep.expect_true("absint_rejects_non_square", throws_code(ErrorCode::NotSquare, [&] {
                    BundleMap(lopsided, fx.q, fx.Q, fx.chi, fx.tilde);
                  }));
  InterpolationData degenerate;
  degenerate.rank = 2;
  const CVec e1 = CVec::Unit(2, 0), e2 = CVec::Unit(2, 1);
  degenerate.zeros = {{cplx(0.2, 0.1), {e1}}, {cplx(0.6, 0.2), {e1}}};
  degenerate.poles = {{cplx(0.3, 0.5), {e2}}, {cplx(0.75, 0.55), {e2}}};
  rep.expect_true("absint_rejects_singular_gamma", throws_code(ErrorCode::SingularGamma, [&] {
                    BundleMap(degenerate, fx.q, fx.Q, fx.chi, fx.tilde);
                  }));

  const EmbeddingPair emb = fixtures::default_embedding(torus);
  const PencilRep tilde_pencil = build_pencil(*fx.tilde, emb);
  const Eigen::Vector2cd xi(1.0, 0.0);
  rep.expect_true("conint_rejects_non_square", throws_code(ErrorCode::NotSquare, [&] {
                    solve_conint(convert_absint_to_conint(lopsided, fx.tilde, emb, tilde_pencil), xi);
                  }));
  rep.expect_true("conint_rejects_singular_gamma0", throws_code(ErrorCode::SingularGamma0, [&] {
                    solve_conint(convert_absint_to_conint(degenerate, fx.tilde, emb, tilde_pencil), xi);
                  }));
  InterpolationData clash = fx.data;
  clash.poles[0].u = {CVec(e1 + 0.5 * e2)};
  rep.expect_true("conint_rejects_zp_violation", throws_code(ErrorCode::ZPViolated, [&] {
                    solve_conint(convert_absint_to_conint(clash, fx.tilde, emb, tilde_pencil), xi);
                  }));

  // Perturbed pole vector: the residue of the built map no longer matches the data.
  InterpolationData tilted = fx.data;
  tilted.poles[1].u = {CVec(e1 + 1e-2 * e2)};
  const BundleMap wrong(tilted, fx.q, fx.Q, fx.chi, fx.tilde);
  const SolutionReport sr = verify_solution([&](cplx p) { return wrong(p); },
                                            [&](cplx p) { return wrong.inverse(p); }, fx.data,
                                            *fx.tilde);
  rep.expect_above("perturbed_pole_vector_residue_gap", sr.pole_gaps[1], 1e-3, opts.tol_scale);

  // Perturbed normalization: with distinct summands the residue condition
  // depends on Q, so the rebuilt map no longer intertwines.
  const ConintData data = convert_absint_to_conint(fx.data, fx.tilde, emb, tilde_pencil);
  const ConintSolution sol = solve_conint(data, xi);
  {
    const fixtures::MatrixFayFixture mf = fixtures::genus1_matrix_fay(torus, rng);
    const InterpolationData d = distinct_data(mf);
    CMat bent_q = mf.map(mf.q);
    bent_q(0, 1) += 1e-2 * bent_q.norm();
    const BundleMap bent(d, mf.q, bent_q, mf.chi, mf.tilde);
    const PencilRep out_pencil = build_pencil(*mf.tilde, emb);
    const ConintSolution dsol = solve_conint(convert_absint_to_conint(d, mf.tilde, emb, out_pencil), xi);
    const NormalizedSections in_sections(mf.chi, emb), out_sections(mf.tilde, emb);
    const std::vector<cplx> special = {mf.lambda, mf.mu, mf.q};
    std::vector<cplx> avoid = special;
    avoid.insert(avoid.end(), emb.poles().begin(), emb.poles().end());
    double worst = 0;
    for (int k = 0; k < 5; ++k) {
      const cplx p = free_point(*torus, rng, avoid, 0.05);
      worst = std::max(worst, check_intertwining(dsol, [&](cplx w) { return bent(w); }, in_sections,
                                                 out_sections, special, p));
    }
    rep.expect_above("perturbed_Q_intertwining", worst, 1e-3, opts.tol_scale);
  }

  // Scalar data with one pole moved by 0.01 leaves residues in the built map.
  {
    const fixtures::ScalarLineProblem prob = fixtures::scalar_line_problem(torus, rng, 2);
    InterpolationData shifted = scalar_data(prob.divisor);
    shifted.poles[0].point += 0.01;
    const KernelPtr chi = line_kernel(torus, prob.chi), tilde = line_kernel(torus, prob.tilde);
    double worst = 0;
    for (const auto& rc : residue_condition_check(shifted, prob.q, CMat::Identity(1, 1), chi, tilde)) {
      worst = std::max(worst, rc.residual);
    }
    rep.expect_above("shifted_pole_residue_condition", worst, 1e-3, opts.tol_scale);
  }

  // Shifted coupling number.
  const auto& cp = data.couplings.front();
  rep.expect_above("perturbed_rho_coupling_residual",
                   check_coupling_condition(sol, data, emb, cp.zero, cp.pole, cp.alpha, cp.beta,
                                      cp.rho + 1e-2 * std::max(1.0, std::abs(cp.rho))),
                   1e-3, opts.tol_scale);

  // Matrix identity with a perturbed null vector.
  fixtures::MatrixFayFixture mf = fixtures::genus1_matrix_fay(torus, rng);
  mf.x += 1e-2 * fixtures::random_vector(rng, 2);
  rep.expect_above("perturbed_null_vector_matrix_identity",
                   matrix_fay_residual(mf.map, *mf.chi, *mf.tilde, mf.lambda, mf.mu, mf.x, mf.u,
                                       mf.q, {free_point(*torus, rng, {mf.lambda, mf.mu, mf.q}, 0.05)}),
                   1e-3, opts.tol_scale);
  rep.seconds = elapsed(start);
  return rep;
}

CriterionReport run_criterion(int id, const VerifyOptions& opts) {
  switch (id) {
    case 1: return verify_theta(opts);
    case 2: return verify_genus0(opts);
    case 3: return verify_kernel(opts);
    case 4: return verify_fay(opts);
    case 5: return verify_line_equivalence(opts);
    case 6: return verify_matrix_fay(opts);
    case 7: return verify_detrep(opts);
    case 8: return verify_conint(opts);
    case 9: return verify_negative_controls(opts);
    default: throw Error(ErrorCode::InputError, "criterion must be 1..9");
  }
}

std::vector<CriterionReport> verify_all(const VerifyOptions& opts) {
  std::vector<CriterionReport> out;
  for (int id = 1; id <= 9; ++id) out.push_back(run_criterion(id, opts));
  return out;
}

}  // namespace zpole
