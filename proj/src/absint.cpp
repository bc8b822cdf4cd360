#include "zpole/absint.hpp"

#include <cmath>
#include <tuple>

#include "zpole/numerics.hpp"

namespace zpole {
namespace {

cplx bilinear(const CVec& x, const CMat& k, const CVec& u) {
  return (x.transpose() * k * u)(0, 0);
}

// Smallest lattice distance from `p` to any point in `others` (excluding
// points equal to p).
double isolation(const KernelOracle& oracle, cplx p, const std::vector<cplx>& others) {
  double best = INFINITY;
  for (cplx o : others) {
    if (oracle.same_point(p, o, 1e-9)) continue;
    const double d = oracle.torus() ? oracle.torus()->lattice_defect(p - o) : std::abs(p - o);
    best = std::min(best, d);
  }
  return best;
}

double laurent_radius(const KernelOracle& oracle, cplx p, const std::vector<cplx>& others) {
  return std::min(1e-2, 0.25 * isolation(oracle, p, others));
}

std::vector<Characteristic> line_characteristics(const KernelOracle& oracle) {
  if (const auto* line = dynamic_cast<const LineKernel*>(&oracle)) {
    return {line->characteristic()};
  }
  if (const auto* sum = dynamic_cast<const DirectSumKernel*>(&oracle)) {
    std::vector<Characteristic> out;
    for (const auto& part : sum->parts()) {
      auto sub = line_characteristics(*part);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  throw Error(ErrorCode::UnsupportedGenus, "kernel is not built from torus line bundles");
}

std::vector<cplx> special_points(const InterpolationData& data) {
  std::vector<cplx> pts;
  for (const auto& z : data.zeros) pts.push_back(z.point);
  for (const auto& p : data.poles) pts.push_back(p.point);
  return pts;
}

}  // namespace

int InterpolationData::zero_vector_count() const {
  int n = 0;
  for (const auto& z : zeros) n += static_cast<int>(z.x.size());
  return n;
}

int InterpolationData::pole_vector_count() const {
  int n = 0;
  for (const auto& p : poles) n += static_cast<int>(p.u.size());
  return n;
}

cplx InterpolationData::coupling(int zero, int pole, int alpha, int beta) const {
  for (const auto& c : couplings) {
    if (c.zero == zero && c.pole == pole && c.alpha == alpha && c.beta == beta) return c.rho;
  }
  throw Error(ErrorCode::InvalidProblem, "missing coupling number for zero " +
                                             std::to_string(zero) + ", pole " +
                                             std::to_string(pole));
}

void InterpolationData::validate(const KernelOracle& oracle) const {
  if (rank != oracle.rank()) throw Error(ErrorCode::InvalidProblem, "rank differs from kernel rank");
  auto check_set = [&](const std::vector<CVec>& vs, const char* what) {
    if (vs.empty() || static_cast<int>(vs.size()) > rank) {
      throw Error(ErrorCode::InvalidProblem, std::string("bad number of ") + what);
    }
    CMat m(rank, static_cast<int>(vs.size()));
    for (size_t k = 0; k < vs.size(); ++k) {
      if (vs[k].size() != rank) throw Error(ErrorCode::InvalidProblem, std::string(what) + " has wrong length");
      m.col(static_cast<int>(k)) = vs[k];
    }
    const SvdSummary s = svd_summary(m);
    if (s.singular(s.singular.size() - 1) <= 1e-10 * s.singular(0)) {
      throw Error(ErrorCode::InvalidProblem, std::string(what) + " are linearly dependent");
    }
  };
  for (size_t i = 0; i < zeros.size(); ++i) {
    check_set(zeros[i].x, "null vectors");
    for (size_t k = i + 1; k < zeros.size(); ++k) {
      if (oracle.same_point(zeros[i].point, zeros[k].point)) {
        throw Error(ErrorCode::InvalidProblem, "repeated zero");
      }
    }
  }
  for (size_t j = 0; j < poles.size(); ++j) {
    check_set(poles[j].u, "pole vectors");
    for (size_t k = j + 1; k < poles.size(); ++k) {
      if (oracle.same_point(poles[j].point, poles[k].point)) {
        throw Error(ErrorCode::InvalidProblem, "repeated pole");
      }
    }
  }
  for (size_t i = 0; i < zeros.size(); ++i) {
    for (size_t j = 0; j < poles.size(); ++j) {
      if (!oracle.same_point(zeros[i].point, poles[j].point)) continue;
      for (size_t a = 0; a < zeros[i].x.size(); ++a) {
        for (size_t b = 0; b < poles[j].u.size(); ++b) {
          const cplx pair = (zeros[i].x[a].transpose() * poles[j].u[b])(0, 0);
          const double scale = std::max(1.0, zeros[i].x[a].norm() * poles[j].u[b].norm());
          if (std::abs(pair) > 1e-12 * scale) {
            throw Error(ErrorCode::InvalidProblem, "compatibility x^T u = 0 violated");
          }
          coupling(static_cast<int>(i), static_cast<int>(j), static_cast<int>(a),
                   static_cast<int>(b));
        }
      }
    }
  }
}

GammaMatrix build_gamma(const InterpolationData& data, const KernelOracle& tilde) {
  const int rows = data.zero_vector_count();
  const int cols = data.pole_vector_count();
  GammaMatrix g;
  g.matrix = CMat::Zero(rows, cols);
  int row = 0;
  for (size_t i = 0; i < data.zeros.size(); ++i) {
    const auto& z = data.zeros[i];
    for (size_t a = 0; a < z.x.size(); ++a, ++row) {
      int col = 0;
      for (size_t j = 0; j < data.poles.size(); ++j) {
        const auto& p = data.poles[j];
        const bool coincide = tilde.same_point(z.point, p.point);
        const CMat k = coincide ? CMat() : tilde(z.point, p.point);
        for (size_t b = 0; b < p.u.size(); ++b, ++col) {
          g.matrix(row, col) =
              coincide ? -data.coupling(static_cast<int>(i), static_cast<int>(j),
                                        static_cast<int>(a), static_cast<int>(b))
                       : -bilinear(z.x[a], k, p.u[b]);
        }
      }
    }
  }
  g.square = rows == cols;
  g.condition = (g.square && rows > 0) ? svd_summary(g.matrix).condition : (g.square ? 1.0 : INFINITY);
  return g;
}

BundleMap::BundleMap(InterpolationData data, cplx q, CMat Q, KernelPtr chi, KernelPtr tilde)
    : data_(std::move(data)), q_(q), Q_(std::move(Q)), chi_(std::move(chi)), tilde_(std::move(tilde)) {
  if (!chi_->same_surface(*tilde_)) {
    throw Error(ErrorCode::SurfaceMismatch, "input and output bundles on different surfaces");
  }
  if (chi_->rank() != tilde_->rank()) throw Error(ErrorCode::InvalidProblem, "bundle ranks differ");
  data_.validate(*tilde_);
  const int r = tilde_->rank();
  if (Q_.rows() != r || Q_.cols() != r || !(svd_summary(Q_).condition <= 1e12)) {
    throw Error(ErrorCode::InvalidProblem, "base value Q must be an invertible r x r matrix");
  }
  for (cplx p : special_points(data_)) {
    if (tilde_->same_point(p, q_, 1e-9)) {
      throw Error(ErrorCode::BasePointCollision, "base point meets a zero or pole");
    }
  }
  gamma_ = build_gamma(data_, *tilde_);
  if (!gamma_.square) {
    throw Error(ErrorCode::NotSquare, std::to_string(gamma_.matrix.rows()) + " x " +
                                          std::to_string(gamma_.matrix.cols()));
  }
  if (!(gamma_.condition <= 1e12)) {
    throw Error(ErrorCode::SingularGamma, "condition number " + std::to_string(gamma_.condition));
  }
  Q_inv_ = Q_.inverse();
  if (gamma_.matrix.size() > 0) lu_.compute(gamma_.matrix);
  const CMat zq = zero_block(q_);
  const CMat pq = pole_block(q_);
  if (gamma_.matrix.size() > 0) {
    zero_block_q_ = lu_.solve(zq);                                    // Gamma^-1 K^lambda(q)
    pole_block_q_ = lu_.solve(CMat::Identity(zq.rows(), zq.rows()));  // Gamma^-1
    pole_block_q_ = pq * pole_block_q_;                               // K_mu(q) Gamma^-1
  } else {
    zero_block_q_ = CMat::Zero(0, r);
    pole_block_q_ = CMat::Zero(r, 0);
  }
}

CMat BundleMap::pole_block(cplx p) const {
  CMat out(tilde_->rank(), data_.pole_vector_count());
  int col = 0;
  for (const auto& pole : data_.poles) {
    const CMat k = (*tilde_)(p, pole.point);
    for (const auto& u : pole.u) out.col(col++) = k * u;
  }
  return out;
}

CMat BundleMap::zero_block(cplx p) const {
  CMat out(data_.zero_vector_count(), tilde_->rank());
  int row = 0;
  for (const auto& zero : data_.zeros) {
    const CMat k = (*tilde_)(zero.point, p);
    for (const auto& x : zero.x) out.row(row++) = x.transpose() * k;
  }
  return out;
}

CMat BundleMap::safe_inverse(const CMat& k, cplx p) const {
  if (!k.allFinite() || !(svd_summary(k).condition <= 1e12) || k.norm() < 1e-13) {
    throw Error(ErrorCode::KernelSingular, "input kernel singular at p = (" +
                                               std::to_string(p.real()) + ", " +
                                               std::to_string(p.imag()) + ")");
  }
  return k.inverse();
}

CMat BundleMap::bracket(cplx p) const {
  return (*tilde_)(p, q_) + pole_block(p) * zero_block_q_;
}

CMat BundleMap::operator()(cplx p) const {
  if (p == q_) return Q_;
  if (chi_->same_point(p, q_)) {
    throw Error(ErrorCode::KernelSingular, "evaluation at a lattice translate of the base point");
  }
  return bracket(p) * Q_ * safe_inverse((*chi_)(p, q_), p);
}

CMat BundleMap::inverse(cplx p) const {
  if (p == q_) return Q_inv_;
  if (chi_->same_point(p, q_)) {
    throw Error(ErrorCode::KernelSingular, "evaluation at a lattice translate of the base point");
  }
  const CMat right = (*tilde_)(q_, p) + pole_block_q_ * zero_block(p);
  return safe_inverse((*chi_)(q_, p), p) * Q_inv_ * right;
}

BundleMap build_solution(const InterpolationData& data, cplx q, const CMat& Q, KernelPtr chi,
                         KernelPtr tilde) {
  return BundleMap(data, q, Q, std::move(chi), std::move(tilde));
}

MatrixFunction build_inverse(const BundleMap& map) {
  return [&map](cplx p) { return map.inverse(p); };
}

std::vector<ResidueCheck> residue_condition_check(const InterpolationData& data, cplx q,
                                                  const CMat& Q, KernelPtr chi, KernelPtr tilde) {
  const BundleMap map(data, q, Q, chi, tilde);
  std::vector<cplx> avoid = special_points(data);
  avoid.push_back(q);
  std::vector<ResidueCheck> out;
  for (cplx pole : chi->inverse_kernel_poles(q)) {
    const SvdSummary s = svd_summary((*chi)(pole, q));
    if (!(s.singular(s.singular.size() - 1) <= 1e-8 * (1.0 + s.singular(0)))) {
      throw Error(ErrorCode::PoleLocationFailure, "input kernel is not singular at the predicted pole");
    }
    const double radius = laurent_radius(*chi, pole, avoid);
    const LaurentResult inv = laurent_matrix(
        [&](cplx p) { return CMat((*chi)(p, q).inverse()); }, pole, radius);
    const CMat k_tilde = (*tilde)(pole, q);
    const CMat correction = map.bracket(pole) - k_tilde;
    const CMat product = map.bracket(pole) * Q * inv.residue;
    const double scale = (k_tilde.norm() + correction.norm()) * Q.norm() * inv.residue.norm();
    out.push_back({pole, product.norm() / (scale + 1e-300)});
  }
  return out;
}

bool SolutionReport::pass(double gap_tol, double coupling_tol) const {
  for (double g : pole_gaps) if (!(g <= gap_tol)) return false;
  for (double g : zero_gaps) if (!(g <= gap_tol)) return false;
  for (double e : coupling_errors) if (!(e <= coupling_tol)) return false;
  return true;
}

SolutionReport verify_solution(const MatrixFunction& map, const MatrixFunction& inverse,
                               const InterpolationData& data, const KernelOracle& tilde) {
  SolutionReport report;
  const std::vector<cplx> pts = special_points(data);
  for (const auto& pole : data.poles) {
    const double radius = laurent_radius(tilde, pole.point, pts);
    const CMat res = laurent_matrix(map, pole.point, radius).residue;
    CMat basis(data.rank, static_cast<int>(pole.u.size()));
    for (size_t b = 0; b < pole.u.size(); ++b) basis.col(static_cast<int>(b)) = pole.u[b];
    report.pole_gaps.push_back(span_gap(res, basis));
  }
  for (const auto& zero : data.zeros) {
    const double radius = laurent_radius(tilde, zero.point, pts);
    const CMat res = laurent_matrix(inverse, zero.point, radius).residue.transpose();
    CMat basis(data.rank, static_cast<int>(zero.x.size()));
    for (size_t a = 0; a < zero.x.size(); ++a) basis.col(static_cast<int>(a)) = zero.x[a];
    report.zero_gaps.push_back(span_gap(res, basis));
  }
  for (size_t i = 0; i < data.zeros.size(); ++i) {
    for (size_t j = 0; j < data.poles.size(); ++j) {
      const cplx node = data.zeros[i].point;
      if (!tilde.same_point(node, data.poles[j].point)) continue;
      const double radius = laurent_radius(tilde, node, pts);
      const LaurentResult lt = laurent_matrix(map, node, radius);
      const CMat a = extract_laurent_coeffs(tilde, node).a;
      Eigen::JacobiSVD<CMat> svd(lt.residue, Eigen::ComputeFullU | Eigen::ComputeFullV);
      for (size_t al = 0; al < data.zeros[i].x.size(); ++al) {
        for (size_t be = 0; be < data.poles[j].u.size(); ++be) {
          const CVec& u = data.poles[j].u[be];
          const CVec& x = data.zeros[i].x[al];
          const CVec v = svd.solve(u);  // local section value with residue u
          const CVec u0 = lt.constant * v;
          const cplx lhs = (x.transpose() * (a * u + u0))(0, 0);
          const cplx rho = data.coupling(static_cast<int>(i), static_cast<int>(j),
                                         static_cast<int>(al), static_cast<int>(be));
          report.coupling_errors.push_back(std::abs(lhs + rho) / (1.0 + std::abs(rho)));
        }
      }
    }
  }
  return report;
}

NecessityCheck check_necessity(const Torus& torus, const Characteristic& chi,
                               const Characteristic& tilde, const Divisor& divisor) {
  if (divisor.zeros.size() != divisor.poles.size()) {
    throw Error(ErrorCode::CountMismatch, "divisor must have degree 0");
  }
  cplx d = 0;
  for (cplx z : divisor.zeros) d += z;
  for (cplx p : divisor.poles) d -= p;
  NecessityCheck out;
  std::tie(out.a, out.b) = torus.lattice_coords(d);
  const cplx z = chi.point(torus.engine().period())(0);
  const cplx zt = tilde.point(torus.engine().period())(0);
  out.defect = torus.lattice_defect(zt - z - d);
  return out;
}

ScalarMultiplicative::ScalarMultiplicative(std::shared_ptr<const Torus> torus, Divisor divisor,
                                           const Characteristic& chi,
                                           const Characteristic& tilde, cplx q, cplx Q)
    : torus_(std::move(torus)), divisor_(std::move(divisor)), q_(q), Q_(Q) {
  necessity_ = check_necessity(*torus_, chi, tilde, divisor_);
  if (necessity_.defect > 1e-9) {
    throw Error(ErrorCode::NecessityViolated,
                "lattice defect " + std::to_string(necessity_.defect));
  }
}

cplx ScalarMultiplicative::operator()(cplx p) const {
  cplx value = Q_ * std::exp(-2.0 * kPi * kI * necessity_.a * (p - q_));
  for (cplx l : divisor_.zeros) value *= torus_->prime_form(p, l) / torus_->prime_form(q_, l);
  for (cplx m : divisor_.poles) value /= torus_->prime_form(p, m) / torus_->prime_form(q_, m);
  return value;
}

InterpolationData scalar_data(const Divisor& divisor) {
  InterpolationData data;
  data.rank = 1;
  for (cplx z : divisor.zeros) data.zeros.push_back({z, {CVec::Ones(1)}});
  for (cplx p : divisor.poles) data.poles.push_back({p, {CVec::Ones(1)}});
  return data;
}

ScalarPartialFraction::ScalarPartialFraction(std::shared_ptr<const Torus> torus,
                                             const Divisor& divisor, const Characteristic& chi,
                                             const Characteristic& tilde, cplx q, cplx Q)
    : map_(scalar_data(divisor), q, CMat::Constant(1, 1, Q), line_kernel(torus, chi),
           line_kernel(torus, tilde)) {}

cplx special_partial_fraction(const Torus& torus, cplx z, cplx lam, cplx mu, cplx q, cplx Q,
                              cplx p) {
  const double a = torus.lattice_coords(lam - mu).first;
  auto th = [&](cplx w) { return torus.plain_theta(w); };
  const cplx shift = z + lam - mu;
  const cplx first = th(shift + q - p) * th(z) / (th(shift) * th(z + q - p));
  const cplx second = th(z + lam - p) * th(z + q - mu) * torus.prime_form(mu, lam) *
                      torus.prime_form(q, p) /
                      (th(shift) * th(z + q - p) * torus.prime_form(mu, p) *
                       torus.prime_form(q, lam));
  return std::exp(-2.0 * kPi * kI * a * (p - q)) * (first - second) * Q;
}

double fay_residual(const Torus& torus, cplx z, cplx p, cplx q, cplx lam, cplx mu) {
  auto th = [&](cplx w) { return torus.plain_theta(w); };
  auto e = [&](cplx x, cplx y) { return torus.prime_form(x, y); };
  const cplx t1 = th(z + lam - mu) * th(z + q - p) * e(p, lam) * e(q, mu);
  const cplx t2 = th(z + lam - p) * th(z + q - mu) * e(lam, mu) * e(q, p);
  const cplx rhs = th(z + lam - mu + q - p) * th(z) * e(p, mu) * e(q, lam);
  return relative_residual(t1 + t2, rhs);
}

double fay_residual(const SurfaceDataBundle& bundle, const CVec& z, const std::string& p,
                    const std::string& q, const std::string& lam, const std::string& mu) {
  const ThetaEngine& eng = bundle.engine();
  const CVec& fp = bundle.abel_jacobi(p);
  const CVec& fq = bundle.abel_jacobi(q);
  const CVec& fl = bundle.abel_jacobi(lam);
  const CVec& fm = bundle.abel_jacobi(mu);
  auto e = [&](const std::string& x, const std::string& y) { return bundle.prime_form(x, y); };
  const cplx t1 = eng.theta(z + fl - fm) * eng.theta(z + fq - fp) * e(p, lam) * e(q, mu);
  const cplx t2 = eng.theta(z + fl - fp) * eng.theta(z + fq - fm) * e(lam, mu) * e(q, p);
  const cplx rhs = eng.theta(z + fl - fm + fq - fp) * eng.theta(z) * e(p, mu) * e(q, lam);
  return relative_residual(t1 + t2, rhs);
}

double matrix_fay_residual(const MatrixFunction& map, const KernelOracle& chi,
                           const KernelOracle& tilde, cplx lam, cplx mu, const CVec& x,
                           const CVec& u, cplx q, const std::vector<cplx>& samples) {
  const cplx den = bilinear(x, tilde(lam, mu), u);
  if (!(std::abs(den) > 1e-10)) {
    throw Error(ErrorCode::DegenerateDenominator, "|x^T K~(lambda, mu) u| <= 1e-10");
  }
  const CMat tq_inv = map(q).inverse();
  const CMat right = x.transpose() * tilde(lam, q);
  double worst = 0;
  for (cplx p : samples) {
    const CMat lhs = map(p) * chi(p, q) * tq_inv;
    const CMat rhs = tilde(p, q) - tilde(p, mu) * u * right / den;
    worst = std::max(worst, relative_residual(lhs, rhs));
  }
  return worst;
}

FullRankSolution full_rank_multiplicative(const InterpolationData& data, KernelPtr chi,
                                          KernelPtr tilde, cplx q, const CMat& Q) {
  const int r = data.rank;
  const CMat eye = CMat::Identity(r, r);
  auto standard = [&](const std::vector<CVec>& vs) {
    if (static_cast<int>(vs.size()) != r) return false;
    for (int k = 0; k < r; ++k) {
      if ((vs[k] - eye.col(k)).norm() > 1e-14) return false;
    }
    return true;
  };
  for (const auto& z : data.zeros) {
    if (!standard(z.x)) throw Error(ErrorCode::NotFullRank, "null vectors must be e_1..e_r");
  }
  for (const auto& p : data.poles) {
    if (!standard(p.u)) throw Error(ErrorCode::NotFullRank, "pole vectors must be e_1..e_r");
  }
  if (data.zeros.size() != data.poles.size()) {
    throw Error(ErrorCode::NotSquare, "full-rank case needs equal zero and pole counts");
  }
  FullRankSolution out;
  const int n0 = static_cast<int>(data.zeros.size());
  const int ni = static_cast<int>(data.poles.size());
  out.gamma = CMat(n0 * r, ni * r);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < ni; ++j) {
      out.gamma.block(i * r, j * r, r, r) = -(*tilde)(data.zeros[i].point, data.poles[j].point);
    }
  }
  Divisor divisor;
  for (const auto& z : data.zeros) divisor.zeros.push_back(z.point);
  for (const auto& p : data.poles) divisor.poles.push_back(p.point);

  if (const Torus* torus = tilde->torus()) {
    const auto in = line_characteristics(*chi);
    const auto out_ch = line_characteristics(*tilde);
    double a_shift = 0;
    for (size_t k = 0; k < in.size(); ++k) {
      const NecessityCheck nc = check_necessity(*torus, in[k], out_ch[k], divisor);
      if (nc.defect > 1e-9) {
        throw Error(ErrorCode::NecessityViolated, "component " + std::to_string(k));
      }
      a_shift = nc.a;
    }
    out.map = [torus, divisor, q, Q, a_shift](cplx p) {
      cplx f = std::exp(-2.0 * kPi * kI * a_shift * (p - q));
      for (cplx l : divisor.zeros) f *= torus->prime_form(p, l) / torus->prime_form(q, l);
      for (cplx m : divisor.poles) f /= torus->prime_form(p, m) / torus->prime_form(q, m);
      return CMat(f * Q);
    };
  } else {
    out.map = [divisor, q, Q](cplx p) {
      cplx f = 1.0;
      for (cplx l : divisor.zeros) f *= (p - l) / (q - l);
      for (cplx m : divisor.poles) f /= (p - m) / (q - m);
      return CMat(f * Q);
    };
  }
  return out;
}

}  // namespace zpole
