#include "zpole/conint.hpp"

#include <cmath>

#include "zpole/numerics.hpp"

namespace zpole {
namespace {

cplx pair_xi(const Eigen::Vector2cd& xi, cplx a1, cplx a2) { return xi(0) * a1 + xi(1) * a2; }

CMat weighted_sigma(const PencilRep& pencil, const Eigen::Vector2cd& xi) {
  return xi(0) * pencil.sigma1 + xi(1) * pencil.sigma2;
}

double independence(const CMat& columns) {
  const SvdSummary s = svd_summary(columns);
  return s.singular(s.singular.size() - 1) / s.singular(0);
}

// Rows x^T K~(lambda_i, p), stacked over all null vectors.
CMat zero_rows(const InterpolationData& data, const KernelOracle& tilde, cplx p) {
  CMat out(data.zero_vector_count(), data.rank);
  int row = 0;
  for (const auto& z : data.zeros) {
    const CMat k = tilde(z.point, p);
    for (const auto& x : z.x) out.row(row++) = x.transpose() * k;
  }
  return out;
}

// Columns K~(p, mu_j) u, stacked over all pole vectors.
CMat pole_columns(const InterpolationData& data, const KernelOracle& tilde, cplx p) {
  CMat out(data.rank, data.pole_vector_count());
  int col = 0;
  for (const auto& pole : data.poles) {
    const CMat k = tilde(p, pole.point);
    for (const auto& u : pole.u) out.col(col++) = k * u;
  }
  return out;
}

}  // namespace

bool ConintData::coincide(int zero, int pole) const {
  const CurvePoint& a = zeros[zero].point;
  const CurvePoint& b = poles[pole].point;
  if (torus && a.surface && b.surface) return torus->same_point(*a.surface, *b.surface, 1e-9);
  const double scale = std::max({1.0, std::abs(a.z1), std::abs(a.z2)});
  return std::abs(a.z1 - b.z1) + std::abs(a.z2 - b.z2) <= 1e-12 * scale;
}

cplx ConintData::coupling(int zero, int pole, int alpha, int beta) const {
  for (const auto& c : couplings) {
    if (c.zero == zero && c.pole == pole && c.alpha == alpha && c.beta == beta) return c.rho;
  }
  throw Error(ErrorCode::InvalidProblem, "missing coupling number for zero " +
                                             std::to_string(zero) + ", pole " +
                                             std::to_string(pole));
}

int ConintData::zero_vector_count() const {
  int n = 0;
  for (const auto& z : zeros) n += static_cast<int>(z.psi.size());
  return n;
}

int ConintData::pole_vector_count() const {
  int n = 0;
  for (const auto& p : poles) n += static_cast<int>(p.phi.size());
  return n;
}

void ConintData::validate() const {
  const int M = reference.size();
  for (const auto& z : zeros) {
    if (z.psi.empty()) throw Error(ErrorCode::InvalidProblem, "zero without null vectors");
    const CMat u = reference.at(z.point.z1, z.point.z2);
    CMat rows(static_cast<int>(z.psi.size()), M);
    for (size_t a = 0; a < z.psi.size(); ++a) {
      if (z.psi[a].size() != M) throw Error(ErrorCode::InvalidProblem, "null vector has wrong length");
      if ((z.psi[a] * u).norm() > 1e-8 * z.psi[a].norm() * u.norm()) {
        throw Error(ErrorCode::InvalidProblem, "null vector not in the left kernel");
      }
      rows.row(static_cast<int>(a)) = z.psi[a];
    }
    if (independence(rows.transpose()) <= 1e-10) {
      throw Error(ErrorCode::InvalidProblem, "null vectors are dependent");
    }
  }
  for (const auto& p : poles) {
    if (p.phi.empty()) throw Error(ErrorCode::InvalidProblem, "pole without pole vectors");
    const CMat u = reference.at(p.point.z1, p.point.z2);
    CMat cols(M, static_cast<int>(p.phi.size()));
    for (size_t b = 0; b < p.phi.size(); ++b) {
      if (p.phi[b].size() != M) throw Error(ErrorCode::InvalidProblem, "pole vector has wrong length");
      if ((u * p.phi[b]).norm() > 1e-8 * p.phi[b].norm() * u.norm()) {
        throw Error(ErrorCode::InvalidProblem, "pole vector not in the kernel");
      }
      cols.col(static_cast<int>(b)) = p.phi[b];
    }
    if (independence(cols) <= 1e-10) throw Error(ErrorCode::InvalidProblem, "pole vectors are dependent");
  }
  for (size_t i = 0; i < zeros.size(); ++i) {
    for (size_t j = 0; j < poles.size(); ++j) {
      if (!coincide(static_cast<int>(i), static_cast<int>(j))) continue;
      for (size_t a = 0; a < zeros[i].psi.size(); ++a) {
        for (size_t b = 0; b < poles[j].phi.size(); ++b) {
          coupling(static_cast<int>(i), static_cast<int>(j), static_cast<int>(a),
                   static_cast<int>(b));
        }
      }
    }
  }
}

BlockMatrices block_matrices(const ConintData& data) {
  const int M = data.reference.size();
  const int ni = data.pole_vector_count();
  const int n0 = data.zero_vector_count();
  BlockMatrices b;
  b.A1 = CMat::Zero(ni, ni);
  b.A2 = CMat::Zero(ni, ni);
  b.Z1 = CMat::Zero(n0, n0);
  b.Z2 = CMat::Zero(n0, n0);
  b.phi = CMat(M, ni);
  b.psi = CMat(n0, M);
  int col = 0;
  for (const auto& p : data.poles) {
    for (const auto& v : p.phi) {
      b.A1(col, col) = p.point.z1;
      b.A2(col, col) = p.point.z2;
      b.phi.col(col++) = v;
    }
  }
  int row = 0;
  for (const auto& z : data.zeros) {
    for (const auto& w : z.psi) {
      b.Z1(row, row) = z.point.z1;
      b.Z2(row, row) = z.point.z2;
      b.psi.row(row++) = w;
    }
  }
  return b;
}

CMat build_gamma0(const ConintData& data, const Eigen::Vector2cd& xi) {
  const CMat weight = weighted_sigma(data.reference, xi);
  CMat g(data.zero_vector_count(), data.pole_vector_count());
  int row = 0;
  for (size_t i = 0; i < data.zeros.size(); ++i) {
    const auto& z = data.zeros[i];
    for (size_t a = 0; a < z.psi.size(); ++a, ++row) {
      int col = 0;
      for (size_t j = 0; j < data.poles.size(); ++j) {
        const auto& p = data.poles[j];
        const bool same = data.coincide(static_cast<int>(i), static_cast<int>(j));
        const cplx den = pair_xi(xi, p.point.z1 - z.point.z1, p.point.z2 - z.point.z2);
        if (!same) {
          const double scale = std::max({1.0, std::abs(p.point.z1), std::abs(p.point.z2)});
          if (std::abs(den) <= 1e-12 * scale) {
            throw Error(ErrorCode::XiDenominatorZero, "xi pairs a zero and a pole to zero");
          }
        }
        for (size_t b = 0; b < p.phi.size(); ++b, ++col) {
          g(row, col) = same ? -data.coupling(static_cast<int>(i), static_cast<int>(j),
                                              static_cast<int>(a), static_cast<int>(b))
                             : (z.psi[a] * weight * p.phi[b])(0, 0) / den;
        }
      }
    }
  }
  return g;
}

ConintSolution::ConintSolution(const ConintData& data, const Eigen::Vector2cd& xi)
    : data_(data), xi_(xi) {
  data_.validate();
  const CMat weight = weighted_sigma(data_.reference, xi_);
  for (size_t i = 0; i < data_.zeros.size(); ++i) {
    for (size_t j = 0; j < data_.poles.size(); ++j) {
      if (!data_.coincide(static_cast<int>(i), static_cast<int>(j))) continue;
      for (const auto& w : data_.zeros[i].psi) {
        for (const auto& v : data_.poles[j].phi) {
          const double scale = std::max(1.0, w.norm() * weight.norm() * v.norm());
          if (std::abs((w * weight * v)(0, 0)) > 1e-10 * scale) {
            throw Error(ErrorCode::ZPViolated, "zero and pole vectors not orthogonal at a coincidence");
          }
        }
      }
    }
  }
  blocks_ = block_matrices(data_);
  gamma0_ = build_gamma0(data_, xi_);
  if (gamma0_.rows() != gamma0_.cols()) {
    throw Error(ErrorCode::NotSquare, std::to_string(gamma0_.rows()) + " x " +
                                          std::to_string(gamma0_.cols()));
  }
  pencil_ = data_.reference;
  if (gamma0_.size() == 0) {
    gamma0_inv_ = gamma0_;
    return;
  }
  const double cond = svd_summary(gamma0_).condition;
  if (!(cond <= 1e12)) {
    throw Error(ErrorCode::SingularGamma0, "condition number " + std::to_string(cond));
  }
  gamma0_inv_ = gamma0_.inverse();
  const CMat core = blocks_.phi * gamma0_inv_ * blocks_.psi;
  const CMat& s1 = data_.reference.sigma1;
  const CMat& s2 = data_.reference.sigma2;
  pencil_.gamma = data_.reference.gamma - s1 * core * s2 + s2 * core * s1;
}

CMat ConintSolution::S(cplx z1, cplx z2) const {
  const int M = pencil_.size();
  CMat out = CMat::Identity(M, M);
  if (gamma0_.size() == 0) return out;
  const int n = static_cast<int>(blocks_.A1.rows());
  CMat diag_inv = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    diag_inv(k, k) = 1.0 / pair_xi(xi_, z1 - blocks_.A1(k, k), z2 - blocks_.A2(k, k));
  }
  return out + blocks_.phi * diag_inv * gamma0_inv_ * blocks_.psi *
                   weighted_sigma(data_.reference, xi_);
}

CMat ConintSolution::S_left_inverse(cplx z1, cplx z2) const {
  const int M = pencil_.size();
  CMat out = CMat::Identity(M, M);
  if (gamma0_.size() == 0) return out;
  const int n = static_cast<int>(blocks_.Z1.rows());
  CMat diag_inv = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    diag_inv(k, k) = 1.0 / pair_xi(xi_, z1 - blocks_.Z1(k, k), z2 - blocks_.Z2(k, k));
  }
  return out - weighted_sigma(data_.reference, xi_) * blocks_.phi * gamma0_inv_ * diag_inv *
                   blocks_.psi;
}

CVec ConintSolution::apply_S(cplx z1, cplx z2, const CVec& v) const {
  const CMat basis = right_kernel(pencil_.at(z1, z2), pencil_.r);
  return S(z1, z2) * (basis * (basis.adjoint() * v));
}

ConintSolution solve_conint(const ConintData& data, const Eigen::Vector2cd& xi) {
  return ConintSolution(data, xi);
}

ConintData convert_absint_to_conint(const InterpolationData& data, KernelPtr tilde,
                                    const EmbeddingPair& embedding,
                                    const PencilRep& tilde_pencil) {
  for (const auto& z : data.zeros) {
    if (embedding.is_pole(z.point, 1e-6)) {
      throw Error(ErrorCode::PoleCollision, "a zero sits on an embedding pole");
    }
  }
  for (const auto& p : data.poles) {
    if (embedding.is_pole(p.point, 1e-6)) {
      throw Error(ErrorCode::PoleCollision, "a pole sits on an embedding pole");
    }
  }
  const NormalizedSections sections(tilde, embedding);
  ConintData out;
  out.reference = tilde_pencil;
  out.torus = embedding.torus_ptr();
  out.couplings = data.couplings;
  auto curve_point = [&](cplx p) {
    const Eigen::Vector2cd z = embedding.values(p);
    return CurvePoint{z(0), z(1), p};
  };
  for (const auto& z : data.zeros) {
    ConintData::Zero zero{curve_point(z.point), {}};
    const CMat left = sections.cross_left(z.point);
    for (const auto& x : z.x) zero.psi.push_back(x.transpose() * left);
    out.zeros.push_back(std::move(zero));
  }
  for (const auto& p : data.poles) {
    ConintData::Pole pole{curve_point(p.point), {}};
    const CMat right = sections.cross(p.point);
    for (const auto& u : p.u) pole.phi.push_back(right * u);
    out.poles.push_back(std::move(pole));
  }
  return out;
}

double check_gamma_equality(const InterpolationData& data, const KernelOracle& tilde,
                            const ConintData& converted, const Eigen::Vector2cd& xi) {
  const CMat gamma = build_gamma(data, tilde).matrix;
  const CMat gamma0 = build_gamma0(converted, xi);
  if (gamma.rows() != gamma0.rows() || gamma.cols() != gamma0.cols()) return INFINITY;
  if (gamma.size() == 0) return 0.0;
  return (gamma - gamma0).cwiseAbs().maxCoeff() / gamma.cwiseAbs().maxCoeff();
}

double check_intertwining(const ConintSolution& solution, const MatrixFunction& map,
                          const NormalizedSections& input_sections,
                          const NormalizedSections& output_sections,
                          const std::vector<cplx>& excluded, cplx p) {
  const EmbeddingPair& emb = output_sections.embedding();
  const Torus& torus = emb.torus();
  for (cplx e : excluded) {
    if (torus.same_point(p, e, 1e-6)) {
      throw Error(ErrorCode::PointOnExcludedSet, "sample point is a zero, pole or base point");
    }
  }
  if (emb.is_pole(p, 1e-6)) throw Error(ErrorCode::PointOnExcludedSet, "sample point is at infinity");
  const int r = input_sections.oracle().rank();
  const int m = emb.m();
  CMat boundary = CMat::Zero(m * r, m * r);
  for (int i = 0; i < m; ++i) boundary.block(i * r, i * r, r, r) = map(emb.poles()[i]);
  const Eigen::Vector2cd z = emb.values(p);
  const CMat lhs = solution.S(z(0), z(1)) * boundary * input_sections.cross(p);
  const CMat rhs = output_sections.cross(p) * map(p);
  return relative_residual(lhs, rhs);
}

double kernel_mapping_residual(const ConintSolution& solution, const PencilRep& reference,
                               cplx z1, cplx z2) {
  const CMat basis = right_kernel(solution.pencil().at(z1, z2), solution.pencil().r);
  const CMat image = solution.S(z1, z2) * basis;
  const CMat u = reference.at(z1, z2);
  return (u * image).norm() / (u.norm() * image.norm());
}

cplx coupling_condition_value(const ConintSolution& solution, const ConintData& data,
                              const EmbeddingPair& embedding, int zero, int pole, int alpha,
                              int beta) {
  if (!data.coincide(zero, pole)) throw Error(ErrorCode::NoCoincidence, "zero and pole differ");
  const auto& node_opt = data.zeros[zero].point.surface;
  if (!node_opt) throw Error(ErrorCode::NoCoincidence, "coincidence needs a surface point");
  const cplx node = *node_opt;
  const PencilRep& pencil = solution.pencil();
  const int M = pencil.size();
  const int r = pencil.r;

  // Holomorphic frame of the left kernel near the node: bottom-left block of
  // the inverse of the bordered pencil.
  const CMat at_node = pencil.at_point(embedding, node);
  const CMat left = left_kernel(at_node, r);    // r x M
  const CMat right = right_kernel(at_node, r);  // M x r
  const CMat border_right = left.adjoint();
  const CMat border_bottom = right.adjoint();
  auto frame = [&](cplx p) {
    CMat bordered = CMat::Zero(M + r, M + r);
    bordered.topLeftCorner(M, M) = pencil.at_point(embedding, p);
    bordered.topRightCorner(M, r) = border_right;
    bordered.bottomLeftCorner(r, M) = border_bottom;
    return CMat(bordered.inverse().bottomLeftCorner(r, M));
  };
  auto section = [&](cplx p) {
    const Eigen::Vector2cd z = embedding.values(p);
    return CMat((p - node) * frame(p) * solution.S_left_inverse(z(0), z(1)));
  };

  double isolation = 0.25;
  auto consider = [&](const std::optional<cplx>& s) {
    if (s && !embedding.torus().same_point(*s, node, 1e-9)) {
      isolation = std::min(isolation, embedding.torus().lattice_defect(*s - node));
    }
  };
  for (const auto& z : data.zeros) consider(z.point.surface);
  for (const auto& p : data.poles) consider(p.point.surface);
  for (cplx x : embedding.poles()) consider(x);
  const double radius = std::min(0.05, 0.25 * isolation);
  const std::vector<CMat> coeffs = circle_coefficients(section, node, radius, 0, 1, 64);

  const CRow& psi = data.zeros[zero].psi[alpha];
  const CVec& phi = data.poles[pole].phi[beta];
  const CVec c = coeffs[0].transpose().jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                     .solve(psi.transpose());
  const CRow psi1 = c.transpose() * coeffs[1];

  const Eigen::Vector2cd d1 = embedding.first_derivatives(node);
  const Eigen::Vector2cd d2 = embedding.second_derivatives(node);
  const Eigen::Vector2cd& xi = solution.xi();
  const cplx w1 = xi(0) * d1(0) + xi(1) * d1(1);
  const cplx w2 = xi(0) * d2(0) + xi(1) * d2(1);
  const CMat weight = weighted_sigma(data.reference, xi);
  return (psi1 * weight * phi)(0, 0) / w1 -
         (psi * weight * phi)(0, 0) * w2 / (2.0 * w1 * w1);
}

double check_coupling_condition(const ConintSolution& solution, const ConintData& data,
                          const EmbeddingPair& embedding, int zero, int pole, int alpha,
                          int beta, cplx rho) {
  const cplx value =
      coupling_condition_value(solution, data, embedding, zero, pole, alpha, beta);
  return std::abs(value - rho) / std::max(1.0, std::abs(rho));
}

ConsequenceResiduals consequence_residuals(const InterpolationData& data,
                                           const KernelOracle& tilde,
                                           const EmbeddingPair& embedding, cplx p,
                                           const Eigen::Vector2cd& xi) {
  const CMat& c = embedding.residue_table();
  const CMat gamma = build_gamma(data, tilde).matrix;
  const int n0 = data.zero_vector_count();
  const int ni = data.pole_vector_count();
  CMat first = CMat::Zero(n0, data.rank);
  CMat second = CMat::Zero(n0, ni);
  for (int j = 0; j < embedding.m(); ++j) {
    const cplx w = xi(0) * c(j, 0) + xi(1) * c(j, 1);
    const cplx x = embedding.poles()[j];
    const CMat rows = zero_rows(data, tilde, x);
    first += w * rows * tilde(x, p);
    second += w * rows * pole_columns(data, tilde, x);
  }
  const Eigen::Vector2cd fp = embedding.values(p);
  CMat lam_diag = CMat::Zero(n0, n0);
  CMat shift = CMat::Zero(n0, n0);
  int row = 0;
  for (const auto& z : data.zeros) {
    const Eigen::Vector2cd fz = embedding.values(z.point);
    for (size_t a = 0; a < z.x.size(); ++a, ++row) {
      lam_diag(row, row) = pair_xi(xi, fz(0), fz(1));
      shift(row, row) = pair_xi(xi, fp(0) - fz(0), fp(1) - fz(1));
    }
  }
  CMat mu_diag = CMat::Zero(ni, ni);
  int col = 0;
  for (const auto& pole : data.poles) {
    const Eigen::Vector2cd fm = embedding.values(pole.point);
    for (size_t b = 0; b < pole.u.size(); ++b, ++col) mu_diag(col, col) = pair_xi(xi, fm(0), fm(1));
  }
  ConsequenceResiduals out;
  out.first = relative_residual(first, CMat(shift * zero_rows(data, tilde, p)));
  out.second = relative_residual(second, CMat(lam_diag * gamma - gamma * mu_diag));
  return out;
}

}  // namespace zpole
