#include "zpole/detrep.hpp"

#include <array>
#include <cmath>

#include <nlohmann/json.hpp>

#include "zpole/io.hpp"
#include "zpole/numerics.hpp"

namespace zpole {

CMat PencilRep::at(cplx z1, cplx z2) const { return z1 * sigma2 - z2 * sigma1 + gamma; }

CMat PencilRep::at_point(const EmbeddingPair& embedding, cplx p) const {
  const Eigen::Vector2cd z = embedding.values(p);
  return at(z(0), z(1));
}

namespace {

void require_same_torus(const KernelOracle& oracle, const EmbeddingPair& embedding) {
  const Torus* t = oracle.torus();
  if (!t || t->tau() != embedding.torus().tau()) {
    throw Error(ErrorCode::SurfaceMismatch, "kernel and embedding on different surfaces");
  }
}

}  // namespace

PencilRep build_pencil(const KernelOracle& oracle, const EmbeddingPair& embedding) {
  require_same_torus(oracle, embedding);
  const int r = oracle.rank();
  const int m = embedding.m();
  const CMat& c = embedding.residue_table();
  const CMat& d = embedding.const_table();
  const auto& x = embedding.poles();
  PencilRep out;
  out.m = m;
  out.r = r;
  const int M = m * r;
  out.sigma1 = CMat::Zero(M, M);
  out.sigma2 = CMat::Zero(M, M);
  out.gamma = CMat::Zero(M, M);
  const CMat eye = CMat::Identity(r, r);
  for (int i = 0; i < m; ++i) {
    out.sigma1.block(i * r, i * r, r, r) = c(i, 0) * eye;
    out.sigma2.block(i * r, i * r, r, r) = c(i, 1) * eye;
    for (int j = 0; j < m; ++j) {
      if (i == j) {
        out.gamma.block(i * r, i * r, r, r) = (d(i, 0) * c(i, 1) - d(i, 1) * c(i, 0)) * eye;
        continue;
      }
      const cplx w = c(i, 0) * c(j, 1) - c(j, 0) * c(i, 1);
      if (w == 0.0) continue;
      out.gamma.block(i * r, j * r, r, r) = w * oracle(x[i], x[j]);
    }
  }
  return out;
}

NormalizedSections::NormalizedSections(KernelPtr oracle, EmbeddingPair embedding)
    : oracle_(std::move(oracle)), embedding_(std::move(embedding)) {
  require_same_torus(*oracle_, embedding_);
}

CMat NormalizedSections::cross(cplx p) const {
  const int r = oracle_->rank();
  CMat out(embedding_.m() * r, r);
  for (int i = 0; i < embedding_.m(); ++i) {
    out.block(i * r, 0, r, r) = (*oracle_)(embedding_.poles()[i], p);
  }
  return out;
}

CMat NormalizedSections::cross_left(cplx p) const {
  const int r = oracle_->rank();
  CMat out(r, embedding_.m() * r);
  for (int i = 0; i < embedding_.m(); ++i) {
    out.block(0, i * r, r, r) = -(*oracle_)(p, embedding_.poles()[i]);
  }
  return out;
}

NormalizedSections normalized_sections(KernelPtr oracle, const EmbeddingPair& embedding) {
  return NormalizedSections(std::move(oracle), embedding);
}

IdentityResiduals check_kernel_identities(const PencilRep& pencil,
                                          const NormalizedSections& sections, cplx p,
                                          const Eigen::Vector2cd& xi) {
  const EmbeddingPair& emb = sections.embedding();
  if (emb.is_pole(p)) throw Error(ErrorCode::PointOnPoleSet, "sample point is an embedding pole");
  const CMat u = pencil.at_point(emb, p);
  const CMat right = sections.cross(p);
  const CMat left = sections.cross_left(p);
  IdentityResiduals out;
  out.right = (u * right).norm() / (u.norm() * right.norm());
  out.left = (left * u).norm() / (u.norm() * left.norm());
  const Eigen::Vector2cd dl = emb.first_derivatives(p);
  const CMat weight = xi(0) * pencil.sigma1 + xi(1) * pencil.sigma2;
  const CMat pairing = left * weight * right / (xi(0) * dl(0) + xi(1) * dl(1));
  out.pairing = relative_residual(pairing, CMat::Identity(pairing.rows(), pairing.cols()));
  return out;
}

Membership pencil_membership(const PencilRep& pencil, cplx z1, cplx z2) {
  const SvdSummary s = svd_summary(pencil.at(z1, z2));
  const int n = static_cast<int>(s.singular.size());
  Membership out;
  out.relative_det = 1.0;
  for (int k = n - pencil.r; k < n; ++k) out.relative_det *= s.singular(k) / s.singular(0);
  out.relative_det = std::pow(out.relative_det, 1.0 / pencil.r);
  int best = -1;
  for (int k = 0; k + 1 < n; ++k) {
    const double ratio = s.singular(k + 1) > 0 ? s.singular(k) / s.singular(k + 1) : INFINITY;
    if (ratio > out.gap_ratio) {
      out.gap_ratio = ratio;
      best = k;
    }
  }
  out.kernel_dim = (best >= 0 && out.gap_ratio >= 1e6) ? n - 1 - best : 0;
  return out;
}

Membership curve_membership(const PencilRep& pencil, const EmbeddingPair& embedding, cplx p) {
  if (embedding.is_pole(p)) throw Error(ErrorCode::PointOnPoleSet, "sample point is an embedding pole");
  const Eigen::Vector2cd z = embedding.values(p);
  return pencil_membership(pencil, z(0), z(1));
}

PencilRep adjust_gamma_by_map(const PencilRep& pencil, const std::vector<CMat>& boundary_values) {
  if (static_cast<int>(boundary_values.size()) != pencil.m) {
    throw Error(ErrorCode::InputError, "need one boundary value per embedding pole");
  }
  const int r = pencil.r;
  std::vector<CMat> inverses;
  for (const CMat& t : boundary_values) {
    if (t.rows() != r || t.cols() != r || !(svd_summary(t).condition <= 1e12)) {
      throw Error(ErrorCode::SingularBoundaryValue, "map value at an embedding pole is singular");
    }
    inverses.push_back(t.inverse());
  }
  PencilRep out = pencil;
  for (int i = 0; i < pencil.m; ++i) {
    for (int j = 0; j < pencil.m; ++j) {
      out.gamma.block(i * r, j * r, r, r) =
          boundary_values[i] * pencil.gamma.block(i * r, j * r, r, r) * inverses[j];
    }
  }
  return out;
}

double line_section_condition(const KernelOracle& oracle, const EmbeddingPair& embedding,
                              cplx y1, cplx y2) {
  require_same_torus(oracle, embedding);
  const auto& x = embedding.poles();
  const std::array<cplx, 3> y = {y1, y2, x[0] + x[1] + x[2] - y1 - y2};
  for (cplx a : y) {
    if (embedding.is_pole(a, 1e-6)) {
      throw Error(ErrorCode::PointOnPoleSet, "line section meets the line at infinity");
    }
  }
  const int r = oracle.rank();
  CMat block(3 * r, 3 * r);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) block.block(i * r, j * r, r, r) = oracle(x[i], y[j]);
  }
  return svd_summary(block).condition;
}

nlohmann::json pencil_to_json(const PencilRep& pencil) {
  return {{"M", pencil.size()},
          {"m", pencil.m},
          {"r", pencil.r},
          {"sigma1", io::to_json(pencil.sigma1)},
          {"sigma2", io::to_json(pencil.sigma2)},
          {"gamma", io::to_json(pencil.gamma)}};
}

PencilRep pencil_from_json(const nlohmann::json& j) {
  PencilRep p;
  const int M = j.at("M").get<int>();
  p.r = j.value("r", 1);
  p.m = j.value("m", M / std::max(1, p.r));
  if (M <= 0 || p.m * p.r != M) throw Error(ErrorCode::InputError, "pencil size must equal m * r");
  p.sigma1 = io::matrix_from(j.at("sigma1"), M, M);
  p.sigma2 = io::matrix_from(j.at("sigma2"), M, M);
  p.gamma = io::matrix_from(j.at("gamma"), M, M);
  return p;
}

}  // namespace zpole
