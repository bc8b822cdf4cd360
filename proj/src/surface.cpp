#include "zpole/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "zpole/io.hpp"
#include "zpole/numerics.hpp"

namespace zpole {
namespace {

CVec one(cplx w) {
  CVec v(1);
  v(0) = w;
  return v;
}

}  // namespace

Torus::Torus(cplx tau, ThetaConfig cfg)
    : tau_(tau), engine_(PeriodMatrix::genus1(tau), cfg) {
  odd_prime_zero_ = theta_char_derivative(Characteristic::half_odd(), 0.0);
}

std::pair<double, double> Torus::lattice_coords(cplx w) const {
  const double s = w.imag() / tau_.imag();
  return {s, w.real() - s * tau_.real()};
}

cplx Torus::reduce(cplx p) const {
  auto [s, t] = lattice_coords(p);
  return p - std::floor(s) * tau_ - std::floor(t);
}

double Torus::lattice_defect(cplx w) const {
  auto [s, t] = lattice_coords(w);
  const double s0 = std::round(s);
  const double t0 = std::round(t);
  double best = INFINITY;
  for (int ds = -1; ds <= 1; ++ds) {
    for (int dt = -1; dt <= 1; ++dt) {
      best = std::min(best, std::abs(w - (s0 + ds) * tau_ - (t0 + dt)));
    }
  }
  return best;
}

bool Torus::same_point(cplx p, cplx q, double tol) const {
  const double scale = std::max({1.0, std::abs(p), std::abs(q)});
  return lattice_defect(p - q) <= tol * scale;
}

cplx Torus::theta_char(const Characteristic& ch, cplx w) const {
  return engine_.theta_char(ch, one(w));
}

cplx Torus::theta_char_derivative(const Characteristic& ch, cplx w) const {
  return engine_.gradient(ch, one(w))(0);
}

cplx Torus::plain_theta(cplx w) const { return engine_.theta(one(w)); }

cplx Torus::plain_theta_derivative(cplx w) const {
  return engine_.gradient(Characteristic::zero(1), one(w))(0);
}

cplx Torus::odd_log_derivative(cplx w) const {
  const ThetaValue v = engine_.value_and_gradient(Characteristic::half_odd(), one(w));
  return v.gradient(0) / v.value;
}

cplx Torus::prime_form(cplx p, cplx q) const {
  if (same_point(p, q)) return 0.0;
  return odd_theta(q - p) / odd_prime_zero_;
}

bool Torus::nondegenerate(const Characteristic& ch) const {
  return std::abs(theta_char(ch, 0.0)) > 1e-10;
}

SurfaceDataBundle::SurfaceDataBundle(PeriodMatrix period, std::vector<Point> points,
                                     CMat prime_form, std::vector<CVec> differentials,
                                     ThetaConfig cfg)
    : engine_(std::move(period), cfg),
      points_(std::move(points)),
      prime_(std::move(prime_form)),
      differentials_(std::move(differentials)) {
  const int n = static_cast<int>(points_.size());
  const int g = engine_.genus();
  if (prime_.rows() != n || prime_.cols() != n) {
    throw Error(ErrorCode::InputError, "prime form table must be n x n");
  }
  for (const auto& p : points_) {
    if (p.phi.size() != g) throw Error(ErrorCode::InputError, "phi of '" + p.label + "' has wrong length");
  }
  if (!differentials_.empty() && static_cast<int>(differentials_.size()) != n) {
    throw Error(ErrorCode::InputError, "one differential vector per point expected");
  }
  for (int i = 0; i < n; ++i) {
    if (prime_(i, i) != cplx(0.0)) throw Error(ErrorCode::InputError, "prime form diagonal must be 0");
    for (int k = i + 1; k < n; ++k) {
      const double scale = std::max(1.0, std::abs(prime_(i, k)));
      if (std::abs(prime_(i, k) + prime_(k, i)) > 1e-12 * scale) {
        throw Error(ErrorCode::InputError, "prime form table not antisymmetric");
      }
    }
  }
}

SurfaceDataBundle SurfaceDataBundle::from_json(const nlohmann::json& j) {
  try {
    const int g = j.at("genus").get<int>();
    CMat omega = io::matrix_from(j.at("omega"), g, g);
    std::vector<Point> points;
    for (const auto& p : j.at("points")) {
      points.push_back({p.at("label").get<std::string>(), io::vector_from(p.at("phi"))});
    }
    const int n = static_cast<int>(points.size());
    const auto& upper = j.at("prime_form");
    if (static_cast<int>(upper.size()) != n * (n - 1) / 2) {
      throw Error(ErrorCode::InputError, "prime_form must list the strict upper triangle");
    }
    CMat prime = CMat::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int k = i + 1; k < n; ++k) {
        prime(i, k) = io::complex_from(upper[idx++]);
        prime(k, i) = -prime(i, k);
      }
    }
    std::vector<CVec> diffs;
    if (j.contains("differentials")) {
      for (const auto& d : j.at("differentials")) diffs.push_back(io::vector_from(d));
    }
    ThetaConfig cfg;
    if (j.contains("theta")) {
      cfg.target_abs_error = j["theta"].value("target_abs_error", cfg.target_abs_error);
      cfg.max_lattice_radius = j["theta"].value("max_lattice_radius", cfg.max_lattice_radius);
    }
    return SurfaceDataBundle(PeriodMatrix(omega), std::move(points), prime, std::move(diffs), cfg);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, e.what());
  }
}

int SurfaceDataBundle::index(const std::string& label) const {
  for (size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].label == label) return static_cast<int>(i);
  }
  throw Error(ErrorCode::UnknownPoint, label);
}

const CVec& SurfaceDataBundle::abel_jacobi(const std::string& label) const {
  return points_[index(label)].phi;
}

cplx SurfaceDataBundle::prime_form(const std::string& p, const std::string& q) const {
  return prime_(index(p), index(q));
}

const CVec& SurfaceDataBundle::differentials(const std::string& label) const {
  const int i = index(label);
  if (differentials_.empty()) throw Error(ErrorCode::UnknownPoint, "no differentials stored");
  return differentials_[i];
}

EmbeddingPair::EmbeddingPair(std::shared_ptr<const Torus> torus, std::array<cplx, 3> poles)
    : torus_(std::move(torus)), poles_(poles), c_(3, 2), d_(3, 2) {
  for (int i = 0; i < 3; ++i) {
    for (int k = i + 1; k < 3; ++k) {
      if (torus_->same_point(poles_[i], poles_[k], 1e-8)) {
        throw Error(ErrorCode::DegenerateEmbedding, "embedding poles must be distinct");
      }
    }
  }
  c_ << -1, -1,
         1,  0,
         0,  1;
  double spacing = INFINITY;
  for (int i = 0; i < 3; ++i) {
    for (int k = i + 1; k < 3; ++k) {
      spacing = std::min(spacing, torus_->lattice_defect(poles_[i] - poles_[k]));
    }
  }
  const double radius = std::min(1e-2, 0.1 * spacing);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 2; ++k) {
      const ScalarLaurent l =
          laurent_coeffs([&](cplx z) { return value(k, z); }, poles_[i], radius);
      if (std::abs(l.residue + c_(i, k)) > 1e-8) {
        throw Error(ErrorCode::DegenerateEmbedding, "residue table mismatch");
      }
      d_(i, k) = -l.constant;
    }
  }
}

cplx EmbeddingPair::value(int k, cplx p) const {
  const cplx other = k == 0 ? poles_[1] : poles_[2];
  return torus_->odd_log_derivative(p - poles_[0]) - torus_->odd_log_derivative(p - other);
}

Eigen::Vector2cd EmbeddingPair::values(cplx p) const {
  const cplx l0 = torus_->odd_log_derivative(p - poles_[0]);
  return {l0 - torus_->odd_log_derivative(p - poles_[1]),
          l0 - torus_->odd_log_derivative(p - poles_[2])};
}

namespace {

// Taylor coefficients of both coordinates from a Cauchy circle; far more
// accurate than difference stencils for these analytic functions.
std::vector<CMat> embedding_taylor(const EmbeddingPair& pair, const Torus& torus,
                                   const std::array<cplx, 3>& poles, cplx p, int kmax) {
  double isolation = INFINITY;
  for (cplx x : poles) isolation = std::min(isolation, torus.lattice_defect(p - x));
  const double radius = std::min(0.05, 0.25 * isolation);
  return circle_coefficients(
      [&](cplx z) {
        CMat v(2, 1);
        v << pair.value(0, z), pair.value(1, z);
        return v;
      },
      p, radius, 1, kmax, 64);
}

}  // namespace

Eigen::Vector2cd EmbeddingPair::first_derivatives(cplx p) const {
  const CMat a1 = embedding_taylor(*this, *torus_, poles_, p, 1)[0];
  return {a1(0, 0), a1(1, 0)};
}

Eigen::Vector2cd EmbeddingPair::second_derivatives(cplx p) const {
  const CMat a2 = embedding_taylor(*this, *torus_, poles_, p, 2)[1];
  return {2.0 * a2(0, 0), 2.0 * a2(1, 0)};
}

bool EmbeddingPair::is_pole(cplx p, double tol) const {
  for (cplx x : poles_) {
    if (torus_->same_point(p, x, tol)) return true;
  }
  return false;
}

EmbeddingPair build_embedding_functions(std::shared_ptr<const Torus> torus, cplx x1,
                                        cplx x2, cplx x3) {
  EmbeddingPair pair(torus, {x1, x2, x3});
  // Injectivity probe on a grid of the fundamental domain.
  constexpr int kGrid = 7;
  std::vector<cplx> pts;
  std::vector<Eigen::Vector2cd> images;
  for (int i = 0; i < kGrid; ++i) {
    for (int k = 0; k < kGrid; ++k) {
      const cplx p = (i + 0.5) / kGrid * torus->tau() + (k + 0.5) / kGrid;
      if (pair.is_pole(p, 0.05)) continue;
      pts.push_back(p);
      images.push_back(pair.values(p));
    }
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t k = i + 1; k < pts.size(); ++k) {
      if ((images[i] - images[k]).norm() < 1e-8) {
        throw Error(ErrorCode::DegenerateEmbedding, "distinct samples share an image point");
      }
    }
  }
  return pair;
}

}  // namespace zpole
