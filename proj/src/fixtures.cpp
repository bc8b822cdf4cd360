#include "zpole/fixtures.hpp"

#include <cmath>

#include "zpole/numerics.hpp"

namespace zpole::fixtures {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cplx random_complex(Rng& rng, double scale) {
  return scale * cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
}

CVec random_vector(Rng& rng, int n) {
  CVec v(n);
  for (int k = 0; k < n; ++k) v(k) = random_complex(rng);
  return v;
}

cplx random_point(const Torus& torus, Rng& rng) {
  return uniform(rng) * torus.tau() + uniform(rng);
}

std::vector<cplx> separated_points(const Torus& torus, Rng& rng, int n, double min_gap,
                                   const std::vector<cplx>& avoid) {
  std::vector<cplx> out;
  for (int attempt = 0; static_cast<int>(out.size()) < n; ++attempt) {
    if (attempt > 100000) throw Error(ErrorCode::InputError, "cannot place separated points");
    const cplx p = random_point(torus, rng);
    bool ok = true;
    for (cplx o : out) ok = ok && torus.lattice_defect(p - o) >= min_gap;
    for (cplx o : avoid) ok = ok && torus.lattice_defect(p - o) >= min_gap;
    if (ok) out.push_back(p);
  }
  return out;
}

Characteristic random_characteristic(const Torus& torus, Rng& rng) {
  for (;;) {
    Characteristic ch = Characteristic::scalar(uniform(rng), uniform(rng));
    if (std::abs(torus.theta_char(ch, 0.0)) > 1e-2) return ch;
  }
}

PeriodMatrix random_period_matrix(int genus, Rng& rng) {
  Eigen::MatrixXd a(genus, genus);
  Eigen::MatrixXd x(genus, genus);
  for (int i = 0; i < genus; ++i) {
    for (int j = 0; j < genus; ++j) {
      a(i, j) = uniform(rng, -0.5, 0.5);
      x(i, j) = uniform(rng, -0.5, 0.5);
    }
  }
  const Eigen::MatrixXd y =
      a * a.transpose() + 0.8 * Eigen::MatrixXd::Identity(genus, genus);
  const Eigen::MatrixXd xs = 0.5 * (x + x.transpose());
  return PeriodMatrix(xs.cast<cplx>() + kI * y.cast<cplx>());
}

EmbeddingPair default_embedding(std::shared_ptr<const Torus> torus) {
  const cplx tau = torus->tau();
  return build_embedding_functions(torus, 0.1, 0.45 + 0.3 * tau, 0.7 + 0.65 * tau);
}

Genus0Problem random_genus0_problem(Rng& rng, int rank, int n) {
  for (;;) {
    Genus0Problem p;
    p.rank = rank;
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < 2 * n) {
      const cplx z = random_complex(rng, 2.0);
      bool ok = true;
      for (cplx o : pts) ok = ok && std::abs(z - o) >= 0.3;
      if (ok) pts.push_back(z);
    }
    for (int k = 0; k < n; ++k) {
      p.zeros.push_back({pts[k], random_vector(rng, rank).transpose()});
      p.poles.push_back({pts[n + k], random_vector(rng, rank)});
    }
    if (svd_summary(build_gamma_genus0(p)).condition < 1e6) return p;
  }
}

ScalarLineProblem scalar_line_problem(std::shared_ptr<const Torus> torus, Rng& rng, int n,
                                      const std::vector<cplx>& avoid) {
  ScalarLineProblem out;
  out.torus = torus;
  const std::vector<cplx> pts = separated_points(*torus, rng, 2 * n + 1, 0.08, avoid);
  for (int k = 0; k < n; ++k) {
    out.divisor.zeros.push_back(pts[k]);
    out.divisor.poles.push_back(pts[n + k]);
  }
  out.q = pts[2 * n];
  cplx shift = 0;
  for (int k = 0; k < n; ++k) shift += out.divisor.zeros[k] - out.divisor.poles[k];
  for (;;) {
    out.chi = random_characteristic(*torus, rng);
    const auto [s, t] = torus->lattice_coords(shift);
    out.tilde = Characteristic::scalar(out.chi.a(0) + s, out.chi.b(0) + t);
    if (std::abs(torus->theta_char(out.tilde, 0.0)) > 1e-2) return out;
  }
}

CoupledFixture coupled_rank2_fixture(std::shared_ptr<const Torus> torus) {
  const Characteristic chi = Characteristic::scalar(0.23, 0.61);
  const cplx shift(0.17, 0.09);
  const auto [s, t] = torus->lattice_coords(shift);
  const Characteristic tilde = Characteristic::scalar(0.23 + s, 0.61 + t);
  const cplx node(0.45, 0.35);
  const cplx pole_only = node - shift;
  const cplx zero_only = node + shift;
  const cplx second_node(0.2, 0.6);
  const cplx weight(0.7, -0.4);
  const cplx q(0.8, 0.05);

  const ScalarMultiplicative upper(torus, Divisor{{node}, {pole_only}}, chi, tilde, q, 1.0);
  const ScalarMultiplicative lower(torus, Divisor{{zero_only}, {node}}, chi, tilde, q, 1.0);
  // Elliptic, simple poles at zero_only, second_node and pole_only.
  auto coupling_fn = [torus, zero_only, pole_only, second_node, weight](cplx p) {
    const cplx l_pole = torus->odd_log_derivative(p - pole_only);
    return torus->odd_log_derivative(p - zero_only) - l_pole +
           weight * (torus->odd_log_derivative(p - second_node) - l_pole);
  };
  const cplx at_node = coupling_fn(node);
  const CMat slope = circle_coefficients(
      [&](cplx p) { return CMat::Constant(1, 1, coupling_fn(p)); }, node, 0.05, 1, 1, 64)[0];

  CoupledFixture out;
  out.torus = torus;
  out.chi = direct_sum_kernel({line_kernel(torus, chi), line_kernel(torus, chi)});
  out.tilde = direct_sum_kernel({line_kernel(torus, tilde), line_kernel(torus, tilde)});
  out.q = q;
  out.map = [upper, lower, coupling_fn, at_node](cplx p) {
    const cplx low = lower(p);
    CMat m(2, 2);
    m << upper(p), (coupling_fn(p) - at_node) * low, 0.0, low;
    return m;
  };
  out.Q = out.map(q);
  const CVec e1 = CVec::Unit(2, 0);
  const CVec e2 = CVec::Unit(2, 1);
  out.data.rank = 2;
  out.data.zeros = {{node, {e1}}, {zero_only, {e2}}, {second_node, {e2}}};
  out.data.poles = {{node, {e2}}, {pole_only, {e1}}, {second_node, {e1}}};
  out.data.couplings = {{0, 0, 0, 0, -slope(0, 0)}, {2, 2, 0, 0, -1.0 / weight}};
  out.special = {node, pole_only, zero_only, second_node, q};
  return out;
}

MatrixFayFixture genus0_matrix_fay(Rng& rng) {
  Genus0Problem p = random_genus0_problem(rng, 2, 1);
  const Genus0Solution sol = solve_genus0(p);
  MatrixFayFixture out;
  out.chi = genus0_kernel(2);
  out.tilde = genus0_kernel(2);
  const RationalMatrixFunction fn = sol.function;
  out.map = [fn](cplx z) { return fn(z); };
  out.lambda = p.zeros[0].point;
  out.mu = p.poles[0].point;
  out.x = p.zeros[0].x.transpose();
  out.u = p.poles[0].u;
  for (;;) {
    out.q = random_complex(rng, 2.0);
    if (std::abs(out.q - out.lambda) > 0.3 && std::abs(out.q - out.mu) > 0.3) break;
  }
  return out;
}

MatrixFayFixture genus1_matrix_fay(std::shared_ptr<const Torus> torus, Rng& rng) {
  const ScalarLineProblem line = scalar_line_problem(torus, rng, 1);
  const ScalarMultiplicative scalar(torus, line.divisor, line.chi, line.tilde, line.q, 1.0);
  CMat frame(2, 2);
  do {
    frame << random_complex(rng), random_complex(rng), random_complex(rng), random_complex(rng);
  } while (svd_summary(frame).condition > 10);
  MatrixFayFixture out;
  out.chi = direct_sum_kernel({line_kernel(torus, line.chi), line_kernel(torus, line.tilde)});
  out.tilde = direct_sum_kernel({line_kernel(torus, line.tilde), line_kernel(torus, line.tilde)});
  out.map = [scalar, frame](cplx p) {
    CMat d = CMat::Identity(2, 2);
    d(0, 0) = scalar(p);
    return CMat(frame * d);
  };
  out.lambda = line.divisor.zeros[0];
  out.mu = line.divisor.poles[0];
  out.u = frame.col(0);
  out.x = frame.inverse().transpose().col(0);
  out.q = line.q;
  return out;
}

}  // namespace zpole::fixtures
