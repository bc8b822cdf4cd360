#pragma once

#include <memory>
#include <random>
#include <vector>

#include "zpole/absint.hpp"
#include "zpole/genus0.hpp"

namespace zpole::fixtures {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
cplx random_complex(Rng& rng, double scale = 1.0);
CVec random_vector(Rng& rng, int n);
// s * tau + t with s, t uniform in [0, 1).
cplx random_point(const Torus& torus, Rng& rng);
// n points pairwise (and from `avoid`) at lattice distance >= min_gap.
std::vector<cplx> separated_points(const Torus& torus, Rng& rng, int n, double min_gap,
                                   const std::vector<cplx>& avoid = {});
// |theta[a;b](0)| > 1e-2, so the line bundle is comfortably nondegenerate.
Characteristic random_characteristic(const Torus& torus, Rng& rng);
// Symmetric with positive definite imaginary part.
PeriodMatrix random_period_matrix(int genus, Rng& rng);

// Embedding poles used throughout: 0.1, 0.45 + 0.3 tau, 0.7 + 0.65 tau.
EmbeddingPair default_embedding(std::shared_ptr<const Torus> torus);

// Random genus-0 problem with n zeros and n poles of rank r and a
// well-conditioned Gamma.
Genus0Problem random_genus0_problem(Rng& rng, int rank, int n);

// Scalar torus problem with the output characteristic shifted by the divisor,
// so the necessary condition holds.
struct ScalarLineProblem {
  std::shared_ptr<const Torus> torus;
  Characteristic chi;
  Characteristic tilde;
  Divisor divisor;
  cplx q;
};

ScalarLineProblem scalar_line_problem(std::shared_ptr<const Torus> torus, Rng& rng, int n,
                                      const std::vector<cplx>& avoid = {});

// Rank-2 map between L + L and L~ + L~ with known closed form
//   T = [[T1, g T2], [0, T2]],
// g elliptic with simple poles; two zero/pole coincidences with nonzero
// coupling numbers.
struct CoupledFixture {
  std::shared_ptr<const Torus> torus;
  KernelPtr chi;
  KernelPtr tilde;
  InterpolationData data;
  cplx q;
  CMat Q;
  MatrixFunction map;
  std::vector<cplx> special;  // zeros, poles and q
};

CoupledFixture coupled_rank2_fixture(std::shared_ptr<const Torus> torus);

// One zero and one pole of rank 2 with a known map.
struct MatrixFayFixture {
  KernelPtr chi;
  KernelPtr tilde;
  MatrixFunction map;
  cplx lambda;
  cplx mu;
  CVec x;
  CVec u;
  cplx q;
};

MatrixFayFixture genus0_matrix_fay(Rng& rng);
MatrixFayFixture genus1_matrix_fay(std::shared_ptr<const Torus> torus, Rng& rng);

}  // namespace zpole::fixtures
