#include "effop/ysolver.hpp"

#include <doctest.h>

#include <random>

using namespace effop;

namespace {

ModuliPair upper_half_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 2.0);
  return ModuliPair{{re(rng), im(rng)}, {re(rng), im(rng)}};
}

}  // namespace

TEST_CASE("derive_y on the series model") {
  const Z2Collection c = series_model();
  auto [y, next] = derive_y(c);

  // K = E (+) J = span{(1,-1)/sqrt 2}
  CHECK(y.K.dim() == 1);
  CHECK((projector(y.K) - (projector(c.E) + projector(c.J))).norm() < 1e-12);
  CHECK(y.P1_1.dim() == 0);  // e1 is not in K
  CHECK(y.P2_1.dim() == 0);
  CHECK(y.H1.dim() == 0);
  CHECK(y.V.dim() == 1);
  CHECK((projector(y.V) - projector(y.K)).norm() < 1e-12);
  CHECK(next.z.ambient_dim == 0);
  CHECK(next.z.U.dim() == 0);
}

TEST_CASE("derive_y invariants on a random collection") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  auto [y, next] = derive_y(c);

  CHECK((projector(y.K) - (projector(c.E) + projector(c.J))).norm() < 1e-10);
  CHECK((projector(y.K) - (projector(y.V) + projector(y.P1_1) + projector(y.P2_1))).norm() <
        1e-10);
  CHECK((projector(y.P1_1) - projector(intersect(c.P1, y.K, c.tol))).norm() < 1e-10);
  CHECK((projector(y.P2_1) - projector(intersect(c.P2, y.K, c.tol))).norm() < 1e-10);

  // generic intersection dimension: dim P1 + dim K - ambient = 4 + 6 - 8
  CHECK(y.P1_1.dim() == 2);
  CHECK(y.P2_1.dim() == 2);
  CHECK(y.V.dim() == 2);

  // level-1 decomposition invariants in H^(1) coordinates
  const Index h1 = next.z.ambient_dim;
  CHECK(h1 == 4);
  CHECK(next.z.U.dim() + next.z.E.dim() + next.z.J.dim() == h1);
  CHECK(validate(next.z).passed);
}

TEST_CASE("series model solvability is vacuous") {
  const Z2Collection c = series_model();
  auto [y, next] = derive_y(c);
  const YSolvability s = check_solvability(y, ModuliPair{1.0, 3.0});
  CHECK(s.dim_VJ == 0);
  CHECK(s.assumption_holds);
  CHECK(s.f_diag.invertible);  // 0x0 is vacuously invertible
  CHECK(s.f_diag.dim_ker == 0);
}

TEST_CASE("solvability diagnostics on a random collection") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  auto [y, next] = derive_y(c);
  const YSolvability s = check_solvability(y, ModuliPair{{1.0, 1.0}, {2.0, 0.0}});
  CHECK(s.dim_VJ == 0);
  CHECK(s.dim_VE == 0);
  CHECK(s.assumption_holds);
  CHECK(s.beta > 1e-10);
  CHECK(s.f_diag.dim_ker == 0);
  CHECK(s.f_diag.dim_coker == 0);
  CHECK(s.g_diag.invertible);
}

TEST_CASE("coercivity constant bounds the restricted operator") {
  const Z2Collection c = random_collection(10, 2, 4, 4, 5, 3);
  auto [y, next] = derive_y(c);
  if (c.J.dim() > 0) {
    const CMatrix g = restrict_block(c.J, projector(y.H1), c.J);
    Eigen::SelfAdjointEigenSolver<CMatrix> es((g + g.adjoint()) / 2.0);
    CHECK(es.eigenvalues().minCoeff() == doctest::Approx(y.beta).epsilon(1e-10));
  }
}

TEST_CASE("y_operator on the series model is the 1x1 zero") {
  const Z2Collection c = series_model();
  auto [y, next] = derive_y(c);
  const EffectiveResult r = y_operator(y, ModuliPair{1.0, 3.0});
  CHECK(r.matrix.rows() == 1);
  CHECK(r.matrix.norm() == 0.0);
}

TEST_CASE("Y* is Herglotz and homogeneous") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  auto [y, next] = derive_y(c);

  const EffectiveResult im = y_operator(y, ModuliPair{{0.0, 1.0}, {0.0, 3.0}});
  CHECK(min_imag_eigenvalue(im.matrix) > 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 5; ++i) {
    const ModuliPair m = upper_half_sample(rng);
    const Complex s(u(rng), u(rng));
    if (std::abs(s) < 0.1) continue;
    const CMatrix a = y_operator(y, m).matrix;
    const CMatrix b = y_operator(y, s * m).matrix;
    CHECK((s * a - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("Y* adjoint symmetry under conjugated moduli") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 11);
  auto [y, next] = derive_y(c);
  const ModuliPair m{{1.2, 0.7}, {-0.4, 1.5}};
  const ModuliPair mc{std::conj(m.l1), std::conj(m.l2)};
  const CMatrix a = y_operator(y, m).matrix;
  const CMatrix b = y_operator(y, mc).matrix;
  CHECK((a.adjoint() - b).norm() < 1e-12 * std::max(1.0, a.norm()));
}

TEST_CASE("solve_y_direct basics") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  auto [y, next] = derive_y(c);
  const ModuliPair m{{1.0, 0.5}, {2.5, 0.25}};

  const YSolution zero = solve_y_direct(y, m, CVector::Zero(y.V.dim()));
  CHECK(zero.E_field.norm() < 1e-10);
  CHECK(zero.J_field.norm() < 1e-10);
  CHECK(zero.j1.norm() < 1e-10);

  CVector e1(y.V.dim());
  e1 << Complex(1.0, 0.0), Complex(-0.5, 0.25);
  const YSolution s = solve_y_direct(y, m, e1);
  CHECK(s.residual <= 1e-9);
  const CMatrix ystar = y_operator(y, m).matrix;
  CHECK((s.j1 + ystar * e1).norm() < 1e-9);
}

TEST_CASE("solve_y_direct on the series model") {
  const Z2Collection c = series_model();
  auto [y, next] = derive_y(c);
  CVector e1(1);
  e1 << Complex(2.0, -1.0);
  const YSolution s = solve_y_direct(y, ModuliPair{1.0, 3.0}, e1);
  CHECK(s.J_field.size() == 0);
  CHECK(s.j1.norm() < 1e-12);
  CHECK(s.residual < 1e-10);
}

TEST_CASE("fractional relation reproduces the Schur value") {
  const Z2Collection c = series_model();
  auto [y, next] = derive_y(c);
  const EffectiveResult r = fractional_relation(c, y, ModuliPair{1.0, 3.0});
  CHECK(std::abs(r.matrix(0, 0) - Complex(1.5)) < 1e-12);

  const EffectiveResult id = fractional_relation(c, y, ModuliPair{1.0, 1.0});
  CHECK((id.matrix - CMatrix::Identity(1, 1)).norm() < 1e-12);
}

TEST_CASE("fractional relation matches Schur on random collections") {
  std::mt19937_64 rng(31);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Z2Collection c = random_collection(9, 2, 3, 4, 4, seed);
    auto [y, next] = derive_y(c);
    for (int i = 0; i < 3; ++i) {
      const ModuliPair m = upper_half_sample(rng);
      const CMatrix a = fractional_relation(c, y, m).matrix;
      const CMatrix b = effective_schur(c, m).matrix;
      CHECK((a - b).norm() <= 1e-8 * std::max(b.norm(), 1e-300));
    }
  }
}

TEST_CASE("Pi2 commutes with L on K") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  auto [y, next] = derive_y(c);
  const CMatrix l = build_L(c, ModuliPair{{1.5, 0.5}, {-0.7, 1.0}});
  const CMatrix pk = projector(y.K);
  const CMatrix pi2 = projector(y.H1);
  CHECK((pi2 * l * pk - pk * l * pi2).norm() < 1e-12);
  CHECK((pi2 * l * pk - pi2 * l * pi2).norm() < 1e-12);
}
