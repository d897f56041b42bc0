#include "effop/zsolver.hpp"

#include <doctest.h>

#include <random>

using namespace effop;

namespace {

ModuliPair upper_half_sample(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.05, 2.0);
  return ModuliPair{{re(rng), im(rng)}, {re(rng), im(rng)}};
}

}  // namespace

TEST_CASE("fredholm_diagnostics basics") {
  const IndexDiagnostics id3 = fredholm_diagnostics(CMatrix::Identity(3, 3));
  CHECK(id3.dim_ker == 0);
  CHECK(id3.dim_coker == 0);
  CHECK(id3.index == 0);
  CHECK(id3.invertible);

  const IndexDiagnostics z2 = fredholm_diagnostics(CMatrix::Zero(2, 2));
  CHECK(z2.dim_ker == 2);
  CHECK(z2.dim_coker == 2);
  CHECK(z2.index == 0);
  CHECK_FALSE(z2.invertible);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  const IndexDiagnostics d2 = fredholm_diagnostics(d);
  CHECK(d2.dim_ker == 1);
  CHECK(d2.dim_coker == 1);
  CHECK_FALSE(d2.invertible);
}

TEST_CASE("equal moduli give the trivial solution") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  CVector e(2);
  e << Complex(1.0, 0.5), Complex(-2.0, 0.0);
  const ZSolution s = solve_z_direct(c, ModuliPair{1.0, 1.0}, e);
  CHECK((s.j - e).norm() < 1e-12);
  CHECK(s.E_field.norm() < 1e-12);
  CHECK(s.J_field.norm() < 1e-12);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("series model Z-solution by hand") {
  const Z2Collection c = series_model();
  CVector e(1);
  e << 1.0;
  const ZSolution s = solve_z_direct(c, ModuliPair{1.0, 3.0}, e);
  CHECK(std::abs(s.j(0) - Complex(1.5)) < 1e-12);
  CHECK(std::abs(std::abs(s.E_field(0)) - 0.5) < 1e-12);
  CHECK(s.J_field.size() == 0);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("parallel model Z-solution by hand") {
  const Z2Collection c = parallel_model();
  CVector e(1);
  e << 1.0;
  const ZSolution s = solve_z_direct(c, ModuliPair{1.0, 3.0}, e);
  CHECK(std::abs(s.j(0) - Complex(2.0)) < 1e-12);
  CHECK(s.E_field.size() == 0);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("effective_schur closed forms") {
  CHECK((effective_schur(random_collection(8, 2, 3, 3, 4, 7), ModuliPair{1.0, 1.0}).matrix -
         CMatrix::Identity(2, 2))
            .norm() < 1e-12);
  const EffectiveResult series = effective_schur(series_model(), ModuliPair{1.0, 3.0});
  CHECK(std::abs(series.matrix(0, 0) - Complex(1.5)) < 1e-12);
  CHECK_THROWS_AS(effective_schur(series_model(), ModuliPair{1.0, -1.0}), SingularL11);
}

TEST_CASE("SingularL11 carries a kernel witness") {
  try {
    effective_schur(series_model(), ModuliPair{1.0, -1.0});
    FAIL("expected SingularL11");
  } catch (const SingularL11& e) {
    CHECK(e.dim_ker == 1);
    CHECK(e.witness.size() == 1);
  }
}

TEST_CASE("effective_inverse_formula closed forms") {
  CHECK((effective_inverse_formula(random_collection(8, 2, 3, 3, 4, 7), ModuliPair{1.0, 1.0})
             .matrix -
         CMatrix::Identity(2, 2))
            .norm() < 1e-12);
  const EffectiveResult series =
      effective_inverse_formula(series_model(), ModuliPair{1.0, 3.0});
  CHECK(std::abs(series.matrix(0, 0) - Complex(1.5)) < 1e-12);
}

TEST_CASE("representation formulas agree on a seeded collection") {
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 7);
  const ModuliPair m{{2.0, 1.0}, {1.0, 0.0}};
  const CMatrix a = effective_schur(c, m).matrix;
  const CMatrix b = effective_inverse_formula(c, m).matrix;
  CHECK((a - b).norm() < 1e-9);
}

TEST_CASE("method equivalence over a random corpus") {
  std::mt19937_64 rng(2024);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Index du = 1 + Index(seed % 3);
    const Index de = 2 + Index(seed % 4);
    const Index dj = 2 + Index((seed / 3) % 4);
    const Index n = du + de + dj;
    const Z2Collection c = random_collection(n, du, de, dj, n / 2, seed);
    const ModuliPair m = seed % 2 ? upper_half_sample(rng)
                                  : ModuliPair{{0.5 + (seed % 7) * 0.3, 0.0},
                                               {0.2 + (seed % 5) * 0.4, 0.0}};
    const CMatrix a = effective_schur(c, m).matrix;
    const CMatrix b = effective_inverse_formula(c, m).matrix;
    CHECK((a - b).norm() <= 1e-8 * std::max(a.norm(), 1e-300));
    // column oracle: Schur columns are direct Z-solutions
    for (Index k = 0; k < du; ++k) {
      CVector e = CVector::Zero(du);
      e(k) = 1.0;
      CHECK((a.col(k) - solve_z_direct(c, m, e).j).norm() < 1e-9);
    }
  }
}

TEST_CASE("coupled inverse identities") {
  const CoupledInverseCheck triv =
      coupled_inverse_check(random_collection(8, 2, 3, 3, 4, 7), ModuliPair{1.0, 1.0});
  CHECK(triv.a_diag.invertible);
  CHECK(triv.b_diag.invertible);
  CHECK(triv.a_inv_residual < 1e-12);
  CHECK(triv.b_inv_residual < 1e-12);

  const CoupledInverseCheck series =
      coupled_inverse_check(series_model(), ModuliPair{1.0, 3.0});
  CHECK(series.a_inv_residual <= 1e-12);
  CHECK(series.b_inv_residual <= 1e-12);

  const CoupledInverseCheck degen =
      coupled_inverse_check(series_model(), ModuliPair{1.0, -1.0});
  CHECK(degen.a_diag.dim_ker == 1);
  CHECK(degen.b_diag.dim_ker == 1);
  CHECK_FALSE(degen.a_diag.invertible);
  CHECK_FALSE(degen.b_diag.invertible);
}

TEST_CASE("simultaneous invertibility of the coupled pair") {
  std::mt19937_64 rng(55);
  const Z2Collection c = random_collection(10, 2, 4, 4, 5, 18);
  for (int i = 0; i < 20; ++i) {
    const ModuliPair m = upper_half_sample(rng);
    const CoupledInverseCheck r = coupled_inverse_check(c, m);
    CHECK(r.a_diag.dim_ker == r.b_diag.dim_ker);
    CHECK(r.a_diag.invertible == r.b_diag.invertible);
  }
}

TEST_CASE("property_report covers the stated properties") {
  const Z2Collection c = series_model();
  std::vector<PropertySample> samples;
  samples.push_back({ModuliPair{1.0, 1.0}, Complex(2.0, 0.0)});
  samples.push_back({ModuliPair{1.0, 2.0}, Complex(5.0, 0.0)});
  samples.push_back({ModuliPair{{0.0, 1.0}, {0.0, 2.0}}, Complex(1.0, 1.0)});
  samples.push_back({ModuliPair{1.0, -1.0}, Complex(1.0, 0.0)});  // singular point
  const auto rows = property_report(c, samples);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].solvable);
  CHECK(rows[0].normalization_residual < 1e-12);
  CHECK(rows[1].homogeneity_residual < 1e-12);
  // L*(i, 2i) = (4/3) i: minimum of Im exceeds the bound min(1, 2)
  CHECK(rows[2].herglotz_min == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(rows[2].herglotz_bound == doctest::Approx(1.0));
  CHECK(rows[2].herglotz_min >= rows[2].herglotz_bound - 1e-9);
  CHECK_FALSE(rows[3].solvable);
}

TEST_CASE("Herglotz lower bound on random collections") {
  std::mt19937_64 rng(77);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Z2Collection c = random_collection(9, 3, 3, 3, 4, seed);
    for (int i = 0; i < 5; ++i) {
      const ModuliPair m = upper_half_sample(rng);
      const EffectiveResult r = effective_schur(c, m);
      CHECK(min_imag_eigenvalue(r.matrix) >=
            std::min(m.l1.imag(), m.l2.imag()) - 1e-9);
    }
  }
}

TEST_CASE("homogeneity is exact to relative 1e-10") {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const Z2Collection c = random_collection(8, 2, 3, 3, 4, 29);
  for (int i = 0; i < 10; ++i) {
    const ModuliPair m = upper_half_sample(rng);
    const Complex s(u(rng), u(rng));
    if (std::abs(s) < 0.1) continue;
    const CMatrix a = effective_schur(c, m).matrix;
    const CMatrix b = effective_schur(c, s * m).matrix;
    CHECK((a - b / s).norm() <= 1e-10 * a.norm());
  }
}
