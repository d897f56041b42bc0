#include "effop/recursion.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace effop {

std::pair<Basis, Basis> separate(const Basis& m, const Basis& n, const CMatrix& q1,
                                 const CMatrix& q2, const Tolerances& tol) {
  const Index a = m.ambient_dim;
  if (n.ambient_dim != a || q1.rows() != a || q2.rows() != a)
    throw std::invalid_argument("separate: ambient dimension mismatch");
  if ((q1 + q2 - CMatrix::Identity(a, a)).norm() > 1e-8)
    throw std::invalid_argument("separate: q1 + q2 != I");
  if ((m.vectors.adjoint() * n.vectors).norm() > 1e-8)
    throw std::invalid_argument("separate: M not orthogonal to N");

  const Basis r1 = orthonormalize(q1, tol);
  const Basis r2 = orthonormalize(q2, tol);
  const Basis n1 = direct_sum(intersect(r1, n, tol), intersect(r2, n, tol));
  const Basis n2 = complement_within(n1, n, tol);
  return {n1, n2};
}

std::pair<CMatrix, CMatrix> k_maps(const Y2Collection& y, const Level1Z& next,
                                   const Tolerances& tol) {
  const Z2Collection& c = y.parent;
  const Basis& v = y.V;
  // U^(1) lifted to the parent ambient space
  const CMatrix u1 = next.frame * next.z.U.vectors;
  // exhausted hierarchy: both maps are V x 0, no Gram inversion needed
  if (u1.cols() == 0)
    return {CMatrix::Zero(v.dim(), 0), CMatrix::Zero(v.dim(), 0)};

  const CMatrix pe = projector(c.E);
  const CMatrix pj = projector(c.J);
  const CMatrix g1 = v.vectors.adjoint() * pe * v.vectors;  // Pi1 Gamma1 Pi1 on V
  const CMatrix g2 = v.vectors.adjoint() * pj * v.vectors;

  auto checked_inverse = [&](const CMatrix& g, DegenerateIntersection::Which w) -> CMatrix {
    const Index dv = g.rows();
    if (dv == 0) return CMatrix::Zero(0, 0).eval();
    Eigen::BDCSVD<CMatrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol.rank_tol * sv(0)) ++r;
    if (r < dv) throw DegenerateIntersection(w, dv - r);
    return (svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint()).eval();
  };
  // Pi1 Gamma1 Pi1 singular <=> V cap J != 0; Pi1 Gamma2 Pi1 <=> V cap E
  const CMatrix g1_inv = checked_inverse(g1, DegenerateIntersection::Which::VJ);
  const CMatrix g2_inv = checked_inverse(g2, DegenerateIntersection::Which::VE);

  const CMatrix k = -g1_inv * (v.vectors.adjoint() * pe * u1);
  const CMatrix kp = -g2_inv * (v.vectors.adjoint() * pj * u1);
  return {k, kp};
}

namespace {

LevelStructure level_structure(const Z2Collection& z, const Basis& v) {
  LevelStructure s;
  const CMatrix lam[2] = {projector(z.P1), projector(z.P2)};
  for (int a = 0; a < 2; ++a) {
    s.m0[a] = restrict_block(z.U, lam[a], z.U);
    s.m1[a] = restrict_block(z.U, lam[a], v);
    s.mv[a] = restrict_block(v, lam[a], v);
  }
  return s;
}

}  // namespace

RecursionHierarchy build_hierarchy(const Z2Collection& c, int max_depth,
                                   const Tolerances& tol) {
  RecursionHierarchy h;
  Z2Collection z = c;
  z.tol = tol;

  for (int k = 0;; ++k) {
    RecursionLevel lvl;
    lvl.k = k;
    lvl.z = z;
    lvl.angle_tol_used = z.tol.angle_tol;

    auto [y, next] = derive_y(z);
    lvl.dims.u = z.U.dim();
    lvl.dims.e = z.E.dim();
    lvl.dims.j = z.J.dim();
    lvl.dims.v = y.V.dim();
    lvl.dims.u_next = next.z.U.dim();
    lvl.dims.w_next = z.E.dim() - next.z.E.dim();

    lvl.flags.p_cap_u_trivial = intersect(z.P1, z.U, z.tol).dim() == 0 &&
                                intersect(z.P2, z.U, z.tol).dim() == 0;
    lvl.flags.e_cap_v_trivial = intersect(z.E, y.V, z.tol).dim() == 0;
    lvl.flags.j_cap_v_trivial = intersect(z.J, y.V, z.tol).dim() == 0;

    lvl.structure = level_structure(z, y.V);

    if (lvl.flags.e_cap_v_trivial && lvl.flags.j_cap_v_trivial) {
      auto [km, kp] = k_maps(y, next, z.tol);
      lvl.K_map = std::move(km);
      lvl.K_prime = std::move(kp);
    }
    lvl.y = std::move(y);
    lvl.next = std::move(next);
    const RecursionLevel& stored = h.levels.emplace_back(std::move(lvl));

    if (stored.next.z.ambient_dim == 0 || stored.next.z.U.dim() == 0) {
      // exhausted; a nontrivial E cap V is vacuous here (no K' to build), but
      // a failed P cap U or J cap V still marks the level degenerate
      h.termination =
          stored.flags.p_cap_u_trivial && stored.flags.j_cap_v_trivial
              ? Termination::dim_zero
              : Termination::degenerate;
      return h;
    }
    if (!stored.flags.all()) {
      h.termination = Termination::degenerate;
      return h;
    }
    if (k + 1 >= max_depth) {
      h.termination = Termination::depth_reached;
      return h;
    }
    z = stored.next.z;
    z.tol.angle_tol *= 10.0;  // error growth is geometric in depth
  }
}

double congruence_check(const RecursionHierarchy& h, int k, const ModuliPair& m) {
  if (k < 0 || size_t(k) >= h.levels.size())
    throw std::invalid_argument("congruence_check: no such level");
  const RecursionLevel& lvl = h.levels[size_t(k)];
  if (lvl.K_map.size() == 0 && lvl.dims.u_next > 0)
    throw std::invalid_argument("congruence_check: K map undefined at this level");

  const CMatrix ystar = y_operator(lvl.y, m).matrix;
  const CMatrix lnext = effective_schur(lvl.next.z, m).matrix;
  const CMatrix folded = lvl.K_map * lnext * lvl.K_map.adjoint();
  const double base = std::max(ystar.norm(), 1e-300);
  return (ystar - folded).norm() / base;
}

EffectiveResult continued_fraction_eval(const RecursionHierarchy& h, const ModuliPair& m,
                                        int depth, const Terminal& terminal) {
  if (depth < 0 || size_t(depth) >= h.levels.size())
    throw std::invalid_argument("continued_fraction_eval: hierarchy too shallow");
  for (int k = 0; k < depth; ++k)
    if (h.levels[size_t(k)].K_map.size() == 0 && h.levels[size_t(k)].dims.u_next > 0)
      throw std::invalid_argument("continued_fraction_eval: K map undefined at level " +
                                  std::to_string(k));

  CMatrix l;
  if (terminal.kind == Terminal::Kind::exact) {
    l = effective_schur(h.levels[size_t(depth)].z, m).matrix;
  } else {
    const Index du = h.levels[size_t(depth)].dims.u;
    l = terminal.value * CMatrix::Identity(du, du);
  }
  for (int k = depth - 1; k >= 0; --k) {
    const RecursionLevel& lvl = h.levels[size_t(k)];
    const CMatrix ystar = lvl.K_map * l * lvl.K_map.adjoint();
    l = fractional_fold(lvl.z, lvl.y.V, ystar, m);
  }
  EffectiveResult r;
  r.matrix = std::move(l);
  r.method = Method::continued_fraction;
  return r;
}

SpectralStructure spectral_precompute(const Z2Collection& c) {
  SpectralStructure s;
  s.dim_u = c.U.dim();
  const CMatrix lam1_e = c.P1.vectors.adjoint() * c.E.vectors;  // P1 x E
  const CMatrix a = lam1_e.adjoint() * lam1_e;  // Gamma1 Lambda1 Gamma1 on E
  const CMatrix lam1_u = c.P1.vectors.adjoint() * c.U.vectors;
  s.m01 = lam1_u.adjoint() * lam1_u;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  s.eigenvalues = es.eigenvalues();
  // w_j = Gamma0 Lambda1 eigvec_j in U-coordinates
  s.couplings = lam1_u.adjoint() * (lam1_e * es.eigenvectors());
  return s;
}

EffectiveResult effective_spectral(const SpectralStructure& s, const ModuliPair& m) {
  const Complex d = m.l1 - m.l2;
  const double scale = std::max(std::abs(m.l1), std::abs(m.l2));
  if (std::abs(m.l2) <= 1e-14 * std::max(scale, 1.0)) throw PoleHit();

  EffectiveResult r;
  r.method = Method::spectral;
  r.matrix = m.l2 * CMatrix::Identity(s.dim_u, s.dim_u) + d * s.m01;
  double worst = 1.0;
  for (Index j = 0; j < s.eigenvalues.size(); ++j) {
    const Complex denom = m.l2 + d * s.eigenvalues(j);
    if (std::abs(denom) <= 1e-12 * std::max(scale, 1.0)) throw PoleHit();
    worst = std::max(worst, scale / std::abs(denom));
    r.matrix.noalias() -= (d * d / denom) * (s.couplings.col(j) * s.couplings.col(j).adjoint());
  }
  r.condition_estimate = worst;
  return r;
}

}  // namespace effop
