#include "effop/ysolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace effop {

namespace {

double min_eig_hermitian(const CMatrix& m) {
  if (m.rows() == 0) return 1.0;  // vacuous coercivity
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) / 2.0,
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// rank-checked inverse; throws SingularF with diagnostics
CMatrix invert_f(const CMatrix& f, const Tolerances& tol) {
  const Index n = f.rows();
  if (n == 0) return CMatrix::Zero(0, 0);
  Eigen::BDCSVD<CMatrix> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_tol * sv(0)) ++r;
  if (r < n) throw SingularF(n - r, n - r);
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

std::pair<Y2Collection, Level1Z> derive_y(const Z2Collection& c) {
  Y2Collection y;
  y.parent = c;
  y.K = complement_within(c.U, Basis::standard(c.ambient_dim), c.tol);
  y.P1_1 = intersect(c.P1, y.K, c.tol);
  y.P2_1 = intersect(c.P2, y.K, c.tol);
  y.H1 = direct_sum(y.P1_1, y.P2_1);
  y.V = complement_within(y.H1, y.K, c.tol);

  const CMatrix pi2 = projector(y.H1);
  y.beta = min_eig_hermitian(restrict_block(c.J, pi2, c.J));

  Level1Z next;
  next.frame = y.H1.vectors;
  const Index h1 = y.H1.dim();
  next.z.ambient_dim = h1;
  next.z.tol = c.tol;

  // express everything in H^(1) coordinates
  auto to_local = [&](const Basis& b) {
    return Basis{h1, y.H1.vectors.adjoint() * b.vectors};
  };
  const Basis e1_ambient = intersect(c.E, y.H1, c.tol);
  const Basis j1_ambient = intersect(c.J, y.H1, c.tol);
  next.z.E = to_local(e1_ambient);
  next.z.J = to_local(j1_ambient);
  next.z.P1 = to_local(y.P1_1);
  next.z.P2 = to_local(y.P2_1);
  next.z.U = complement_within(direct_sum(next.z.E, next.z.J),
                               Basis::standard(h1), c.tol);
  return {std::move(y), std::move(next)};
}

YSolvability check_solvability(const Y2Collection& y, const ModuliPair& m) {
  const Z2Collection& c = y.parent;
  const CMatrix linv = inverse_L(c, m);
  const CMatrix pi2 = projector(y.H1);

  YSolvability s;
  s.dim_VJ = intersect(y.V, c.J, c.tol).dim();
  s.dim_VE = intersect(y.V, c.E, c.tol).dim();
  s.assumption_holds = (s.dim_VJ == 0);
  s.beta = y.beta;

  const CMatrix f = restrict_block(c.J, pi2 * linv * pi2, c.J);
  s.f_diag = fredholm_diagnostics(f, c.tol);

  const Basis w = direct_sum(c.U, c.J);
  const CMatrix g = restrict_block(w, linv, w);
  s.g_diag = fredholm_diagnostics(g, c.tol);
  return s;
}

EffectiveResult y_operator(const Y2Collection& y, const ModuliPair& m) {
  const Z2Collection& c = y.parent;
  if (!m.invertible()) throw ZeroModulus();
  const Index dv = y.V.dim();

  EffectiveResult r;
  r.method = Method::direct;
  if (c.J.dim() == 0) {
    r.matrix = CMatrix::Zero(dv, dv);
    return r;
  }
  const CMatrix linv = inverse_L(c, m);
  const CMatrix pi2 = projector(y.H1);
  const CMatrix f = restrict_block(c.J, pi2 * linv * pi2, c.J);

  {
    Eigen::BDCSVD<CMatrix> svd(f);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0)
      r.condition_estimate = sv(0) / std::max(sv(sv.size() - 1), 1e-300);
  }
  const CMatrix f_inv = invert_f(f, c.tol);
  const CMatrix gamma2_pi1 = c.J.vectors.adjoint() * y.V.vectors;  // J x V
  r.matrix = gamma2_pi1.adjoint() * f_inv * gamma2_pi1;
  return r;
}

YSolution solve_y_direct(const Y2Collection& y, const ModuliPair& m, const CVector& e1) {
  const Z2Collection& c = y.parent;
  if (e1.size() != y.V.dim())
    throw std::invalid_argument("solve_y_direct: e1 has wrong dimension");
  const EffectiveResult ystar = y_operator(y, m);  // throws SingularF if ill-posed

  const Index de = c.E.dim(), dj = c.J.dim(), dv = y.V.dim(), dh = y.H1.dim();
  const CMatrix l = build_L(c, m);
  const CMatrix pi2 = projector(y.H1);

  // stacked constraints on (x, y) = (E coords, J coords):
  //   Pi2 J - L Pi2 E = 0   (dh rows, in H1 coordinates)
  //   Pi1 E = e1            (dv rows)
  CMatrix sys(dh + dv, de + dj);
  CVector rhs = CVector::Zero(dh + dv);
  sys.topLeftCorner(dh, de) = -y.H1.vectors.adjoint() * (l * (pi2 * c.E.vectors));
  sys.topRightCorner(dh, dj) = y.H1.vectors.adjoint() * c.J.vectors;
  sys.bottomLeftCorner(dv, de) = y.V.vectors.adjoint() * c.E.vectors;
  sys.bottomRightCorner(dv, dj) = CMatrix::Zero(dv, dj);
  rhs.tail(dv) = e1;

  Eigen::BDCSVD<CMatrix> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
  CVector sol = svd.solve(rhs);

  YSolution out;
  out.E_field = sol.head(de);
  out.J_field = sol.tail(dj);
  out.residual = (sys * sol - rhs).norm();
  out.j1 = y.V.vectors.adjoint() * (c.J.vectors * out.J_field);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > c.tol.rank_tol * smax) ++r;
  out.nullspace_dim = (de + dj) - r;

  // the defining relation J1 = -Y* E1
  const double link = (out.j1 + ystar.matrix * e1).norm();
  if (link > c.tol.solve_tol * std::max(1.0, e1.norm()))
    out.residual = std::max(out.residual, link);
  return out;
}

CMatrix fractional_fold(const Z2Collection& c, const Basis& v, const CMatrix& y_star,
                        const ModuliPair& m) {
  const CMatrix l = build_L(c, m);
  const CMatrix a0 = restrict_block(c.U, l, c.U);
  const CMatrix c1 = restrict_block(c.U, l, v);  // Gamma0 L Pi1
  const CMatrix c2 = restrict_block(v, l, c.U);  // Pi1 L Gamma0
  const CMatrix shifted = restrict_block(v, l, v) + y_star;

  const Index dv = v.dim();
  if (dv == 0) return a0;
  Eigen::BDCSVD<CMatrix> svd(shifted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > c.tol.rank_tol * sv(0)) ++r;
  if (r < dv) throw SingularShiftedY(dv - r);
  const CMatrix inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return a0 - c1 * inv * c2;
}

EffectiveResult fractional_relation(const Z2Collection& c, const Y2Collection& y,
                                    const ModuliPair& m) {
  const EffectiveResult ystar = y_operator(y, m);
  EffectiveResult r;
  r.method = Method::direct;
  r.matrix = fractional_fold(c, y.V, ystar.matrix, m);
  r.condition_estimate = ystar.condition_estimate;
  return r;
}

}  // namespace effop
