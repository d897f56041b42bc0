#include "effop/zsolver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace effop {

std::string method_name(Method m) {
  switch (m) {
    case Method::schur: return "schur";
    case Method::inverse_formula: return "inverse_formula";
    case Method::direct: return "direct";
    case Method::spectral: return "spectral";
    case Method::continued_fraction: return "continued_fraction";
  }
  return "?";
}

IndexDiagnostics fredholm_diagnostics(const CMatrix& m, const Tolerances& tol) {
  const Index r = rank_of(m, tol);
  IndexDiagnostics d;
  d.dim_ker = m.cols() - r;
  d.dim_coker = m.rows() - r;
  d.index = long(d.dim_ker) - long(d.dim_coker);
  d.invertible = (m.rows() == m.cols()) && d.dim_ker == 0;
  return d;
}

double min_imag_eigenvalue(const CMatrix& m) {
  if (m.rows() == 0) return 0.0;
  const CMatrix im = (m - m.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(im, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {

struct Blocks {
  CMatrix L00, L01, L10, L11, L20, L21;
};

Blocks z_blocks(const Z2Collection& c, const CMatrix& l) {
  Blocks b;
  b.L00 = restrict_block(c.U, l, c.U);
  b.L01 = restrict_block(c.U, l, c.E);
  b.L10 = restrict_block(c.E, l, c.U);
  b.L11 = restrict_block(c.E, l, c.E);
  b.L20 = restrict_block(c.J, l, c.U);
  b.L21 = restrict_block(c.J, l, c.E);
  return b;
}

// Inverts L11, throwing SingularL11 (with kernel witness) when rank-deficient.
// Also reports the condition estimate.
CMatrix invert_l11(const CMatrix& l11, const Tolerances& tol, double* cond) {
  const Index n = l11.rows();
  if (n == 0) {
    if (cond) *cond = 1.0;
    return CMatrix::Zero(0, 0);
  }
  Eigen::BDCSVD<CMatrix> svd(l11, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_tol * smax) ++r;
  if (r < n) {
    CVector witness = svd.matrixV().col(n - 1);
    throw SingularL11(n - r, std::move(witness));
  }
  if (cond) *cond = smax / sv(n - 1);
  CMatrix inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  return inv;
}

}  // namespace

ZSolution solve_z_direct(const Z2Collection& c, const ModuliPair& m, const CVector& e) {
  if (e.size() != c.U.dim())
    throw std::invalid_argument("solve_z_direct: e has wrong dimension");
  const CMatrix l = build_L(c, m);
  const Blocks b = z_blocks(c, l);
  const CMatrix l11_inv = invert_l11(b.L11, c.tol, nullptr);

  ZSolution s;
  s.E_field = -l11_inv * (b.L10 * e);
  s.j = b.L00 * e + b.L01 * s.E_field;
  s.J_field = b.L20 * e + b.L21 * s.E_field;

  const CVector lhs = c.U.vectors * s.j + c.J.vectors * s.J_field;
  const CVector rhs = l * (c.U.vectors * e + c.E.vectors * s.E_field);
  s.residual = (lhs - rhs).norm();
  return s;
}

EffectiveResult effective_schur(const Z2Collection& c, const ModuliPair& m) {
  const CMatrix l = build_L(c, m);
  const CMatrix l00 = restrict_block(c.U, l, c.U);
  const CMatrix l01 = restrict_block(c.U, l, c.E);
  const CMatrix l10 = restrict_block(c.E, l, c.U);
  const CMatrix l11 = restrict_block(c.E, l, c.E);
  EffectiveResult r;
  r.method = Method::schur;
  const CMatrix l11_inv = invert_l11(l11, c.tol, &r.condition_estimate);
  r.matrix = l00 - l01 * (l11_inv * l10);
  return r;
}

EffectiveResult effective_inverse_formula(const Z2Collection& c, const ModuliPair& m) {
  const CMatrix linv = inverse_L(c, m);
  const Basis w = direct_sum(c.U, c.J);
  const CMatrix b = restrict_block(w, linv, w);

  const Index n = b.rows();
  EffectiveResult r;
  r.method = Method::inverse_formula;
  if (n == 0) {
    r.matrix = CMatrix::Zero(0, 0);
    return r;
  }
  Eigen::BDCSVD<CMatrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > c.tol.rank_tol * sv(0)) ++rank;
  if (rank < n) throw SingularB(n - rank);
  r.condition_estimate = sv(0) / sv(n - 1);
  const CMatrix b_inv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  r.matrix = b_inv.topLeftCorner(c.U.dim(), c.U.dim());
  return r;
}

CoupledInverseCheck coupled_inverse_check(const Z2Collection& c, const ModuliPair& m) {
  const CMatrix l = build_L(c, m);
  const CMatrix linv = inverse_L(c, m);
  const Basis w = direct_sum(c.U, c.J);

  const CMatrix a = restrict_block(c.E, l, c.E);
  const CMatrix b = restrict_block(w, linv, w);

  CoupledInverseCheck out;
  out.a_diag = fredholm_diagnostics(a, c.tol);
  out.b_diag = fredholm_diagnostics(b, c.tol);
  if (!out.a_diag.invertible || !out.b_diag.invertible) return out;

  const CMatrix a_direct = a.fullPivLu().inverse();
  const CMatrix b_direct = b.fullPivLu().inverse();

  // explicit coupled-inverse expressions
  const CMatrix ew_linv = restrict_block(c.E, linv, w);
  const CMatrix we_linv = restrict_block(w, linv, c.E);
  const CMatrix a_formula = restrict_block(c.E, linv, c.E) - ew_linv * b_direct * we_linv;

  const CMatrix we_l = restrict_block(w, l, c.E);
  const CMatrix ew_l = restrict_block(c.E, l, w);
  const CMatrix b_formula = restrict_block(w, l, w) - we_l * a_direct * ew_l;

  const double an = std::max(a_direct.norm(), 1e-300);
  const double bn = std::max(b_direct.norm(), 1e-300);
  out.a_inv_residual = (a_formula - a_direct).norm() / an;
  out.b_inv_residual = (b_formula - b_direct).norm() / bn;
  return out;
}

std::vector<PropertyRow> property_report(const Z2Collection& c,
                                         const std::vector<PropertySample>& samples) {
  double norm_res = 0.0;
  {
    const EffectiveResult id = effective_schur(c, ModuliPair{1.0, 1.0});
    norm_res = (id.matrix - CMatrix::Identity(c.U.dim(), c.U.dim())).norm();
  }
  std::vector<PropertyRow> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) {
    PropertyRow row;
    row.normalization_residual = norm_res;
    try {
      const EffectiveResult base = effective_schur(c, s.m);
      const EffectiveResult scaled = effective_schur(c, s.c * s.m);
      const double nb = std::max(base.matrix.norm(), 1e-300);
      row.homogeneity_residual = (base.matrix - scaled.matrix / s.c).norm() / nb;
      row.herglotz_min = min_imag_eigenvalue(base.matrix);
      row.herglotz_bound = std::min(s.m.l1.imag(), s.m.l2.imag());
      row.solvable = true;
    } catch (const SingularL11&) {
      row.solvable = false;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace effop
