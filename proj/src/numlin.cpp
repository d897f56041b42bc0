#include "effop/numlin.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace effop {

bool all_finite(const CMatrix& m) { return m.allFinite(); }

double ortho_residual(const Basis& b) {
  const Index k = b.dim();
  return (b.vectors.adjoint() * b.vectors - CMatrix::Identity(k, k)).norm();
}

Basis orthonormalize(const CMatrix& m, const Tolerances& tol) {
  if (!m.allFinite())
    throw std::invalid_argument("orthonormalize: non-finite input");
  const Index n = m.rows();
  if (n == 0 || m.cols() == 0) return Basis::empty(n);

  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_tol * smax) ++r;
  Basis b{n, svd.matrixU().leftCols(r)};
  return b;
}

CMatrix projector(const Basis& b) {
  if (b.dim() == 0) return CMatrix::Zero(b.ambient_dim, b.ambient_dim);
  return b.vectors * b.vectors.adjoint();
}

Index rank_of(const CMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (smax == 0.0) return 0;
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rank_tol * smax) ++r;
  return r;
}

Basis intersect(const Basis& a, const Basis& b, const Tolerances& tol) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("intersect: ambient dimension mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Basis::empty(a.ambient_dim);

  const CMatrix gram = a.vectors.adjoint() * b.vectors;
  Eigen::BDCSVD<CMatrix> svd(gram, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= 1.0 - tol.angle_tol) ++r;
  if (r == 0) return Basis::empty(a.ambient_dim);
  // principal directions sit in A; re-orthonormalize to clean up rounding
  CMatrix dirs = a.vectors * svd.matrixU().leftCols(r);
  return orthonormalize(dirs, tol);
}

Basis complement_within(const Basis& a, const Basis& parent, const Tolerances& tol) {
  if (a.ambient_dim != parent.ambient_dim)
    throw std::invalid_argument("complement_within: ambient dimension mismatch");
  const Index p = parent.dim();
  const Index k = a.dim();
  if (k > p) throw std::invalid_argument("complement_within: dim A > dim parent");

  // containment check: residual of A outside parent
  if (k > 0) {
    const CMatrix coords = parent.vectors.adjoint() * a.vectors;
    const double out = (a.vectors - parent.vectors * coords).norm();
    if (out > std::sqrt(2.0 * tol.angle_tol) * std::sqrt(double(k)))
      throw std::invalid_argument("complement_within: A not contained in parent");
  }
  if (k == p) return Basis::empty(a.ambient_dim);
  if (k == 0) return parent;

  // complete the coordinate frame: Q from the QR of parent' A, trailing
  // columns span the complement exactly, so dim B = p - k always
  const CMatrix coords = parent.vectors.adjoint() * a.vectors;  // p x k
  Eigen::HouseholderQR<CMatrix> qr(coords);
  CMatrix q = qr.householderQ();
  return Basis{a.ambient_dim, parent.vectors * q.rightCols(p - k)};
}

Basis direct_sum(const Basis& a, const Basis& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("direct_sum: ambient dimension mismatch");
  CMatrix v(a.ambient_dim, a.dim() + b.dim());
  v << a.vectors, b.vectors;
  return Basis{a.ambient_dim, std::move(v)};
}

CMatrix restrict_block(const Basis& rows, const CMatrix& m, const Basis& cols) {
  return rows.vectors.adjoint() * m * cols.vectors;
}

}  // namespace effop
