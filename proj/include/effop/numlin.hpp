#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace effop {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

struct Tolerances {
  double rank_tol = 1e-10;   // relative, scaled by largest singular value
  double ortho_tol = 1e-10;
  double solve_tol = 1e-8;
  double angle_tol = 1e-8;   // on 1 - sigma of the cross-Gram matrix
};

/// Orthonormal column family in a complex ambient space. Zero-dimensional
/// bases (k = 0) are legal values and propagate through every operation.
struct Basis {
  Index ambient_dim = 0;
  CMatrix vectors;  // ambient_dim x k, orthonormal columns

  Index dim() const { return vectors.cols(); }

  static Basis empty(Index ambient) {
    return Basis{ambient, CMatrix::Zero(ambient, 0)};
  }
  static Basis standard(Index ambient) {
    return Basis{ambient, CMatrix::Identity(ambient, ambient)};
  }
};

bool all_finite(const CMatrix& m);

/// ||B'B - I||_F
double ortho_residual(const Basis& b);

/// Orthonormal basis of the column space of m. Rank is decided by singular
/// values above rank_tol * sigma_max.
Basis orthonormalize(const CMatrix& m, const Tolerances& tol = {});

/// B B', Hermitian and idempotent.
CMatrix projector(const Basis& b);

Index rank_of(const CMatrix& m, const Tolerances& tol = {});

/// Intersection via principal angles: singular vectors of A'B with
/// singular value >= 1 - angle_tol.
Basis intersect(const Basis& a, const Basis& b, const Tolerances& tol = {});

/// Orthogonal complement of a inside parent: returns b with
/// parent = a (+) b. Requires a to be contained in parent.
Basis complement_within(const Basis& a, const Basis& parent,
                        const Tolerances& tol = {});

/// Concatenation of two mutually orthogonal bases (no re-orthonormalization).
Basis direct_sum(const Basis& a, const Basis& b);

/// rows' * M * cols, the coordinate form of a restricted block.
CMatrix restrict_block(const Basis& rows, const CMatrix& m, const Basis& cols);

}  // namespace effop
