#pragma once

#include "effop/ysolver.hpp"

#include <optional>
#include <vector>

namespace effop {

struct LevelFlags {
  bool p_cap_u_trivial = false;  // P1 cap U = P2 cap U = {0}
  bool e_cap_v_trivial = false;  // E cap V = {0}
  bool j_cap_v_trivial = false;  // J cap V = {0}

  bool all() const { return p_cap_u_trivial && e_cap_v_trivial && j_cap_v_trivial; }
};

struct LevelDims {
  Index u = 0, e = 0, j = 0, v = 0;
  Index u_next = 0;
  Index w_next = 0;  // dim E^(k) - dim E^(k+1)
};

/// Structural matrices of one level, independent of (l1, l2):
/// m0[a] = Gamma0 Lambda_a Gamma0 on U, m1[a] = Gamma0 Lambda_a Pi1 (U x V),
/// mv[a] = Pi1 Lambda_a Pi1 on V, for a = 1,2.
struct LevelStructure {
  CMatrix m0[2];
  CMatrix m1[2];
  CMatrix mv[2];
};

struct RecursionLevel {
  int k = 0;
  Z2Collection z;  // level-local coordinates
  Y2Collection y;
  Level1Z next;
  CMatrix K_map;    // dim V x dim U^(k+1); empty when degenerate
  CMatrix K_prime;  // K' K_map^dag = -I on V
  LevelDims dims;
  LevelFlags flags;
  LevelStructure structure;
  double angle_tol_used = 0.0;
};

enum class Termination { depth_reached, dim_zero, degenerate };

struct RecursionHierarchy {
  std::vector<RecursionLevel> levels;
  Termination termination = Termination::depth_reached;
};

/// Realization of M (+) N2 = Q1 M (+) Q2 M: N1 = (Ran Q1 cap N) (+)
/// (Ran Q2 cap N), N2 = N with N1 removed. q1, q2 are ambient projector
/// matrices with q1 + q2 = I.
std::pair<Basis, Basis> separate(const Basis& m, const Basis& n, const CMatrix& q1,
                                 const CMatrix& q2, const Tolerances& tol = {});

/// K = -(Pi1 Gamma1 Pi1)^{-1} Pi1 Gamma1 Pi2 and
/// K' = -(Pi1 Gamma2 Pi1)^{-1} Pi1 Gamma2 Pi2, both V x U^(1).
/// Throws DegenerateIntersection when a Gram block is rank-deficient.
std::pair<CMatrix, CMatrix> k_maps(const Y2Collection& y, const Level1Z& next,
                                   const Tolerances& tol = {});

/// Iterates derive_y + k_maps in level-local coordinates. Degeneracy is a
/// recorded termination, never a throw. angle_tol relaxes by x10 per level.
RecursionHierarchy build_hierarchy(const Z2Collection& c, int max_depth,
                                   const Tolerances& tol = {});

/// ||Y*^(k) - K^(k) L*^(k+1) (K^(k))'||_F relative to ||Y*^(k)||_F.
double congruence_check(const RecursionHierarchy& h, int k, const ModuliPair& m);

struct Terminal {
  enum class Kind { exact, substitute };
  Kind kind = Kind::exact;
  Complex value{0.0, 0.0};

  static Terminal exact() { return Terminal{}; }
  static Terminal substitute(Complex v) { return Terminal{Kind::substitute, v}; }
};

/// Evaluates the continued-fraction form: L*^(depth) at the deepest level
/// (Schur, or v I in substitute mode), then folded upward through the
/// congruence maps and the fractional relation.
EffectiveResult continued_fraction_eval(const RecursionHierarchy& h, const ModuliPair& m,
                                        int depth, const Terminal& terminal);

/// Moduli-independent data for fast level-0 evaluation: eigen-decomposition
/// of Gamma1 Lambda1 Gamma1 restricted to E plus coupling vectors.
struct SpectralStructure {
  Index dim_u = 0;
  CMatrix m01;                  // Gamma0 Lambda1 Gamma0 on U
  Eigen::VectorXd eigenvalues;  // of Gamma1 Lambda1 Gamma1 on E, in [0, 1]
  CMatrix couplings;            // dim U x dim E, column j = Gamma0 Lambda1 eigvec_j
};

SpectralStructure spectral_precompute(const Z2Collection& c);

/// L* = l2 I + (l1-l2) M01 - (l1-l2)^2 sum_j w_j w_j' / (l2 + (l1-l2) lam_j).
/// Throws PoleHit when a denominator falls below tolerance.
EffectiveResult effective_spectral(const SpectralStructure& s, const ModuliPair& m);

}  // namespace effop
