#pragma once

#include "effop/zsolver.hpp"

namespace effop {

/// The derived Y(2) collection K = E (+) J = V (+) P1^(1) (+) P2^(1).
/// Pi1 = projector(V), Pi2 = projector(H1).
struct Y2Collection {
  Z2Collection parent;
  Basis K;
  Basis V;
  Basis P1_1;  // P1 cap K
  Basis P2_1;  // P2 cap K
  Basis H1;    // P1_1 (+) P2_1
  double beta = 0.0;  // min eigenvalue of Gamma2 Pi2 Gamma2 restricted to J
};

/// The level-1 Z(2) collection expressed in H^(1) coordinates. `frame` maps
/// level-1 coordinates back to the parent ambient space (its columns are the
/// H^(1) basis).
struct Level1Z {
  Z2Collection z;
  CMatrix frame;  // parent ambient_dim x dim H1
};

std::pair<Y2Collection, Level1Z> derive_y(const Z2Collection& c);

struct YSolvability {
  Index dim_VJ = 0;
  Index dim_VE = 0;
  IndexDiagnostics f_diag;
  IndexDiagnostics g_diag;
  bool assumption_holds = false;  // iff dim_VJ == 0
  double beta = 0.0;
};

/// F = Gamma2 Pi2 L^{-1} Pi2 Gamma2 on J, G = (Gamma0+Gamma2) L^{-1}
/// (Gamma0+Gamma2) on U (+) J, with rank diagnostics for both.
YSolvability check_solvability(const Y2Collection& y, const ModuliPair& m);

/// Y* = Pi1 Gamma2 F^{-1} Gamma2 Pi1 in V-coordinates.
EffectiveResult y_operator(const Y2Collection& y, const ModuliPair& m);

struct YSolution {
  CVector E_field;  // E-coordinates
  CVector J_field;  // J-coordinates
  CVector j1;       // V-coordinates, Pi1 J
  double residual = 0.0;
  Index nullspace_dim = 0;
};

/// Least-squares solve of the stacked Y-problem constraints for a given
/// e1 in V-coordinates.
YSolution solve_y_direct(const Y2Collection& y, const ModuliPair& m, const CVector& e1);

/// L* = Gamma0 L Gamma0 - Gamma0 L Pi1 [Pi1 L Pi1 + Y*]^{-1} Pi1 L Gamma0.
EffectiveResult fractional_relation(const Z2Collection& c, const Y2Collection& y,
                                    const ModuliPair& m);

/// Same fold with an externally supplied Y* matrix (used by the recursion).
CMatrix fractional_fold(const Z2Collection& c, const Basis& v, const CMatrix& y_star,
                        const ModuliPair& m);

}  // namespace effop
