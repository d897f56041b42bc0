#pragma once

#include "effop/collections.hpp"
#include "effop/errors.hpp"

#include <string>
#include <vector>

namespace effop {

enum class Method { schur, inverse_formula, direct, spectral, continued_fraction };

std::string method_name(Method m);

struct EffectiveResult {
  CMatrix matrix;  // dim U x dim U, U-basis coordinates
  Method method = Method::schur;
  double condition_estimate = 1.0;
};

struct IndexDiagnostics {
  Index dim_ker = 0;
  Index dim_coker = 0;
  long index = 0;
  bool invertible = false;
};

struct ZSolution {
  CVector j;        // U-coordinates
  CVector E_field;  // E-coordinates
  CVector J_field;  // J-coordinates
  double residual = 0.0;
};

IndexDiagnostics fredholm_diagnostics(const CMatrix& m, const Tolerances& tol = {});

/// Solves j + J = L(e + E) for given e via block elimination.
ZSolution solve_z_direct(const Z2Collection& c, const ModuliPair& m, const CVector& e);

/// L* = L00 - L01 L11^{-1} L10. condition_estimate is cond(L11).
EffectiveResult effective_schur(const Z2Collection& c, const ModuliPair& m);

/// L* = Gamma0 [(Gamma0+Gamma2) L^{-1} (Gamma0+Gamma2)]^{-1} Gamma0.
EffectiveResult effective_inverse_formula(const Z2Collection& c, const ModuliPair& m);

struct CoupledInverseCheck {
  double a_inv_residual = 0.0;  // explicit A^{-1} formula vs direct inverse
  double b_inv_residual = 0.0;
  IndexDiagnostics a_diag;
  IndexDiagnostics b_diag;
};

/// A = Gamma1 L Gamma1 on E and B = (Gamma0+Gamma2) L^{-1} (Gamma0+Gamma2)
/// on U (+) J are invertible simultaneously with explicit inverse formulas.
CoupledInverseCheck coupled_inverse_check(const Z2Collection& c, const ModuliPair& m);

struct PropertySample {
  ModuliPair m;
  Complex c{1.0, 0.0};
};

struct PropertyRow {
  bool solvable = false;
  double homogeneity_residual = 0.0;   // ||L*(m) - (1/c) L*(c m)|| relative
  double normalization_residual = 0.0; // ||L*(1,1) - I||_F
  double herglotz_min = 0.0;           // lambda_min(Im L*(m))
  double herglotz_bound = 0.0;         // min(Im l1, Im l2)
};

std::vector<PropertyRow> property_report(const Z2Collection& c,
                                         const std::vector<PropertySample>& samples);

/// lambda_min of (M - M')/2i.
double min_imag_eigenvalue(const CMatrix& m);

}  // namespace effop
