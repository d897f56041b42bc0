#pragma once

#include "effop/numlin.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace effop {

struct ModuliPair {
  Complex l1{1.0, 0.0};
  Complex l2{1.0, 0.0};

  bool invertible() const { return l1 != Complex(0.0) && l2 != Complex(0.0); }
  bool upper_half() const { return l1.imag() > 0.0 && l2.imag() > 0.0; }
};

inline ModuliPair operator*(Complex c, const ModuliPair& m) {
  return ModuliPair{c * m.l1, c * m.l2};
}

/// Ambient space with the two simultaneous orthogonal decompositions
/// H = U (+) E (+) J = P1 (+) P2.
struct Z2Collection {
  Index ambient_dim = 0;
  Basis U, E, J, P1, P2;
  Tolerances tol;
};

struct CheckResult {
  std::string label;
  double residual = 0.0;
  double threshold = 0.0;
  bool ok = true;
};

struct ValidationReport {
  bool passed = false;
  std::vector<CheckResult> checks;
  std::map<std::string, Index> dims;

  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.ok) return &c;
    return nullptr;
  }
};

/// Checks every structural invariant of the collection. Mathematically
/// invalid input is reported, not thrown; only malformed dimensions throw.
ValidationReport validate(const Z2Collection& c);

/// Two independent Haar-like random orthonormal frames split by the given
/// dimensions. Deterministic in seed.
Z2Collection random_collection(Index ambient_dim, Index dim_u, Index dim_e,
                               Index dim_j, Index dim_p1, std::uint64_t seed,
                               const Tolerances& tol = {});

/// L(l1,l2) = l1 Lambda1 + l2 Lambda2 as an ambient matrix.
CMatrix build_L(const Z2Collection& c, const ModuliPair& m);

/// L^{-1} = (1/l1) Lambda1 + (1/l2) Lambda2. Throws ZeroModulus.
CMatrix inverse_L(const Z2Collection& c, const ModuliPair& m);

/// 2-dim hand model: U = span{(1,1)/sqrt2}, E = span{(1,-1)/sqrt2}, J = {0},
/// P1 = span{e1}, P2 = span{e2}. Effective scalar is the harmonic mean.
Z2Collection series_model();

/// Same with E and J swapped; effective scalar is the arithmetic mean.
Z2Collection parallel_model();

}  // namespace effop
