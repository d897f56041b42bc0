#pragma once

#include "effop/numlin.hpp"

#include <stdexcept>
#include <string>

namespace effop {

struct ZeroModulus : std::runtime_error {
  ZeroModulus() : std::runtime_error("ZeroModulus: l1 = 0 or l2 = 0") {}
};

/// Gamma1 L Gamma1 rank-deficient on E. Carries the kernel dimension and a
/// witness vector in E-coordinates.
struct SingularL11 : std::runtime_error {
  Index dim_ker;
  CVector witness;
  SingularL11(Index k, CVector w)
      : std::runtime_error("SingularL11: kernel dimension " + std::to_string(k)),
        dim_ker(k),
        witness(std::move(w)) {}
};

struct SingularB : std::runtime_error {
  Index dim_ker;
  SingularB(Index k)
      : std::runtime_error("SingularB: kernel dimension " + std::to_string(k)),
        dim_ker(k) {}
};

struct SingularF : std::runtime_error {
  Index dim_ker;
  Index dim_coker;
  SingularF(Index k, Index ck)
      : std::runtime_error("SingularF: kernel dimension " + std::to_string(k)),
        dim_ker(k),
        dim_coker(ck) {}
};

struct SingularShiftedY : std::runtime_error {
  Index dim_ker;
  SingularShiftedY(Index k)
      : std::runtime_error("SingularShiftedY: Pi1 L Pi1 + Y* rank-deficient, kernel dimension " +
                           std::to_string(k)),
        dim_ker(k) {}
};

struct PoleHit : std::runtime_error {
  PoleHit() : std::runtime_error("PoleHit: spectral denominator below tolerance") {}
};

struct DegenerateIntersection : std::runtime_error {
  enum class Which { VJ, VE };
  Which which;
  Index dim;
  DegenerateIntersection(Which w, Index d)
      : std::runtime_error(std::string("DegenerateIntersection: ") +
                           (w == Which::VJ ? "V cap J" : "V cap E") +
                           " has dimension " + std::to_string(d)),
        which(w),
        dim(d) {}
};

}  // namespace effop
