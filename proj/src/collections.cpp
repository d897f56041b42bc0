#include "effop/collections.hpp"
#include "effop/errors.hpp"

#include <cmath>
#include <random>

namespace effop {

namespace {

// Deterministic complex Gaussian fill: explicit Box-Muller over the raw
// mt19937_64 stream so that a seed pins the collection bit-for-bit.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double uniform() {
    // 53-bit mantissa in (0, 1]
    return (double(rng_() >> 11) + 1.0) * 0x1.0p-53;
  }

  Complex gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
  }

  CMatrix matrix(Index rows, Index cols) {
    CMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = gaussian();
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

void check_basis(ValidationReport& r, const std::string& label, const Basis& b,
                 Index ambient, double ortho_tol) {
  if (b.ambient_dim != ambient || b.vectors.rows() != ambient)
    throw std::invalid_argument("validate: basis " + label + " has wrong ambient dimension");
  r.checks.push_back({label + "_ortho", ortho_residual(b), ortho_tol,
                      ortho_residual(b) <= ortho_tol});
  r.dims[label] = b.dim();
}

void check_decomposition(ValidationReport& r, const std::string& label,
                         const std::vector<const Basis*>& parts, Index ambient) {
  CMatrix sum = CMatrix::Zero(ambient, ambient);
  Index total = 0;
  for (const Basis* b : parts) {
    sum += projector(*b);
    total += b->dim();
  }
  const double res = (sum - CMatrix::Identity(ambient, ambient)).norm();
  r.checks.push_back({label + "_resolution", res, 1e-10, res <= 1e-10});
  r.checks.push_back({label + "_dim_sum", double(total - ambient), 0.0, total == ambient});
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t k = i + 1; k < parts.size(); ++k) {
      const double cross = (parts[i]->vectors.adjoint() * parts[k]->vectors).norm();
      r.checks.push_back({label + "_cross_" + std::to_string(i) + std::to_string(k),
                          cross, 1e-10, cross <= 1e-10});
    }
}

}  // namespace

ValidationReport validate(const Z2Collection& c) {
  ValidationReport r;
  const Index n = c.ambient_dim;
  check_basis(r, "U", c.U, n, c.tol.ortho_tol);
  check_basis(r, "E", c.E, n, c.tol.ortho_tol);
  check_basis(r, "J", c.J, n, c.tol.ortho_tol);
  check_basis(r, "P1", c.P1, n, c.tol.ortho_tol);
  check_basis(r, "P2", c.P2, n, c.tol.ortho_tol);
  check_decomposition(r, "UEJ", {&c.U, &c.E, &c.J}, n);
  check_decomposition(r, "P", {&c.P1, &c.P2}, n);
  r.checks.push_back({"P1_nonzero", double(c.P1.dim()), 0.0, c.P1.dim() >= 1});
  r.checks.push_back({"P2_nonzero", double(c.P2.dim()), 0.0, c.P2.dim() >= 1});
  r.passed = true;
  for (const auto& ch : r.checks) r.passed = r.passed && ch.ok;
  return r;
}

Z2Collection random_collection(Index ambient_dim, Index dim_u, Index dim_e,
                               Index dim_j, Index dim_p1, std::uint64_t seed,
                               const Tolerances& tol) {
  if (dim_u + dim_e + dim_j != ambient_dim)
    throw std::invalid_argument("random_collection: dim_u + dim_e + dim_j != ambient_dim");
  if (dim_p1 < 1 || dim_p1 > ambient_dim - 1)
    throw std::invalid_argument("random_collection: need 1 <= dim_p1 <= ambient_dim - 1");

  GaussianStream gs(seed);
  const Basis frame_uej = orthonormalize(gs.matrix(ambient_dim, ambient_dim), tol);
  const Basis frame_p = orthonormalize(gs.matrix(ambient_dim, ambient_dim), tol);
  if (frame_uej.dim() != ambient_dim || frame_p.dim() != ambient_dim)
    throw std::runtime_error("random_collection: frame rank-deficient");

  Z2Collection c;
  c.ambient_dim = ambient_dim;
  c.tol = tol;
  c.U = Basis{ambient_dim, frame_uej.vectors.middleCols(0, dim_u)};
  c.E = Basis{ambient_dim, frame_uej.vectors.middleCols(dim_u, dim_e)};
  c.J = Basis{ambient_dim, frame_uej.vectors.middleCols(dim_u + dim_e, dim_j)};
  c.P1 = Basis{ambient_dim, frame_p.vectors.middleCols(0, dim_p1)};
  c.P2 = Basis{ambient_dim, frame_p.vectors.middleCols(dim_p1, ambient_dim - dim_p1)};
  return c;
}

CMatrix build_L(const Z2Collection& c, const ModuliPair& m) {
  return m.l1 * projector(c.P1) + m.l2 * projector(c.P2);
}

CMatrix inverse_L(const Z2Collection& c, const ModuliPair& m) {
  if (!m.invertible()) throw ZeroModulus();
  return (1.0 / m.l1) * projector(c.P1) + (1.0 / m.l2) * projector(c.P2);
}

namespace {
Z2Collection two_dim_model(bool series) {
  const double s = 1.0 / std::sqrt(2.0);
  Z2Collection c;
  c.ambient_dim = 2;
  CMatrix u(2, 1), w(2, 1), p1(2, 1), p2(2, 1);
  u << Complex(s), Complex(s);
  w << Complex(s), Complex(-s);
  p1 << Complex(1.0), Complex(0.0);
  p2 << Complex(0.0), Complex(1.0);
  c.U = Basis{2, u};
  if (series) {
    c.E = Basis{2, w};
    c.J = Basis::empty(2);
  } else {
    c.E = Basis::empty(2);
    c.J = Basis{2, w};
  }
  c.P1 = Basis{2, p1};
  c.P2 = Basis{2, p2};
  return c;
}
}  // namespace

Z2Collection series_model() { return two_dim_model(true); }
Z2Collection parallel_model() { return two_dim_model(false); }

}  // namespace effop
