#include "effop/composite.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace effop {

Index GeometryGrid::pixel_count() const {
  Index n = 1;
  for (Index d : dims) n *= d;
  return n;
}

double GeometryGrid::volume_fraction(int which) const {
  Index count = 0;
  for (int p : phase)
    if (p == which) ++count;
  return double(count) / double(pixel_count());
}

namespace {

void check_grid(const GeometryGrid& g) {
  if (g.d < 1 || g.d > 3 || Index(g.dims.size()) != g.d)
    throw std::invalid_argument("grid: spatial dimension must be 1, 2 or 3");
  for (Index n : g.dims)
    if (n < 2) throw std::invalid_argument("grid: every dimension must be >= 2");
  if (Index(g.phase.size()) != g.pixel_count())
    throw std::invalid_argument("grid: phase array size mismatch");
  bool has1 = false, has2 = false;
  for (int p : g.phase) {
    if (p == 1) has1 = true;
    else if (p == 2) has2 = true;
    else throw std::invalid_argument("grid: phase values must be 1 or 2");
  }
  if (!has1 || !has2)
    throw std::invalid_argument("grid: both phases must be present");
}

}  // namespace

GeometryGrid laminate(Index n_along, Index n_across, double f1, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("laminate: axis must be 0 or 1");
  const double layers_exact = f1 * double(n_along);
  const Index layers = Index(std::llround(layers_exact));
  if (std::abs(layers_exact - double(layers)) > 1e-9)
    throw std::invalid_argument("laminate: f1 * n_along must be integral");
  if (layers < 1 || layers >= n_along)
    throw std::invalid_argument("laminate: slab would leave a phase empty");

  GeometryGrid g;
  g.d = 2;
  g.dims = (axis == 0) ? std::vector<Index>{n_along, n_across}
                       : std::vector<Index>{n_across, n_along};
  g.phase.resize(size_t(g.pixel_count()));
  for (Index x = 0; x < g.dims[0]; ++x)
    for (Index y = 0; y < g.dims[1]; ++y) {
      const Index along = (axis == 0) ? x : y;
      g.phase[size_t(x * g.dims[1] + y)] = (along < layers) ? 1 : 2;
    }
  check_grid(g);
  return g;
}

GeometryGrid checkerboard(Index n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("checkerboard: N must be even");
  GeometryGrid g;
  g.d = 2;
  g.dims = {n, n};
  g.phase.resize(size_t(n * n));
  const Index half = n / 2;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      g.phase[size_t(x * n + y)] = ((x < half) == (y < half)) ? 1 : 2;
  return g;
}

GridCollection build_grid_collection(const GeometryGrid& g) {
  check_grid(g);
  const int d = g.d;
  const Index npix = g.pixel_count();
  const Index ambient = d * npix;

  // frequency range per axis: integers in (-N/2, N/2]
  std::vector<std::vector<Index>> freqs;
  freqs.resize(size_t(d));
  for (int i = 0; i < d; ++i) {
    const Index n = g.dims[size_t(i)];
    for (Index k = -((n - 1) / 2); k <= n / 2; ++k)
      freqs[size_t(i)].push_back(k);
  }

  // enumerate pixels row-major alongside their integer coordinates
  std::vector<std::vector<Index>> coords;
  coords.resize(size_t(npix), std::vector<Index>(size_t(d)));
  {
    std::vector<Index> c(size_t(d), 0);
    for (Index p = 0; p < npix; ++p) {
      coords[size_t(p)] = c;
      for (int i = d - 1; i >= 0; --i) {
        if (++c[size_t(i)] < g.dims[size_t(i)]) break;
        c[size_t(i)] = 0;
      }
    }
  }

  const double inv_sqrt_n = 1.0 / std::sqrt(double(npix));
  auto fourier = [&](const std::vector<Index>& k) {
    CVector phi(npix);
    for (Index p = 0; p < npix; ++p) {
      double arg = 0.0;
      for (int i = 0; i < d; ++i)
        arg += double(k[size_t(i)]) * double(coords[size_t(p)][size_t(i)]) /
               double(g.dims[size_t(i)]);
      phi(p) = std::polar(inv_sqrt_n, 2.0 * M_PI * arg);
    }
    return phi;
  };

  // pixel-major layout: entry index = pixel * d + component
  auto field = [&](const CVector& phi, const Eigen::VectorXd& dir) {
    CVector v(ambient);
    for (Index p = 0; p < npix; ++p)
      for (int c = 0; c < d; ++c) v(p * d + c) = phi(p) * dir(c);
    return v;
  };

  Index dim_e = 0, dim_j = 0;
  std::vector<std::vector<Index>> nonzero;
  {
    std::vector<Index> k;
    k.resize(size_t(d));
    const Index total = [&] {
      Index t = 1;
      for (int i = 0; i < d; ++i) t *= Index(freqs[size_t(i)].size());
      return t;
    }();
    for (Index f = 0; f < total; ++f) {
      Index rem = f;
      bool zero = true;
      for (int i = d - 1; i >= 0; --i) {
        k[size_t(i)] = freqs[size_t(i)][size_t(rem % Index(freqs[size_t(i)].size()))];
        rem /= Index(freqs[size_t(i)].size());
        zero = zero && (k[size_t(i)] == 0);
      }
      if (!zero) nonzero.push_back(k);
    }
    dim_e = Index(nonzero.size());
    dim_j = (d - 1) * dim_e;
  }

  CMatrix ue(ambient, d), ee(ambient, dim_e), jj(ambient, dim_j);
  {
    const CVector phi0 = fourier(std::vector<Index>(size_t(d), 0));
    for (int c = 0; c < d; ++c) {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(d);
      dir(c) = 1.0;
      ue.col(c) = field(phi0, dir);
    }
  }
  Index je = 0, jcol = 0;
  for (const auto& k : nonzero) {
    Eigen::VectorXd kvec(d);
    for (int i = 0; i < d; ++i) kvec(i) = double(k[size_t(i)]);
    const Eigen::VectorXd khat = kvec / kvec.norm();
    const CVector phi = fourier(k);
    ee.col(je++) = field(phi, khat);
    // orthonormal completion of khat spans the divergence-free directions
    Eigen::MatrixXd comp(d, d);
    comp.col(0) = khat;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(comp.leftCols(1));
    Eigen::MatrixXd q = qr.householderQ();
    for (int c = 1; c < d; ++c) jj.col(jcol++) = field(phi, q.col(c));
  }

  GridCollection gc;
  gc.grid = g;
  gc.base.ambient_dim = ambient;
  gc.base.U = Basis{ambient, std::move(ue)};
  gc.base.E = Basis{ambient, std::move(ee)};
  gc.base.J = Basis{ambient, std::move(jj)};

  Index n1 = 0;
  for (int p : g.phase)
    if (p == 1) ++n1;
  CMatrix p1 = CMatrix::Zero(ambient, n1 * d), p2 = CMatrix::Zero(ambient, (npix - n1) * d);
  Index c1 = 0, c2 = 0;
  for (Index p = 0; p < npix; ++p)
    for (int c = 0; c < d; ++c) {
      if (g.phase[size_t(p)] == 1)
        p1(p * d + c, c1++) = 1.0;
      else
        p2(p * d + c, c2++) = 1.0;
    }
  gc.base.P1 = Basis{ambient, std::move(p1)};
  gc.base.P2 = Basis{ambient, std::move(p2)};
  return gc;
}

EffectiveResult effective_conductivity(const GeometryGrid& g, Complex sigma1,
                                       Complex sigma2, Method method) {
  const GridCollection gc = build_grid_collection(g);
  const ModuliPair m{sigma1, sigma2};
  switch (method) {
    case Method::schur: return effective_schur(gc.base, m);
    case Method::inverse_formula: return effective_inverse_formula(gc.base, m);
    case Method::spectral: return effective_spectral(spectral_precompute(gc.base), m);
    case Method::direct: {
      // column-by-column Z solve
      const Index du = gc.base.U.dim();
      EffectiveResult r;
      r.method = Method::direct;
      r.matrix = CMatrix::Zero(du, du);
      for (Index k = 0; k < du; ++k) {
        CVector e = CVector::Zero(du);
        e(k) = 1.0;
        r.matrix.col(k) = solve_z_direct(gc.base, m, e).j;
      }
      return r;
    }
    case Method::continued_fraction: {
      const RecursionHierarchy h = build_hierarchy(gc.base, 2, gc.base.tol);
      const int depth = int(h.levels.size()) - 1;
      return continued_fraction_eval(h, m, depth, Terminal::exact());
    }
  }
  throw std::invalid_argument("effective_conductivity: unknown method");
}

DegeneracyReport degeneracy_report(const GeometryGrid& g) {
  const GridCollection gc = build_grid_collection(g);
  auto [y, next] = derive_y(gc.base);
  const Basis ve = intersect(y.V, gc.base.E, gc.base.tol);
  const Basis vj = intersect(y.V, gc.base.J, gc.base.tol);
  DegeneracyReport r;
  r.dim_VE = ve.dim();
  r.dim_VJ = vj.dim();
  r.ve_witness = ve.vectors;
  r.vj_witness = vj.vectors;
  return r;
}

GeometryGrid grid_from_ascii(std::istream& in) {
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("grid ascii: empty input");
  const size_t width = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != width) throw std::invalid_argument("grid ascii: ragged rows");

  GeometryGrid g;
  if (rows.size() == 1) {
    g.d = 1;
    g.dims = {Index(width)};
  } else {
    g.d = 2;
    g.dims = {Index(rows.size()), Index(width)};
  }
  for (const auto& r : rows)
    for (char ch : r) {
      if (ch != '1' && ch != '2')
        throw std::invalid_argument("grid ascii: characters must be '1' or '2'");
      g.phase.push_back(ch - '0');
    }
  check_grid(g);
  return g;
}

GeometryGrid grid_from_ascii_string(const std::string& text) {
  std::istringstream in(text);
  return grid_from_ascii(in);
}

}  // namespace effop
