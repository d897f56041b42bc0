#include "effop/json_io.hpp"

#include <cstdlib>

namespace effop {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("complex: expected [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix: expected array of rows");
  const Index rows = Index(j.size());
  const Index cols = rows > 0 ? Index(j[0].size()) : 0;
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (Index(j[size_t(i)].size()) != cols)
      throw std::invalid_argument("matrix: ragged rows");
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[size_t(i)][size_t(k)]);
  }
  return m;
}

namespace {

json basis_to_json(const Basis& b) {
  // stored as a list of column vectors
  json cols = json::array();
  for (Index k = 0; k < b.dim(); ++k) {
    json col = json::array();
    for (Index i = 0; i < b.ambient_dim; ++i) col.push_back(complex_to_json(b.vectors(i, k)));
    cols.push_back(std::move(col));
  }
  return cols;
}

Basis basis_from_json(const json& j, Index ambient) {
  if (!j.is_array()) throw std::invalid_argument("basis: expected array of vectors");
  const Index k = Index(j.size());
  CMatrix v(ambient, k);
  for (Index c = 0; c < k; ++c) {
    const json& col = j[size_t(c)];
    if (Index(col.size()) != ambient)
      throw std::invalid_argument("basis: vector length mismatch");
    for (Index i = 0; i < ambient; ++i) v(i, c) = complex_from_json(col[size_t(i)]);
  }
  return Basis{ambient, std::move(v)};
}

json tol_to_json(const Tolerances& t) {
  return json{{"rank_tol", t.rank_tol},
              {"ortho_tol", t.ortho_tol},
              {"solve_tol", t.solve_tol},
              {"angle_tol", t.angle_tol}};
}

Tolerances tol_from_json(const json& j) {
  Tolerances t;
  t.rank_tol = j.value("rank_tol", t.rank_tol);
  t.ortho_tol = j.value("ortho_tol", t.ortho_tol);
  t.solve_tol = j.value("solve_tol", t.solve_tol);
  t.angle_tol = j.value("angle_tol", t.angle_tol);
  return t;
}

}  // namespace

json collection_to_json(const Z2Collection& c) {
  return json{{"ambient_dim", c.ambient_dim},
              {"tol", tol_to_json(c.tol)},
              {"bases",
               {{"U", basis_to_json(c.U)},
                {"E", basis_to_json(c.E)},
                {"J", basis_to_json(c.J)},
                {"P1", basis_to_json(c.P1)},
                {"P2", basis_to_json(c.P2)}}}};
}

Z2Collection collection_from_json(const json& j) {
  Z2Collection c;
  c.ambient_dim = j.at("ambient_dim").get<Index>();
  if (c.ambient_dim < 0) throw std::invalid_argument("collection: negative ambient_dim");
  if (j.contains("tol")) c.tol = tol_from_json(j.at("tol"));
  const json& b = j.at("bases");
  c.U = basis_from_json(b.at("U"), c.ambient_dim);
  c.E = basis_from_json(b.at("E"), c.ambient_dim);
  c.J = basis_from_json(b.at("J"), c.ambient_dim);
  c.P1 = basis_from_json(b.at("P1"), c.ambient_dim);
  c.P2 = basis_from_json(b.at("P2"), c.ambient_dim);
  return c;
}

json report_to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"label", c.label},
                      {"residual", c.residual},
                      {"threshold", c.threshold},
                      {"ok", c.ok}});
  json dims = json::object();
  for (const auto& [k, v] : r.dims) dims[k] = v;
  return json{{"passed", r.passed}, {"checks", std::move(checks)}, {"dims", std::move(dims)}};
}

json effective_to_json(const EffectiveResult& r) {
  return json{{"matrix", matrix_to_json(r.matrix)},
              {"method", method_name(r.method)},
              {"condition_estimate", r.condition_estimate}};
}

json hierarchy_to_json(const RecursionHierarchy& h, const SpectralStructure* s) {
  json levels = json::array();
  for (const auto& lvl : h.levels) {
    json l{{"k", lvl.k},
           {"dims",
            {{"u", lvl.dims.u},
             {"e", lvl.dims.e},
             {"j", lvl.dims.j},
             {"v", lvl.dims.v},
             {"u_next", lvl.dims.u_next},
             {"w_next", lvl.dims.w_next}}},
           {"flags",
            {{"p_cap_u_trivial", lvl.flags.p_cap_u_trivial},
             {"e_cap_v_trivial", lvl.flags.e_cap_v_trivial},
             {"j_cap_v_trivial", lvl.flags.j_cap_v_trivial}}},
           {"angle_tol", lvl.angle_tol_used},
           {"K", matrix_to_json(lvl.K_map)},
           {"K_prime", matrix_to_json(lvl.K_prime)},
           {"normalization",
            {{"m01", matrix_to_json(lvl.structure.m0[0])},
             {"m02", matrix_to_json(lvl.structure.m0[1])}}}};
    levels.push_back(std::move(l));
  }
  const char* term = h.termination == Termination::depth_reached ? "depth_reached"
                     : h.termination == Termination::dim_zero    ? "dim_zero"
                                                                 : "degenerate";
  json out{{"levels", std::move(levels)}, {"termination", term}};
  if (s) {
    json eig = json::array(), weights = json::array();
    for (Index i = 0; i < s->eigenvalues.size(); ++i) {
      eig.push_back(s->eigenvalues(i));
      weights.push_back(s->couplings.col(i).squaredNorm());
    }
    out["spectral"] = json{{"eigenvalues", std::move(eig)}, {"weights", std::move(weights)}};
  }
  return out;
}

json grid_to_json(const GeometryGrid& g) {
  return json{{"dims", g.dims}, {"phase", g.phase}};
}

GeometryGrid grid_from_json(const json& j) {
  GeometryGrid g;
  g.dims = j.at("dims").get<std::vector<Index>>();
  g.phase = j.at("phase").get<std::vector<int>>();
  g.d = int(g.dims.size());
  return g;
}

Complex parse_complex(const std::string& text) {
  // grammar: [sign] real [sign imag 'i'] | [sign] imag 'i'
  if (text.empty()) throw std::invalid_argument("complex literal: empty");
  const char* p = text.c_str();

  auto read_number = [&](const char*& q) -> double {
    char* end = nullptr;
    const double v = std::strtod(q, &end);
    if (end == q) throw std::invalid_argument("complex literal: " + text);
    q = end;
    return v;
  };

  double first = read_number(p);
  if (*p == '\0') return Complex(first, 0.0);
  if (*p == 'i' && *(p + 1) == '\0') return Complex(0.0, first);
  if (*p != '+' && *p != '-') throw std::invalid_argument("complex literal: " + text);
  double second = read_number(p);
  if (*p == 'i' && *(p + 1) == '\0') return Complex(first, second);
  throw std::invalid_argument("complex literal: " + text);
}

}  // namespace effop
