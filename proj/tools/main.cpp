// effop: validation, generation, evaluation, recursion, sweeps and grid
// workflows over orthogonal subspace collections.
//
// Exit codes: 0 success, 1 mathematical/solver failure, 2 input malformation.

#include "effop/json_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace effop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMath = 1;
constexpr int kExitInput = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << text;
}

Z2Collection load_collection(const std::string& path) {
  return collection_from_json(read_json_file(path));
}

GeometryGrid load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return grid_from_json(json::parse(text));
  return grid_from_ascii_string(text);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// Maps a solver exception to its machine-readable error object.
int emit_math_error(const std::exception& e) {
  json err;
  if (auto* s = dynamic_cast<const SingularL11*>(&e)) {
    err = {{"error", "SingularL11"}, {"dim_ker", s->dim_ker}};
  } else if (auto* s = dynamic_cast<const SingularB*>(&e)) {
    err = {{"error", "SingularB"}, {"dim_ker", s->dim_ker}};
  } else if (auto* s = dynamic_cast<const SingularF*>(&e)) {
    err = {{"error", "SingularF"}, {"dim_ker", s->dim_ker}, {"dim_coker", s->dim_coker}};
  } else if (auto* s = dynamic_cast<const SingularShiftedY*>(&e)) {
    err = {{"error", "SingularShiftedY"}, {"dim_ker", s->dim_ker}};
  } else if (dynamic_cast<const ZeroModulus*>(&e)) {
    err = {{"error", "ZeroModulus"}};
  } else if (dynamic_cast<const PoleHit*>(&e)) {
    err = {{"error", "PoleHit"}};
  } else if (auto* s = dynamic_cast<const DegenerateIntersection*>(&e)) {
    err = {{"error", "DegenerateIntersection"},
           {"which", s->which == DegenerateIntersection::Which::VJ ? "VJ" : "VE"},
           {"dim", s->dim}};
  } else {
    err = {{"error", "solver"}, {"detail", e.what()}};
  }
  emit(err);
  return kExitMath;
}

struct MethodSpec {
  Method method = Method::schur;
  int cf_depth = 0;
};

MethodSpec parse_method(const std::string& name) {
  if (name == "schur") return {Method::schur, 0};
  if (name == "inverse") return {Method::inverse_formula, 0};
  if (name == "fraction") return {Method::direct, 0};
  if (name == "spectral") return {Method::spectral, 0};
  if (name.rfind("cf:", 0) == 0)
    return {Method::continued_fraction, std::stoi(name.substr(3))};
  throw std::invalid_argument("unknown method: " + name);
}

EffectiveResult run_effective(const Z2Collection& c, const ModuliPair& m,
                              const MethodSpec& spec) {
  switch (spec.method) {
    case Method::schur: return effective_schur(c, m);
    case Method::inverse_formula: return effective_inverse_formula(c, m);
    case Method::spectral: return effective_spectral(spectral_precompute(c), m);
    case Method::direct: {
      auto [y, next] = derive_y(c);
      return fractional_relation(c, y, m);
    }
    case Method::continued_fraction: {
      const RecursionHierarchy h = build_hierarchy(c, spec.cf_depth + 1, c.tol);
      const int depth = std::min<int>(spec.cf_depth, int(h.levels.size()) - 1);
      return continued_fraction_eval(h, m, depth, Terminal::exact());
    }
  }
  throw std::invalid_argument("unknown method");
}

int cmd_validate(const std::string& path) {
  const ValidationReport r = validate(load_collection(path));
  emit(report_to_json(r));
  return r.passed ? kExitOk : kExitMath;
}

int cmd_effective(const std::string& path, const std::string& l1, const std::string& l2,
                  const std::string& method) {
  const Z2Collection c = load_collection(path);
  const ModuliPair m{parse_complex(l1), parse_complex(l2)};
  const MethodSpec spec = parse_method(method);
  try {
    emit(effective_to_json(run_effective(c, m, spec)));
  } catch (const std::runtime_error& e) {
    return emit_math_error(e);
  }
  return kExitOk;
}

int cmd_recurse(const std::string& path, int depth) {
  const Z2Collection c = load_collection(path);
  const RecursionHierarchy h = build_hierarchy(c, depth, c.tol);
  const SpectralStructure s = spectral_precompute(c);
  emit(hierarchy_to_json(h, &s));
  return kExitOk;  // degenerate termination is reported, not an error
}

int cmd_sweep(const std::string& path, const std::string& fix, const std::string& value,
              double re_min, double re_max, int n_re, double im_min, double im_max,
              int n_im, const std::string& out) {
  if (fix != "l1" && fix != "l2")
    throw std::invalid_argument("--fix must be l1 or l2");
  if (n_re < 1 || n_im < 1) throw std::invalid_argument("grid counts must be >= 1");
  const Z2Collection c = load_collection(path);
  const SpectralStructure s = spectral_precompute(c);
  const Complex fixed = parse_complex(value);

  std::ostringstream csv;
  csv << "re,im";
  for (Index i = 0; i < s.dim_u; ++i)
    for (Index j = 0; j < s.dim_u; ++j)
      csv << ",re_" << i << j << ",im_" << i << j;
  csv << ",lambda_min_im,pole\n";
  csv.precision(17);

  for (int a = 0; a < n_re; ++a)
    for (int b = 0; b < n_im; ++b) {
      const double re = n_re == 1 ? re_min : re_min + (re_max - re_min) * a / (n_re - 1);
      const double im = n_im == 1 ? im_min : im_min + (im_max - im_min) * b / (n_im - 1);
      const Complex varying(re, im);
      const ModuliPair m = fix == "l1" ? ModuliPair{fixed, varying}
                                       : ModuliPair{varying, fixed};
      csv << re << "," << im;
      try {
        const EffectiveResult r = effective_spectral(s, m);
        for (Index i = 0; i < s.dim_u; ++i)
          for (Index j = 0; j < s.dim_u; ++j)
            csv << "," << r.matrix(i, j).real() << "," << r.matrix(i, j).imag();
        csv << "," << min_imag_eigenvalue(r.matrix) << ",0\n";
      } catch (const PoleHit&) {
        for (Index i = 0; i < 2 * s.dim_u * s.dim_u + 1; ++i) csv << ",nan";
        csv << ",1\n";
      }
    }

  if (out.empty())
    std::cout << csv.str();
  else
    write_text_file(out, csv.str());
  return kExitOk;
}

int cmd_random(Index dim, Index du, Index de, Index dj, Index dp1, std::uint64_t seed,
               const std::string& out) {
  const Z2Collection c = random_collection(dim, du, de, dj, dp1, seed);
  const json j = collection_to_json(c);
  if (out.empty())
    emit(j);
  else
    write_text_file(out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_grid(const std::string& geometry, const std::string& sigma1,
             const std::string& sigma2, const std::string& method,
             const std::string& emit_collection) {
  const GeometryGrid g = load_geometry(geometry);
  if (!emit_collection.empty()) {
    const GridCollection gc = build_grid_collection(g);
    write_text_file(emit_collection, collection_to_json(gc.base).dump(2) + "\n");
    return kExitOk;
  }
  const MethodSpec spec = parse_method(method);
  try {
    const EffectiveResult r =
        effective_conductivity(g, parse_complex(sigma1), parse_complex(sigma2),
                               spec.method);
    const DegeneracyReport deg = degeneracy_report(g);
    emit(json{{"sigma_star", matrix_to_json(r.matrix)},
              {"method", method_name(r.method)},
              {"diagnostics",
               {{"condition_estimate", r.condition_estimate},
                {"dim_VE", deg.dim_VE},
                {"dim_VJ", deg.dim_VJ},
                {"volume_fraction_1", g.volume_fraction(1)},
                {"lambda_min_im", min_imag_eigenvalue(r.matrix)}}}});
  } catch (const std::runtime_error& e) {
    return emit_math_error(e);
  }
  return kExitOk;
}

// One named property check; verify stops listing at the first failure but
// evaluates everything for the ledger.
struct VerifyRow {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool ok = true;
};

void verify_collection(const Z2Collection& c, std::uint64_t seed,
                       std::vector<VerifyRow>& rows) {
  auto push = [&](const std::string& name, double res, double thr) {
    rows.push_back({name, res, thr, res <= thr});
  };

  const ValidationReport vr = validate(c);
  double worst = 0.0;
  for (const auto& chk : vr.checks)
    worst = std::max(worst, chk.threshold > 0 ? chk.residual / chk.threshold
                                              : chk.residual);
  rows.push_back({"collection_invariants", worst, 1.0, vr.passed});
  if (!vr.passed) return;

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto cplx = [&] {
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.1, 2.0);
    return Complex(re(rng), im(rng));
  };

  // L algebra
  {
    const ModuliPair m{cplx(), cplx()};
    const CMatrix id = build_L(c, m) * inverse_L(c, m);
    push("L_inverse_identity",
         (id - CMatrix::Identity(c.ambient_dim, c.ambient_dim)).norm(), 1e-12 * c.ambient_dim);
  }
  // normalization / homogeneity / Herglotz
  {
    std::vector<PropertySample> samples;
    for (int i = 0; i < 5; ++i) samples.push_back({ModuliPair{cplx(), cplx()}, cplx()});
    const auto report = property_report(c, samples);
    double norm_res = 0.0, hom = 0.0, herg = 0.0;
    for (const auto& row : report) {
      if (!row.solvable) continue;
      norm_res = std::max(norm_res, row.normalization_residual);
      hom = std::max(hom, row.homogeneity_residual);
      herg = std::max(herg, row.herglotz_bound - row.herglotz_min);
    }
    push("normalization", norm_res, 1e-10);
    push("homogeneity", hom, 1e-10);
    push("herglotz_lower_bound", herg, 1e-9);
  }
  // representation equivalence + coupled inverses
  {
    const ModuliPair m{cplx(), cplx()};
    const EffectiveResult a = effective_schur(c, m);
    const EffectiveResult b = effective_inverse_formula(c, m);
    push("method_equivalence",
         (a.matrix - b.matrix).norm() / std::max(a.matrix.norm(), 1e-300), 1e-8);
    const CoupledInverseCheck ci = coupled_inverse_check(c, m);
    push("coupled_inverse_A", ci.a_inv_residual, 1e-10);
    push("coupled_inverse_B", ci.b_inv_residual, 1e-10);
  }
  // recursion layer
  {
    const RecursionHierarchy h = build_hierarchy(c, 3, c.tol);
    const RecursionLevel& l0 = h.levels[0];
    const Index lam1u = rank_of(projector(c.P1) * c.U.vectors, c.tol);
    const Index lam2u = rank_of(projector(c.P2) * c.U.vectors, c.tol);
    push("dim_identity_V",
         std::abs(double(l0.dims.v - (lam1u + lam2u - l0.dims.u))), 0.0);
    if (l0.flags.all()) {
      push("congruence_KprimeKdag",
           (l0.K_prime * l0.K_map.adjoint() +
            CMatrix::Identity(l0.dims.v, l0.dims.v)).norm(), 1e-10);
      const ModuliPair m{cplx(), cplx()};
      push("congruence_theorem", congruence_check(h, 0, m), 1e-8);
      const EffectiveResult cf = continued_fraction_eval(h, m, 1, Terminal::exact());
      const EffectiveResult ref = effective_schur(c, m);
      push("continued_fraction",
           (cf.matrix - ref.matrix).norm() / std::max(ref.matrix.norm(), 1e-300), 1e-7);
    }
  }
  // spectral fast path
  {
    const SpectralStructure s = spectral_precompute(c);
    const ModuliPair m{cplx(), cplx()};
    const EffectiveResult a = effective_spectral(s, m);
    const EffectiveResult b = effective_schur(c, m);
    push("spectral_path",
         (a.matrix - b.matrix).norm() / std::max(b.matrix.norm(), 1e-300), 1e-8);
  }
}

int cmd_verify(const std::string& file, const std::string& seed_range, Index dim) {
  std::vector<VerifyRow> rows;
  if (!file.empty()) {
    verify_collection(load_collection(file), 1, rows);
  } else {
    const size_t sep = seed_range.find("..");
    if (sep == std::string::npos)
      throw std::invalid_argument("--seed-range must look like 1..50");
    const std::uint64_t lo = std::stoull(seed_range.substr(0, sep));
    const std::uint64_t hi = std::stoull(seed_range.substr(sep + 2));
    if (dim < 4) throw std::invalid_argument("--dim must be >= 4 for seeded verify");
    const Index du = dim / 4, dp1 = dim / 2;
    const Index de = (dim - du) / 2, dj = dim - du - de;
    for (std::uint64_t s = lo; s <= hi; ++s)
      verify_collection(random_collection(dim, du, de, dj, dp1, s), s, rows);
  }

  const VerifyRow* first_fail = nullptr;
  for (const auto& r : rows) {
    std::cout << (r.ok ? "pass" : "FAIL") << "  " << r.name << "  residual=" << r.residual
              << " threshold=" << r.threshold << "\n";
    if (!r.ok && !first_fail) first_fail = &r;
  }
  if (first_fail) {
    std::cout << "first failing invariant: " << first_fail->name << "\n";
    return kExitMath;
  }
  std::cout << "all " << rows.size() << " checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"effective-operator engine for orthogonal subspace collections"};
  app.require_subcommand(1);

  std::string path, l1 = "1", l2 = "1", method = "schur", out;
  int depth = 8;

  auto* validate_cmd = app.add_subcommand("validate", "check a collection file");
  validate_cmd->add_option("file", path)->required();

  auto* eff = app.add_subcommand("effective", "compute the effective operator");
  eff->add_option("file", path)->required();
  eff->add_option("--l1", l1);
  eff->add_option("--l2", l2);
  eff->add_option("--method", method)
      ->description("schur | inverse | fraction | spectral | cf:depth");

  auto* rec = app.add_subcommand("recurse", "build the recursion hierarchy");
  rec->add_option("file", path)->required();
  rec->add_option("--depth", depth);

  std::string fix = "l2", fix_value = "1";
  double re_min = 0.0, re_max = 1.0, im_min = 0.0, im_max = 1.0;
  int n_re = 1, n_im = 1;
  auto* sweep = app.add_subcommand("sweep", "moduli-grid sweep to CSV");
  sweep->add_option("file", path)->required();
  sweep->add_option("--fix", fix)->description("which modulus stays fixed: l1 | l2");
  sweep->add_option("--value", fix_value)->description("fixed modulus, a+bi literal");
  sweep->add_option("--re-min", re_min);
  sweep->add_option("--re-max", re_max);
  sweep->add_option("--n-re", n_re);
  sweep->add_option("--im-min", im_min);
  sweep->add_option("--im-max", im_max);
  sweep->add_option("--n-im", n_im);
  sweep->add_option("-o,--output", out);

  Index dim = 8, du = 2, de = 3, dj = 3, dp1 = 4;
  std::uint64_t seed = 1;
  auto* rnd = app.add_subcommand("random", "emit a seeded random collection");
  rnd->add_option("--dim", dim);
  rnd->add_option("--du", du);
  rnd->add_option("--de", de);
  rnd->add_option("--dj", dj);
  rnd->add_option("--dp1", dp1);
  rnd->add_option("--seed", seed);
  rnd->add_option("-o,--output", out);

  std::string geometry, sigma1 = "1", sigma2 = "1", emit_collection;
  auto* grid = app.add_subcommand("grid", "periodic-conductivity grid workflows");
  grid->add_option("--geometry", geometry)->required();
  grid->add_option("--sigma1", sigma1);
  grid->add_option("--sigma2", sigma2);
  grid->add_option("--method", method);
  grid->add_option("--emit-collection", emit_collection)
      ->description("write the grid's collection file instead of solving");

  std::string verify_file, seed_range;
  auto* verify = app.add_subcommand("verify", "run the full property suite");
  verify->add_option("--file", verify_file);
  verify->add_option("--seed-range", seed_range)->description("e.g. 1..50");
  verify->add_option("--dim", dim);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(path);
    if (eff->parsed()) return cmd_effective(path, l1, l2, method);
    if (rec->parsed()) return cmd_recurse(path, depth);
    if (sweep->parsed())
      return cmd_sweep(path, fix, fix_value, re_min, re_max, n_re, im_min, im_max, n_im,
                       out);
    if (rnd->parsed()) return cmd_random(dim, du, de, dj, dp1, seed, out);
    if (grid->parsed()) return cmd_grid(geometry, sigma1, sigma2, method, emit_collection);
    if (verify->parsed()) return cmd_verify(verify_file, seed_range, dim);
  } catch (const json::exception& e) {
    emit(json{{"error", "parse"}, {"detail", e.what()}});
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    emit(json{{"error", "input"}, {"detail", e.what()}});
    return kExitInput;
  } catch (const std::exception& e) {
    return emit_math_error(e);
  }
  return kExitInput;
}
