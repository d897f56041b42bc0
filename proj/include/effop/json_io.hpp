#pragma once

#include "effop/composite.hpp"

#include <json.hpp>

namespace effop {

using json = nlohmann::json;

json complex_to_json(const Complex& z);
Complex complex_from_json(const json& j);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

/// {"ambient_dim": n, "tol": {...}?, "bases": {"U": [...], ...}}, each basis
/// a list of ambient-length vectors of [re, im] pairs.
json collection_to_json(const Z2Collection& c);
Z2Collection collection_from_json(const json& j);

json report_to_json(const ValidationReport& r);
json effective_to_json(const EffectiveResult& r);

/// Per-level dimension ledger, flags, K matrices, plus eigenvalues and
/// |w_j|^2 weights of the level-0 spectral structure.
json hierarchy_to_json(const RecursionHierarchy& h, const SpectralStructure* s = nullptr);

json grid_to_json(const GeometryGrid& g);
GeometryGrid grid_from_json(const json& j);

/// "a+bi" literal: optional sign, decimal real part, optional signed
/// imaginary part with mandatory trailing 'i'; no spaces.
Complex parse_complex(const std::string& text);

}  // namespace effop
