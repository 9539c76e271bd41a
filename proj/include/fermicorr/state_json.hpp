#pragma once

// JSON form of a two-qubit matrix:
//   {"basis": ["ee","eg","ge","gg"], "matrix": [[[re, im], ...], ...]}
// nlohmann/json prints doubles with the shortest round-trip representation,
// so dump -> parse reproduces every entry bit for bit.

#include <nlohmann/json.hpp>

#include "fermicorr/bloch.hpp"

namespace fermicorr {

using ordered_json = nlohmann::ordered_json;

inline ordered_json matrix_to_json(const Matrix4c& m) {
  ordered_json basis = ordered_json::array();
  for (const char* label : kBasisLabels) basis.push_back(label);
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  ordered_json out;
  out["basis"] = std::move(basis);
  out["matrix"] = std::move(rows);
  return out;
}

inline ordered_json to_json(const TwoQubitDensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

inline Matrix4c matrix_from_json(const ordered_json& j) {
  if (!j.contains("basis") || !j.contains("matrix")) throw ValidationError("state JSON needs keys \"basis\" and \"matrix\"");
  const auto& basis = j.at("basis");
  if (!basis.is_array() || basis.size() != 4) throw ValidationError("state JSON \"basis\" must list 4 labels");
  for (std::size_t i = 0; i < 4; ++i)
    if (basis[i].get<std::string>() != kBasisLabels[i])
      throw ValidationError("state JSON basis must be [\"ee\",\"eg\",\"ge\",\"gg\"]");
  const auto& rows = j.at("matrix");
  if (!rows.is_array() || rows.size() != 4) throw ValidationError("state JSON \"matrix\" must have 4 rows");
  Matrix4c m;
  for (std::size_t r = 0; r < 4; ++r) {
    if (!rows[r].is_array() || rows[r].size() != 4) throw ValidationError("state JSON rows must have 4 entries");
    for (std::size_t c = 0; c < 4; ++c) {
      const auto& e = rows[r][c];
      if (!e.is_array() || e.size() != 2) throw ValidationError("state JSON entries must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

/// Parses without enforcing positivity so intermediate matrices survive a round trip.
inline TwoQubitDensityMatrix state_from_json(const ordered_json& j) {
  return TwoQubitDensityMatrix::unchecked(matrix_from_json(j));
}

}  // namespace fermicorr
