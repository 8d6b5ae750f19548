#pragma once

#include <filesystem>

#include <json.hpp>

#include "gframe/frame.hpp"
#include "gframe/model.hpp"

namespace gframe {

// Complex numbers are [re, im]; matrices are row-major arrays of rows.
// A family document:
//   { "dim": n,
//     "points":  [ {"label": "x0", "weight": 0.5}, ... ],
//     "indices": [ "j0", ... ],
//     "blocks":  [ [ <matrix (x0, j0)>, <matrix (x0, j1)>, ... ], ... ] }

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json family_to_json(const GOperatorFamily& family);
/// Throws ConfigError with the offending field path.
GOperatorFamily family_from_json(const nlohmann::json& j);

nlohmann::json frame_operator_to_json(const FrameOperator& op);

GOperatorFamily load_family(const std::filesystem::path& path);
void save_family(const GOperatorFamily& family, const std::filesystem::path& path);

/// Writes to a sibling temp file and renames over path.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace gframe
