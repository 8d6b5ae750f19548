#include "gframe/serialize.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "gframe/errors.hpp"

namespace gframe {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double number_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Complex complex_at(const nlohmann::json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number [re, im]");
  return {number_at(j[0], path + "/0"), number_at(j[1], path + "/1")};
}

CMatrix matrix_at(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  if (!j[0].is_array()) fail(path + "/0", "expected a row array");
  const std::size_t cols = j[0].size();
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != cols) fail(row_path, "rows must all have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_at(j[r][c], row_path + "/" + std::to_string(c));
  }
  return m;
}

}  // namespace

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) { return complex_at(j, ""); }

nlohmann::json vector_to_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
  return out;
}

CVector vector_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail("", "expected an array of complex numbers");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_at(j[k], "/" + std::to_string(k));
  return v;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

CMatrix matrix_from_json(const nlohmann::json& j) { return matrix_at(j, ""); }

nlohmann::json family_to_json(const GOperatorFamily& family) {
  nlohmann::json j;
  j["dim"] = family.dim();
  j["points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < family.num_points(); ++i)
    j["points"].push_back({{"label", family.space().labels()[i]}, {"weight", family.space().weight(i)}});
  j["indices"] = family.index_set().labels();
  j["blocks"] = nlohmann::json::array();
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < family.num_indices(); ++k) row.push_back(matrix_to_json(family.block(i, k)));
    j["blocks"].push_back(std::move(row));
  }
  return j;
}

GOperatorFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("", "family must be an object");
  for (const char* key : {"dim", "points", "indices", "blocks"})
    if (!j.contains(key)) fail(std::string("/") + key, "missing required field");
  if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) fail("/dim", "expected a positive integer");
  const auto dim = j["dim"].get<std::size_t>();

  const auto& points = j["points"];
  if (!points.is_array() || points.empty()) fail("/points", "expected a nonempty array");
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string path = "/points/" + std::to_string(i);
    const auto& p = points[i];
    if (!p.is_object() || !p.contains("weight")) fail(path, "expected {\"label\", \"weight\"}");
    const double w = number_at(p["weight"], path + "/weight");
    if (!(w > 0.0)) fail(path + "/weight", "must be positive");
    labels.push_back(p.contains("label") && p["label"].is_string() ? p["label"].get<std::string>() : "x" + std::to_string(i));
    weights.push_back(w);
  }

  const auto& indices = j["indices"];
  if (!indices.is_array() || indices.empty()) fail("/indices", "expected a nonempty array of labels");
  std::vector<std::string> index_labels;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (!indices[k].is_string()) fail("/indices/" + std::to_string(k), "expected a string");
    index_labels.push_back(indices[k].get<std::string>());
  }

  const auto& blocks = j["blocks"];
  if (!blocks.is_array() || blocks.size() != points.size())
    fail("/blocks", "expected one row of blocks per point (" + std::to_string(points.size()) + ")");
  std::vector<CMatrix> mats;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string path = "/blocks/" + std::to_string(i);
    if (!blocks[i].is_array() || blocks[i].size() != indices.size())
      fail(path, "expected one block per index (" + std::to_string(indices.size()) + ")");
    for (std::size_t k = 0; k < indices.size(); ++k) mats.push_back(matrix_at(blocks[i][k], path + "/" + std::to_string(k)));
  }
  try {
    return GOperatorFamily(DiscreteMeasureSpace(std::move(labels), std::move(weights)), IndexSet(std::move(index_labels)),
                           dim, std::move(mats));
  } catch (const ConfigError& e) {
    fail("", e.what());
  }
}

nlohmann::json frame_operator_to_json(const FrameOperator& op) {
  nlohmann::json j;
  j["dim"] = op.dim();
  j["mask"] = op.mask().included();
  j["matrix"] = matrix_to_json(op.matrix());
  return j;
}

GOperatorFamily load_family(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open family file " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return family_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + e.what());
  }
}

void save_family(const GOperatorFamily& family, const std::filesystem::path& path) {
  write_atomically(path, family_to_json(family).dump(1) + "\n");
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw ConfigError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace gframe
