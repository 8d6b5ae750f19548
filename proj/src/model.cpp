#include "gframe/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gframe/errors.hpp"
#include "gframe/linalg.hpp"

namespace gframe {

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<std::string> labels, std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (weights_.empty()) throw ConfigError("measure space needs at least one point");
  if (labels_.size() != weights_.size())
    throw ConfigError("measure space: " + std::to_string(labels_.size()) + " labels for " +
                      std::to_string(weights_.size()) + " weights");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!std::isfinite(weights_[i]) || weights_[i] <= 0.0)
      throw ConfigError("measure space: weight " + std::to_string(i) + " must be finite and positive");
    total_mass_ += weights_[i];
  }
}

DiscreteMeasureSpace::DiscreteMeasureSpace(std::vector<double> weights)
    : DiscreteMeasureSpace(numbered("x", weights.size()), weights) {}

DiscreteMeasureSpace DiscreteMeasureSpace::scaled(double factor) const {
  std::vector<double> w = weights_;
  for (double& x : w) x *= factor;
  return DiscreteMeasureSpace(labels_, std::move(w));
}

IndexSet::IndexSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ConfigError("index set must be nonempty");
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) throw ConfigError("index set labels must be distinct");
}

IndexSet::IndexSet(std::size_t size) : IndexSet(numbered("j", size)) {}

SubsetMask SubsetMask::complement() const {
  std::vector<bool> out(included_.size());
  for (std::size_t i = 0; i < included_.size(); ++i) out[i] = !included_[i];
  return SubsetMask(std::move(out));
}

std::size_t SubsetMask::count() const {
  return static_cast<std::size_t>(std::count(included_.begin(), included_.end(), true));
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MissingBlock: return "MissingBlock";
    case ViolationKind::DimensionMismatch: return "DimensionMismatch";
    case ViolationKind::EmptyCodomain: return "EmptyCodomain";
    case ViolationKind::NonFiniteEntry: return "NonFiniteEntry";
  }
  return "Unknown";
}

GOperatorFamily::GOperatorFamily(DiscreteMeasureSpace space, IndexSet index_set, std::size_t dim,
                                 std::vector<CMatrix> blocks)
    : space_(std::move(space)), index_set_(std::move(index_set)), dim_(dim), blocks_(std::move(blocks)) {
  if (dim_ == 0) throw ConfigError("family dimension must be positive");
}

std::size_t GOperatorFamily::total_rows() const {
  std::size_t rows = 0;
  for (const auto& b : blocks_) rows += static_cast<std::size_t>(b.rows());
  return rows;
}

double GOperatorFamily::max_block_norm() const {
  double best = 0.0;
  for (const auto& b : blocks_) best = std::max(best, spectral_norm(b));
  return best;
}

GOperatorFamily GOperatorFamily::with_space(DiscreteMeasureSpace space) const {
  if (space.size() != space_.size()) throw DimensionError("with_space: point count differs");
  return GOperatorFamily(std::move(space), index_set_, dim_, blocks_);
}

GOperatorFamily GOperatorFamily::with_blocks(std::vector<CMatrix> blocks) const {
  return GOperatorFamily(space_, index_set_, dim_, std::move(blocks));
}

GOperatorFamily GOperatorFamily::compose_right(const CMatrix& op) const {
  if (static_cast<std::size_t>(op.rows()) != dim_ || static_cast<std::size_t>(op.cols()) != dim_)
    throw DimensionError("compose_right: operator must be dim x dim");
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b * op);
  return with_blocks(std::move(out));
}

bool GOperatorFamily::same_shape(const GOperatorFamily& other) const {
  if (dim_ != other.dim_ || space_.size() != other.space_.size() ||
      index_set_.size() != other.index_set_.size() || blocks_.size() != other.blocks_.size())
    return false;
  for (std::size_t i = 0; i < space_.size(); ++i)
    if (space_.weight(i) != other.space_.weight(i)) return false;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    if (blocks_[b].rows() != other.blocks_[b].rows() || blocks_[b].cols() != other.blocks_[b].cols())
      return false;
  return true;
}

std::vector<Violation> validate_family(const GOperatorFamily& family) {
  std::vector<Violation> out;
  const std::size_t m = family.num_points();
  const std::size_t jn = family.num_indices();
  if (family.num_blocks() != m * jn) {
    out.push_back({ViolationKind::MissingBlock, 0, 0,
                   "expected " + std::to_string(m * jn) + " blocks, found " +
                       std::to_string(family.num_blocks())});
    return out;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < jn; ++j) {
      const CMatrix& b = family.block(i, j);
      const std::string where = "block (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      if (static_cast<std::size_t>(b.cols()) != family.dim())
        out.push_back({ViolationKind::DimensionMismatch, i, j,
                       where + " has " + std::to_string(b.cols()) + " columns, expected " +
                           std::to_string(family.dim())});
      if (b.rows() == 0) out.push_back({ViolationKind::EmptyCodomain, i, j, where + " has no rows"});
      if (!b.allFinite()) out.push_back({ViolationKind::NonFiniteEntry, i, j, where + " has a non-finite entry"});
    }
  }
  return out;
}

void require_valid(const GOperatorFamily& family) {
  for (const auto& v : validate_family(family)) {
    if (v.kind == ViolationKind::NonFiniteEntry) throw NumericalError(v.message);
    throw DimensionError(v.message);
  }
}

double analysis_energy(const GOperatorFamily& family, const CVector& f, const SubsetMask& mask) {
  if (static_cast<std::size_t>(f.size()) != family.dim())
    throw DimensionError("analysis_energy: vector length " + std::to_string(f.size()) +
                         " does not match dimension " + std::to_string(family.dim()));
  if (mask.size() != family.num_points())
    throw DimensionError("analysis_energy: mask length does not match point count");
  double total = 0.0;
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    double point = 0.0;
    for (std::size_t j = 0; j < family.num_indices(); ++j) {
      const CMatrix& b = family.block(i, j);
      if (static_cast<std::size_t>(b.cols()) != family.dim())
        throw DimensionError("analysis_energy: block column count mismatch");
      point += (b * f).squaredNorm();
    }
    total += family.space().weight(i) * point;
  }
  return total;
}

double analysis_energy(const GOperatorFamily& family, const CVector& f) {
  return analysis_energy(family, f, SubsetMask::full(family.num_points()));
}

double default_tolerance(const GOperatorFamily& family) {
  const double norm = family.max_block_norm();
  return 1e-9 * std::max(1.0, norm * norm * family.space().total_mass());
}

}  // namespace gframe
