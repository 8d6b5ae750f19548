#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gframe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Inner product <a, b>, linear in the first argument.
inline Complex inner(const CVector& a, const CVector& b) { return b.dot(a); }

/// Finite weighted point set standing in for a measure space (X, mu).
/// Integrals over X become weighted sums over the points.
class DiscreteMeasureSpace {
 public:
  DiscreteMeasureSpace() = default;
  /// Throws ConfigError when empty, when sizes differ, or when a weight is
  /// not a finite positive number.
  DiscreteMeasureSpace(std::vector<std::string> labels, std::vector<double> weights);
  /// Points labelled "x0", "x1", ...
  explicit DiscreteMeasureSpace(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }

  /// Same points with every weight multiplied by factor.
  DiscreteMeasureSpace scaled(double factor) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

/// Finite truncation of the countable index set J.
class IndexSet {
 public:
  IndexSet() = default;
  /// Throws ConfigError when empty or when labels repeat.
  explicit IndexSet(std::vector<std::string> labels);
  /// Labels "j0", "j1", ...
  explicit IndexSet(std::size_t size);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

/// Boolean selection over measure-space points, the subset X1 of X.
class SubsetMask {
 public:
  SubsetMask() = default;
  explicit SubsetMask(std::vector<bool> included) : included_(std::move(included)) {}

  static SubsetMask full(std::size_t m) { return SubsetMask(std::vector<bool>(m, true)); }
  static SubsetMask empty(std::size_t m) { return SubsetMask(std::vector<bool>(m, false)); }

  std::size_t size() const { return included_.size(); }
  bool contains(std::size_t i) const { return included_[i]; }
  const std::vector<bool>& included() const { return included_; }
  SubsetMask complement() const;
  std::size_t count() const;

  bool operator==(const SubsetMask&) const = default;

 private:
  std::vector<bool> included_;
};

/// Optimal constants in A ||f||^2 <= energy(f) <= B ||f||^2.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;

  bool is_frame() const { return lower > 0.0; }
};

enum class ViolationKind { MissingBlock, DimensionMismatch, EmptyCodomain, NonFiniteEntry };

struct Violation {
  ViolationKind kind;
  std::size_t point = 0;
  std::size_t index = 0;
  std::string message;
};

const char* to_string(ViolationKind kind);

/// The family {Lambda_{x_i, j}}: one d_{i,j} x n complex block per
/// (point, index) pair, stored point-major (block i * |J| + j).
///
/// Construction only checks that the block count matches; the remaining
/// invariants are reported by validate_family() so that malformed input can
/// be diagnosed rather than rejected outright.
class GOperatorFamily {
 public:
  GOperatorFamily() = default;
  GOperatorFamily(DiscreteMeasureSpace space, IndexSet index_set, std::size_t dim,
                  std::vector<CMatrix> blocks);

  const DiscreteMeasureSpace& space() const { return space_; }
  const IndexSet& index_set() const { return index_set_; }
  std::size_t dim() const { return dim_; }
  std::size_t num_points() const { return space_.size(); }
  std::size_t num_indices() const { return index_set_.size(); }
  std::size_t num_blocks() const { return blocks_.size(); }

  const CMatrix& block(std::size_t point, std::size_t index) const {
    return blocks_[point * index_set_.size() + index];
  }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  /// Sum of codomain dimensions over every block.
  std::size_t total_rows() const;
  /// Largest spectral norm over the blocks.
  double max_block_norm() const;

  /// Same blocks, new measure weights.
  GOperatorFamily with_space(DiscreteMeasureSpace space) const;
  /// New blocks with the same space, index set and dimension.
  GOperatorFamily with_blocks(std::vector<CMatrix> blocks) const;
  /// Every block right-multiplied by op (n x n).
  GOperatorFamily compose_right(const CMatrix& op) const;
  /// True when measure space, index set and every block shape agree.
  bool same_shape(const GOperatorFamily& other) const;

 private:
  DiscreteMeasureSpace space_;
  IndexSet index_set_;
  std::size_t dim_ = 0;
  std::vector<CMatrix> blocks_;
};

/// Every invariant violation of the family; empty means valid.
std::vector<Violation> validate_family(const GOperatorFamily& family);

/// Throws DimensionError (shape violations) or NumericalError (non-finite
/// entries) for the first violation found.
void require_valid(const GOperatorFamily& family);

/// sum_{i in mask} w_i sum_j ||Lambda_{x_i,j} f||^2.
double analysis_energy(const GOperatorFamily& family, const CVector& f, const SubsetMask& mask);
double analysis_energy(const GOperatorFamily& family, const CVector& f);

/// Default absolute tolerance: 1e-9 scaled by the largest operator norm.
double default_tolerance(const GOperatorFamily& family);

}  // namespace gframe
