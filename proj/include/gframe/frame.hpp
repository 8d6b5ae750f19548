#pragma once

#include <string>

#include "gframe/linalg.hpp"
#include "gframe/model.hpp"
#include "gframe/report.hpp"

namespace gframe {

/// S_{X1} = sum_{i in X1} w_i sum_j Lambda^*_{x_i,j} Lambda_{x_i,j}.
class FrameOperator {
 public:
  FrameOperator(CMatrix matrix, SubsetMask mask) : matrix_(std::move(matrix)), mask_(std::move(mask)) {}

  const CMatrix& matrix() const { return matrix_; }
  const SubsetMask& mask() const { return mask_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  CVector apply(const CVector& f) const { return matrix_ * f; }
  /// ||S - S^*||_F
  double hermitian_defect() const;

 private:
  CMatrix matrix_;
  SubsetMask mask_;
};

FrameOperator frame_operator(const GOperatorFamily& family, const SubsetMask& mask);
FrameOperator frame_operator(const GOperatorFamily& family);

/// S_{X1} f evaluated block by block without forming S_{X1}.
CVector partial_synthesis(const GOperatorFamily& family, const SubsetMask& mask, const CVector& f);

/// lower = lambda_min(S), upper = lambda_max(S).
FrameBounds frame_bounds(const GOperatorFamily& family);

/// Rank threshold used by is_frame and the pseudo-inverse: 1e-12 * lambda_max.
double frame_rank_tol(const CMatrix& s);

bool is_frame(const GOperatorFamily& family);
bool is_parseval(const GOperatorFamily& family, double tol = 1e-9);
/// Always true in finite dimensions.
bool is_bessel(const GOperatorFamily& family);
double bessel_bound(const GOperatorFamily& family);

enum class DualKind { Canonical, Alternate };

struct DualFamily {
  GOperatorFamily family;
  DualKind provenance = DualKind::Canonical;
};

/// Blocks Lambda_{x,j} S^{-1}. Throws NotAFrameError when S is singular.
DualFamily canonical_dual(const GOperatorFamily& family);

/// sum_i w_i sum_j Lambda^*_{x_i,j} G_{x_i,j} f. Throws DimensionError when the
/// two families differ in shape.
CVector reconstruct(const GOperatorFamily& family, const GOperatorFamily& dual, const CVector& f);
CVector reconstruct(const GOperatorFamily& family, const DualFamily& dual, const CVector& f);
/// ||reconstruct(family, dual, f) - f||
double reconstruction_residual(const GOperatorFamily& family, const GOperatorFamily& dual,
                               const CVector& f);

/// F_{X1} = sum_{i in X1} w_i sum_j Lambda^*_{x_i,j} G_{x_i,j} as a matrix.
CMatrix mixed_operator(const GOperatorFamily& family, const GOperatorFamily& dual,
                       const SubsetMask& mask);

/// Checks sum Lambda^* G = I and sum G^* Lambda = I. Failure is reported,
/// not thrown; shape mismatch is reported as a failed check too.
VerificationReport verify_alternate_dual(const GOperatorFamily& family,
                                         const GOperatorFamily& candidate, double tol = 1e-9);

}  // namespace gframe
