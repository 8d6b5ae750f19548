#include "gframe/frame.hpp"

#include <algorithm>
#include <limits>

#include "gframe/errors.hpp"
#include "gframe/kernels.hpp"

namespace gframe {

double FrameOperator::hermitian_defect() const { return (matrix_ - matrix_.adjoint()).norm(); }

FrameOperator frame_operator(const GOperatorFamily& family, const SubsetMask& mask) {
  require_valid(family);
  if (mask.size() != family.num_points()) throw DimensionError("frame_operator: mask length does not match point count");
  return FrameOperator(kernels::gram(kernels::stack_weighted(family, mask)), mask);
}

FrameOperator frame_operator(const GOperatorFamily& family) {
  return frame_operator(family, SubsetMask::full(family.num_points()));
}

CVector partial_synthesis(const GOperatorFamily& family, const SubsetMask& mask, const CVector& f) {
  if (static_cast<std::size_t>(f.size()) != family.dim()) throw DimensionError("partial_synthesis: vector length mismatch");
  if (mask.size() != family.num_points()) throw DimensionError("partial_synthesis: mask length mismatch");
  CVector out = CVector::Zero(f.size());
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    CVector point = CVector::Zero(f.size());
    for (std::size_t j = 0; j < family.num_indices(); ++j) {
      const CMatrix& b = family.block(i, j);
      point += b.adjoint() * (b * f);
    }
    out += family.space().weight(i) * point;
  }
  return out;
}

double frame_rank_tol(const CMatrix& s) {
  HermitianSpectrum spectrum(s);
  return 1e-12 * std::max(spectrum.max(), std::numeric_limits<double>::min());
}

FrameBounds frame_bounds(const GOperatorFamily& family) {
  HermitianSpectrum spectrum(frame_operator(family).matrix());
  return {std::max(spectrum.min(), 0.0), std::max(spectrum.max(), 0.0)};
}

bool is_frame(const GOperatorFamily& family) {
  HermitianSpectrum spectrum(frame_operator(family).matrix());
  return spectrum.min() > 1e-12 * std::max(spectrum.max(), std::numeric_limits<double>::min());
}

bool is_parseval(const GOperatorFamily& family, double tol) {
  const CMatrix s = frame_operator(family).matrix();
  HermitianSpectrum spectrum(s - CMatrix::Identity(s.rows(), s.cols()));
  return std::max(std::abs(spectrum.min()), std::abs(spectrum.max())) <= tol;
}

bool is_bessel(const GOperatorFamily& family) {
  require_valid(family);
  return true;
}

double bessel_bound(const GOperatorFamily& family) { return frame_bounds(family).upper; }

DualFamily canonical_dual(const GOperatorFamily& family) {
  const CMatrix s = frame_operator(family).matrix();
  HermitianSpectrum spectrum(s);
  if (!spectrum.invertible())
    throw NotAFrameError("canonical_dual: frame operator is singular (lambda_min = " +
                         std::to_string(spectrum.min()) + ")");
  return {family.compose_right(spectrum.inverse()), DualKind::Canonical};
}

namespace {

void require_same_shape(const GOperatorFamily& a, const GOperatorFamily& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": families differ in shape");
}

}  // namespace

CVector reconstruct(const GOperatorFamily& family, const GOperatorFamily& dual, const CVector& f) {
  require_same_shape(family, dual, "reconstruct");
  if (static_cast<std::size_t>(f.size()) != family.dim()) throw DimensionError("reconstruct: vector length mismatch");
  CVector out = CVector::Zero(f.size());
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    CVector point = CVector::Zero(f.size());
    for (std::size_t j = 0; j < family.num_indices(); ++j)
      point += family.block(i, j).adjoint() * (dual.block(i, j) * f);
    out += family.space().weight(i) * point;
  }
  return out;
}

CVector reconstruct(const GOperatorFamily& family, const DualFamily& dual, const CVector& f) {
  return reconstruct(family, dual.family, f);
}

double reconstruction_residual(const GOperatorFamily& family, const GOperatorFamily& dual, const CVector& f) {
  return (reconstruct(family, dual, f) - f).norm();
}

CMatrix mixed_operator(const GOperatorFamily& family, const GOperatorFamily& dual, const SubsetMask& mask) {
  require_same_shape(family, dual, "mixed_operator");
  require_valid(family);
  require_valid(dual);
  return kernels::cross_gram(kernels::stack_weighted(family, mask), kernels::stack_weighted(dual, mask));
}

VerificationReport verify_alternate_dual(const GOperatorFamily& family, const GOperatorFamily& candidate, double tol) {
  VerificationReport report;
  report.name = "alternate_dual";
  if (!family.same_shape(candidate)) {
    report.add({"shape", 1.0, 0.0, 0.0, false, "families differ in shape"});
    return report;
  }
  const SubsetMask all = SubsetMask::full(family.num_points());
  const CMatrix id = CMatrix::Identity(family.dim(), family.dim());
  const double synthesis = spectral_norm(mixed_operator(family, candidate, all) - id);
  const double adjoint = spectral_norm(mixed_operator(candidate, family, all) - id);
  report.add({"lambda_star_g", synthesis, 0.0, tol, synthesis <= tol, "||sum w Lambda^* G - I||_2"});
  report.add({"g_star_lambda", adjoint, 0.0, tol, adjoint <= tol, "||sum w G^* Lambda - I||_2"});
  return report;
}

}  // namespace gframe
