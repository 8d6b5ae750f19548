#include "gframe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gframe/errors.hpp"

namespace gframe {

HermitianSpectrum::HermitianSpectrum(const CMatrix& hermitian, double rank_tol) {
  if (hermitian.rows() != hermitian.cols()) throw DimensionError("HermitianSpectrum: matrix is not square");
  if (hermitian.size() == 0) throw DimensionError("HermitianSpectrum: empty matrix");
  if (!hermitian.allFinite()) throw NumericalError("HermitianSpectrum: non-finite entry");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  const double scale = std::max(std::abs(values_(values_.size() - 1)), std::abs(values_(0)));
  rank_tol_ = rank_tol >= 0.0 ? rank_tol : 1e-12 * std::max(scale, std::numeric_limits<double>::min());
}

CMatrix HermitianSpectrum::apply(const std::function<double(double)>& fn) const {
  Eigen::VectorXd mapped(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) mapped(k) = fn(values_(k));
  return vectors_ * mapped.asDiagonal() * vectors_.adjoint();
}

CMatrix HermitianSpectrum::inverse() const {
  const double tol = rank_tol_;
  return apply([tol](double v) { return v > tol ? 1.0 / v : 0.0; });
}

CMatrix HermitianSpectrum::sqrt() const {
  const double tol = rank_tol_;
  return apply([tol](double v) { return v > tol ? std::sqrt(v) : 0.0; });
}

CMatrix HermitianSpectrum::inverse_sqrt() const {
  const double tol = rank_tol_;
  return apply([tol](double v) { return v > tol ? 1.0 / std::sqrt(v) : 0.0; });
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue_hermitian_part(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return solver.eigenvalues()(0);
}

}  // namespace gframe
