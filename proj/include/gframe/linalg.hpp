#pragma once

#include <functional>

#include "gframe/model.hpp"

namespace gframe {

/// Hermitian eigendecomposition with spectral functions on top.
///
/// Eigenvalues below rank_tol are treated as zero: inverse() and
/// inverse_sqrt() act as pseudo-inverses on the numerical range and
/// sqrt() clamps them to zero.
class HermitianSpectrum {
 public:
  /// rank_tol < 0 selects the default 1e-12 * max(|lambda_max|, tiny).
  explicit HermitianSpectrum(const CMatrix& hermitian, double rank_tol = -1.0);

  const Eigen::VectorXd& eigenvalues() const { return values_; }  // ascending
  const CMatrix& eigenvectors() const { return vectors_; }
  double min() const { return values_(0); }
  double max() const { return values_(values_.size() - 1); }
  double rank_tol() const { return rank_tol_; }
  bool invertible() const { return min() > rank_tol_; }

  CMatrix apply(const std::function<double(double)>& fn) const;
  CMatrix inverse() const;
  CMatrix sqrt() const;
  CMatrix inverse_sqrt() const;

 private:
  Eigen::VectorXd values_;
  CMatrix vectors_;
  double rank_tol_ = 0.0;
};

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// (m + m^*) / 2
inline CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue_hermitian_part(const CMatrix& m);

}  // namespace gframe
