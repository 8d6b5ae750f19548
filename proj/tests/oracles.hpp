#pragma once

// Brute-force reference computations. These deliberately avoid the library's
// kernels, spectral helpers and FFT so that agreement is meaningful.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "gframe/model.hpp"

namespace oracle {

using gframe::CMatrix;
using gframe::Complex;
using gframe::CVector;

// sum_k a_k conj(b_k)
inline Complex dot(const CVector& a, const CVector& b) {
  Complex acc{};
  for (Eigen::Index k = 0; k < a.size(); ++k) acc += a(k) * std::conj(b(k));
  return acc;
}

inline double norm2(const CVector& a) { return dot(a, a).real(); }

inline CVector apply(const CMatrix& m, const CVector& f) {
  CVector out = CVector::Zero(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(r) += m(r, c) * f(c);
  return out;
}

// S(a, b) = sum_i w_i sum_j sum_r conj(L(r, a)) L(r, b)
inline CMatrix frame_operator(const gframe::GOperatorFamily& fam, const std::vector<bool>& mask) {
  const auto n = static_cast<Eigen::Index>(fam.dim());
  CMatrix s = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < fam.num_points(); ++i) {
    if (!mask[i]) continue;
    const double w = fam.space().weight(i);
    for (std::size_t j = 0; j < fam.num_indices(); ++j) {
      const CMatrix& b = fam.block(i, j);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index c = 0; c < n; ++c)
          for (Eigen::Index r = 0; r < b.rows(); ++r) s(a, c) += w * std::conj(b(r, a)) * b(r, c);
    }
  }
  return s;
}

inline CMatrix frame_operator(const gframe::GOperatorFamily& fam) {
  return frame_operator(fam, std::vector<bool>(fam.num_points(), true));
}

// sum_{i in mask} w_i sum_j ||L f||^2
inline double energy(const gframe::GOperatorFamily& fam, const CVector& f, const std::vector<bool>& mask) {
  double e = 0.0;
  for (std::size_t i = 0; i < fam.num_points(); ++i) {
    if (!mask[i]) continue;
    for (std::size_t j = 0; j < fam.num_indices(); ++j) e += fam.space().weight(i) * norm2(apply(fam.block(i, j), f));
  }
  return e;
}

// sum_{i in mask} w_i sum_j L^* G
inline CMatrix mixed(const gframe::GOperatorFamily& fam, const gframe::GOperatorFamily& g, const std::vector<bool>& mask) {
  const auto n = static_cast<Eigen::Index>(fam.dim());
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < fam.num_points(); ++i) {
    if (!mask[i]) continue;
    for (std::size_t j = 0; j < fam.num_indices(); ++j) {
      const CMatrix& l = fam.block(i, j);
      const CMatrix& r = g.block(i, j);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index c = 0; c < n; ++c)
          for (Eigen::Index k = 0; k < l.rows(); ++k) out(a, c) += fam.space().weight(i) * std::conj(l(k, a)) * r(k, c);
    }
  }
  return out;
}

inline Eigen::VectorXd eigenvalues(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

// f(H) for Hermitian H via its eigendecomposition.
template <class Fn>
CMatrix spectral(const CMatrix& h, Fn fn) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd v = es.eigenvalues().unaryExpr(fn);
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

// Unitary DFT by the O(N^2) definition.
inline CVector dft(const CVector& f) {
  const auto n = f.size();
  CVector out = CVector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index t = 0; t < n; ++t)
      out(k) += f(t) * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * t) / static_cast<double>(n));
  return out / std::sqrt(static_cast<double>(n));
}

// (L_g phi)(w) = phi(w - g)
inline CVector translate(const CVector& phi, long g) {
  const long n = static_cast<long>(phi.size());
  CVector out(phi.size());
  for (long w = 0; w < n; ++w) out(w) = phi(((w - g) % n + n) % n);
  return out;
}

// Nonzero spectrum bounds of the Gram matrix V^* V; these equal the bounds
// of the frame {columns of V} on its span.
struct SpanBounds {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t rank = 0;
};

inline SpanBounds gram_bounds(const CMatrix& columns, double rel_tol = 1e-10) {
  CMatrix gram(columns.cols(), columns.cols());
  for (Eigen::Index a = 0; a < columns.cols(); ++a)
    for (Eigen::Index b = 0; b < columns.cols(); ++b) gram(a, b) = dot(columns.col(b), columns.col(a));
  const Eigen::VectorXd ev = eigenvalues(gram);
  const double top = ev(ev.size() - 1);
  SpanBounds out;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (ev(k) <= rel_tol * top) continue;
    out.lower = out.rank == 0 ? ev(k) : std::min(out.lower, ev(k));
    out.upper = std::max(out.upper, ev(k));
    ++out.rank;
  }
  return out;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
