#include "gframe/kernels.hpp"

#include <cmath>

#include <omp.h>

#include "gframe/errors.hpp"

namespace gframe::kernels {

CMatrix stack_weighted(const GOperatorFamily& family, const SubsetMask& mask) {
  if (mask.size() != family.num_points()) throw DimensionError("mask length does not match point count");
  Eigen::Index rows = 0;
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    for (std::size_t j = 0; j < family.num_indices(); ++j) rows += family.block(i, j).rows();
  }
  const auto n = static_cast<Eigen::Index>(family.dim());
  CMatrix out(rows, n);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    const double s = std::sqrt(family.space().weight(i));
    for (std::size_t j = 0; j < family.num_indices(); ++j) {
      const CMatrix& b = family.block(i, j);
      if (b.cols() != n) throw DimensionError("block column count does not match family dimension");
      out.middleRows(r, b.rows()) = s * b;
      r += b.rows();
    }
  }
  return out;
}

Complex pairwise_dot(const Complex* a, const Complex* b, std::size_t n) {
  if (n <= 8) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) acc += std::conj(a[k]) * b[k];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_dot(a, b, half) + pairwise_dot(a + half, b + half, n - half);
}

namespace {

// Column-major storage makes column c of a matrix contiguous, which is what
// pairwise_dot walks.
inline Complex entry(const CMatrix& left, const CMatrix& right, Eigen::Index r, Eigen::Index c) {
  return pairwise_dot(left.col(r).data(), right.col(c).data(), static_cast<std::size_t>(left.rows()));
}

void check_rows(const CMatrix& left, const CMatrix& right) {
  if (left.rows() != right.rows()) throw DimensionError("cross_gram: row counts differ");
}

}  // namespace

namespace serial {

CMatrix cross_gram(const CMatrix& left, const CMatrix& right) {
  check_rows(left, right);
  CMatrix out(left.cols(), right.cols());
  for (Eigen::Index c = 0; c < right.cols(); ++c)
    for (Eigen::Index r = 0; r < left.cols(); ++r) out(r, c) = entry(left, right, r, c);
  return out;
}

CMatrix gram(const CMatrix& rows) {
  const Eigen::Index n = rows.cols();
  CMatrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) {
      out(r, c) = entry(rows, rows, r, c);
      out(c, r) = std::conj(out(r, c));
    }
    out(c, c) = Complex(entry(rows, rows, c, c).real(), 0.0);
  }
  return out;
}

}  // namespace serial

namespace parallel {

CMatrix cross_gram(const CMatrix& left, const CMatrix& right) {
  check_rows(left, right);
  CMatrix out(left.cols(), right.cols());
  const Eigen::Index cols = right.cols();
  const Eigen::Index inner = left.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < inner; ++r) out(r, c) = entry(left, right, r, c);
  return out;
}

CMatrix gram(const CMatrix& rows) {
  const Eigen::Index n = rows.cols();
  CMatrix out(n, n);
  // Upper triangle columns have uneven work; dynamic keeps threads busy and
  // does not affect the per-entry summation order.
#pragma omp parallel for schedule(dynamic, 1)
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < c; ++r) out(r, c) = entry(rows, rows, r, c);
    out(c, c) = Complex(entry(rows, rows, c, c).real(), 0.0);
  }
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < c; ++r) out(c, r) = std::conj(out(r, c));
  return out;
}

}  // namespace parallel

CMatrix cross_gram(const CMatrix& left, const CMatrix& right) {
  return omp_get_max_threads() > 1 ? parallel::cross_gram(left, right) : serial::cross_gram(left, right);
}

CMatrix gram(const CMatrix& rows) {
  return omp_get_max_threads() > 1 ? parallel::gram(rows) : serial::gram(rows);
}

}  // namespace gframe::kernels
