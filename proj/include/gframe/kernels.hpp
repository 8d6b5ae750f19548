#pragma once

// Dense accumulation kernels behind the frame engine.
//
// Every kernel exists twice: a serial reference in gframe::kernels::serial
// and an OpenMP version in gframe::kernels::parallel. Both evaluate each
// output entry with the same fixed pairwise summation tree, so the results
// are bitwise identical regardless of thread count or schedule.

#include <cstddef>

#include "gframe/model.hpp"

namespace gframe::kernels {

/// Stacks sqrt(w_i) * Lambda_{x_i,j} for every i in mask (all j) into one
/// tall matrix with dim columns. Rows of excluded points are omitted.
CMatrix stack_weighted(const GOperatorFamily& family, const SubsetMask& mask);

/// Pairwise (cascade) sum of conj(a[k]) * b[k] over k, base case 8 terms.
Complex pairwise_dot(const Complex* a, const Complex* b, std::size_t n);

namespace serial {

/// left^* right, entry by entry with pairwise_dot.
CMatrix cross_gram(const CMatrix& left, const CMatrix& right);
/// rows^* rows; only the upper triangle is computed, then mirrored, so the
/// result is exactly Hermitian.
CMatrix gram(const CMatrix& rows);

}  // namespace serial

namespace parallel {

CMatrix cross_gram(const CMatrix& left, const CMatrix& right);
CMatrix gram(const CMatrix& rows);

}  // namespace parallel

/// Dispatches to parallel:: when OpenMP has more than one thread available,
/// otherwise serial::. Results are identical either way.
CMatrix cross_gram(const CMatrix& left, const CMatrix& right);
CMatrix gram(const CMatrix& rows);

}  // namespace gframe::kernels
