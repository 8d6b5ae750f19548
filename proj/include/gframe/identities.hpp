#pragma once

#include <utility>
#include <vector>

#include "gframe/frame.hpp"
#include "gframe/report.hpp"

namespace gframe {

/// {k / 10 : k = 0..10}
std::vector<double> default_lambda_grid();

/// Coefficients (2 lambda - lambda^2, 1 - lambda^2) of the lower bound shared
/// by the canonical and alternate dual inequalities.
std::pair<double, double> inequality_coefficients(double lambda);

struct OperatorLemmaCheck {
  IdentityCheck equality;                  // P - P^*P = Q^* - Q^*Q
  std::vector<IdentityCheck> expansions;   // P^*P + l(Q^*+Q) = Q^*Q + (1-l)(P^*+P) + (2l-1)I
  std::vector<IdentityCheck> lower_bounds; // P^*P + l(Q^*+Q) >= (1-(l-1)^2) I
  bool passed() const;
};

/// Requires P + Q = I (else PreconditionError). Equalities are measured as the
/// max-abs entry of the matrix difference; the operator inequality as the
/// smallest eigenvalue of the Hermitian part of the difference.
OperatorLemmaCheck check_operator_lemma_pq(const CMatrix& p, const CMatrix& q,
                                           const std::vector<double>& lambda_grid = default_lambda_grid(),
                                           double tol = 1e-10);

/// E(f, X1) - ||S_{X1} f||^2 = E(f, X1^c) - ||S_{X1^c} f||^2 for Parseval
/// families. Passes iff the residual is at most tol * ||f||^2.
IdentityCheck verify_parseval_identity(const GOperatorFamily& family, const SubsetMask& mask,
                                       const CVector& f, double tol = 1e-9);

/// Canonical-dual identity and lower bounds. The first entry is the equality
///   sum ||~Lambda S_{X1} f||^2 + E(f, X1^c) = sum ||~Lambda S_{X1^c} f||^2 + E(f, X1),
/// followed by one inequality per lambda:
///   value >= (2l - l^2) E(f, X1) + (1 - l^2) E(f, X1^c).
/// Tolerances are eq_tol and ineq_tol times the largest of 1, ||f||^2 and the
/// magnitudes of the terms involved.
std::vector<IdentityCheck> verify_canonical_dual_inequality(
    const GOperatorFamily& family, const SubsetMask& mask, const CVector& f,
    const std::vector<double>& lambda_grid = default_lambda_grid(), double eq_tol = 1e-9,
    double ineq_tol = 1e-10);

/// Same checks for an alternate dual G with F_{X1} = sum_{X1} w Lambda^* G:
///   Re<F_{X1^c} f, f> + ||F_{X1} f||^2 = Re<F_{X1} f, f> + ||F_{X1^c} f||^2
///   >= (2l - l^2) Re<F_{X1} f, f> + (1 - l^2) Re<F_{X1^c} f, f>.
/// Throws PreconditionError unless verify_alternate_dual(family, alt) passes
/// at dual_tol.
std::vector<IdentityCheck> verify_alternate_dual_inequality(
    const GOperatorFamily& family, const GOperatorFamily& alt_dual, const SubsetMask& mask,
    const CVector& f, const std::vector<double>& lambda_grid = default_lambda_grid(),
    double eq_tol = 1e-9, double ineq_tol = 1e-10, double dual_tol = 1e-9);

/// <F_{X1^c} f, f> + ||F_{X1} f||^2 = conj(<F_{X1} f, f>) + ||F_{X1^c} f||^2 as
/// complex numbers.
IdentityCheck verify_general_complex_identity(const GOperatorFamily& family,
                                              const GOperatorFamily& alt_dual,
                                              const SubsetMask& mask, const CVector& f,
                                              double tol = 1e-10, double dual_tol = 1e-9);

/// Blocks Lambda_{x,j} S^{-1/2}; the result has S = I.
GOperatorFamily parsevalize(const GOperatorFamily& family);

}  // namespace gframe
