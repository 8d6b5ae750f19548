#include "gframe/identities.hpp"

#include <algorithm>
#include <cmath>

#include "gframe/errors.hpp"
#include "gframe/linalg.hpp"

namespace gframe {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

std::pair<double, double> inequality_coefficients(double lambda) {
  return {2.0 * lambda - lambda * lambda, 1.0 - lambda * lambda};
}

namespace {

void require_lambda_grid(const std::vector<double>& grid) {
  for (double l : grid)
    if (!(l >= 0.0 && l <= 1.0)) throw PreconditionError("lambda grid values must lie in [0, 1]");
}

void require_vector(const GOperatorFamily& family, const CVector& f, const SubsetMask& mask) {
  if (static_cast<std::size_t>(f.size()) != family.dim()) throw DimensionError("vector length does not match family dimension");
  if (mask.size() != family.num_points()) throw DimensionError("mask length does not match point count");
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// F_{mask} f = sum_{i in mask} w_i sum_j Lambda^* G f.
CVector mixed_apply(const GOperatorFamily& family, const GOperatorFamily& dual, const SubsetMask& mask,
                    const CVector& f) {
  CVector out = CVector::Zero(f.size());
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    CVector point = CVector::Zero(f.size());
    for (std::size_t j = 0; j < family.num_indices(); ++j)
      point += family.block(i, j).adjoint() * (dual.block(i, j) * f);
    out += family.space().weight(i) * point;
  }
  return out;
}

// <F_{mask} f, f> = sum_{i in mask} w_i sum_j <G f, Lambda f>.
Complex mixed_form(const GOperatorFamily& family, const GOperatorFamily& dual, const SubsetMask& mask,
                   const CVector& f) {
  Complex total{};
  for (std::size_t i = 0; i < family.num_points(); ++i) {
    if (!mask.contains(i)) continue;
    Complex point{};
    for (std::size_t j = 0; j < family.num_indices(); ++j)
      point += inner(dual.block(i, j) * f, family.block(i, j) * f);
    total += family.space().weight(i) * point;
  }
  return total;
}

void require_alternate_dual(const GOperatorFamily& family, const GOperatorFamily& alt, double dual_tol) {
  const VerificationReport duality = verify_alternate_dual(family, alt, dual_tol);
  if (!duality.passed()) {
    double worst = 0.0;
    for (const auto& c : duality.checks) worst = std::max(worst, c.residual);
    throw PreconditionError("candidate is not an alternate dual (residual " + std::to_string(worst) + ")");
  }
}

struct AlternateTerms {
  CVector f1, f2;     // F_{X1} f, F_{X1^c} f
  Complex form1, form2;  // <F_{X1} f, f>, <F_{X1^c} f, f>
  double scale = 0.0;
};

AlternateTerms alternate_terms(const GOperatorFamily& family, const GOperatorFamily& alt, const SubsetMask& mask,
                               const CVector& f) {
  const SubsetMask rest = mask.complement();
  AlternateTerms t;
  t.f1 = mixed_apply(family, alt, mask, f);
  t.f2 = mixed_apply(family, alt, rest, f);
  t.form1 = mixed_form(family, alt, mask, f);
  t.form2 = mixed_form(family, alt, rest, f);
  t.scale = std::max({f.squaredNorm(), t.f1.squaredNorm(), t.f2.squaredNorm(), std::abs(t.form1), std::abs(t.form2)});
  return t;
}

}  // namespace

bool OperatorLemmaCheck::passed() const {
  if (!equality.passed) return false;
  for (const auto& c : expansions)
    if (!c.passed) return false;
  for (const auto& c : lower_bounds)
    if (!c.passed) return false;
  return true;
}

OperatorLemmaCheck check_operator_lemma_pq(const CMatrix& p, const CMatrix& q, const std::vector<double>& lambda_grid,
                                           double tol) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows())
    throw DimensionError("operator lemma: P and Q must be square of equal size");
  require_lambda_grid(lambda_grid);
  const CMatrix id = CMatrix::Identity(p.rows(), p.cols());
  const double scale = std::max({1.0, max_abs(p), max_abs(q)});
  const double split = max_abs(p + q - id);
  if (split > 1e-9 * scale)
    throw PreconditionError("operator lemma: P + Q differs from I by " + std::to_string(split));

  const double eq_tol = tol * scale * scale;
  OperatorLemmaCheck out;
  const CMatrix pp = p.adjoint() * p;
  const CMatrix qq = q.adjoint() * q;
  out.equality = IdentityCheck::equality(IdentityKind::OperatorLemma, max_abs((p - pp) - (q.adjoint() - qq)), 0.0, eq_tol);

  for (double l : lambda_grid) {
    const CMatrix left = pp + l * (q.adjoint() + q);
    const CMatrix right = qq + (1.0 - l) * (p.adjoint() + p) + (2.0 * l - 1.0) * id;
    Witness w;
    w.lambda = l;
    out.expansions.push_back(IdentityCheck::equality(IdentityKind::OperatorLemma, max_abs(left - right), 0.0, eq_tol, w));
    const double floor = 1.0 - (l - 1.0) * (l - 1.0);
    const double least = min_eigenvalue_hermitian_part(left - floor * id);
    out.lower_bounds.push_back(IdentityCheck::lower_bound(IdentityKind::OperatorLemma, least, 0.0, eq_tol, w));
  }
  return out;
}

IdentityCheck verify_parseval_identity(const GOperatorFamily& family, const SubsetMask& mask, const CVector& f,
                                       double tol) {
  require_vector(family, f, mask);
  if (!is_parseval(family)) throw PreconditionError("verify_parseval_identity: family is not Parseval");
  const SubsetMask rest = mask.complement();
  const double lhs = analysis_energy(family, f, mask) - partial_synthesis(family, mask, f).squaredNorm();
  const double rhs = analysis_energy(family, f, rest) - partial_synthesis(family, rest, f).squaredNorm();
  return IdentityCheck::equality(IdentityKind::ParsevalIdentity, lhs, rhs, tol * f.squaredNorm(), {f, mask, {}});
}

std::vector<IdentityCheck> verify_canonical_dual_inequality(const GOperatorFamily& family, const SubsetMask& mask,
                                                            const CVector& f, const std::vector<double>& lambda_grid,
                                                            double eq_tol, double ineq_tol) {
  require_vector(family, f, mask);
  require_lambda_grid(lambda_grid);
  const DualFamily dual = canonical_dual(family);
  const SubsetMask rest = mask.complement();

  const CVector s1f = partial_synthesis(family, mask, f);
  const CVector s2f = partial_synthesis(family, rest, f);
  const double e1 = analysis_energy(family, f, mask);
  const double e2 = analysis_energy(family, f, rest);
  const double left = analysis_energy(dual.family, s1f) + e2;
  const double right = analysis_energy(dual.family, s2f) + e1;
  const double scale = std::max({1.0, f.squaredNorm(), std::abs(left), std::abs(right), e1, e2});

  std::vector<IdentityCheck> out;
  out.push_back(IdentityCheck::equality(IdentityKind::CanonicalDualInequality, left, right, eq_tol * scale, {f, mask, {}}));
  for (double l : lambda_grid) {
    const auto [c1, c2] = inequality_coefficients(l);
    out.push_back(IdentityCheck::lower_bound(IdentityKind::CanonicalDualInequality, left, c1 * e1 + c2 * e2,
                                             ineq_tol * scale, {f, mask, l}));
  }
  return out;
}

std::vector<IdentityCheck> verify_alternate_dual_inequality(const GOperatorFamily& family, const GOperatorFamily& alt_dual,
                                                            const SubsetMask& mask, const CVector& f,
                                                            const std::vector<double>& lambda_grid, double eq_tol,
                                                            double ineq_tol, double dual_tol) {
  require_vector(family, f, mask);
  require_lambda_grid(lambda_grid);
  require_alternate_dual(family, alt_dual, dual_tol);
  const AlternateTerms t = alternate_terms(family, alt_dual, mask, f);

  const double left = t.form2.real() + t.f1.squaredNorm();
  const double right = t.form1.real() + t.f2.squaredNorm();
  std::vector<IdentityCheck> out;
  out.push_back(IdentityCheck::equality(IdentityKind::AlternateDualInequality, left, right, eq_tol * t.scale, {f, mask, {}}));
  for (double l : lambda_grid) {
    const auto [c1, c2] = inequality_coefficients(l);
    out.push_back(IdentityCheck::lower_bound(IdentityKind::AlternateDualInequality, left,
                                             c1 * t.form1.real() + c2 * t.form2.real(), ineq_tol * t.scale,
                                             {f, mask, l}));
  }
  return out;
}

IdentityCheck verify_general_complex_identity(const GOperatorFamily& family, const GOperatorFamily& alt_dual,
                                              const SubsetMask& mask, const CVector& f, double tol, double dual_tol) {
  require_vector(family, f, mask);
  require_alternate_dual(family, alt_dual, dual_tol);
  const AlternateTerms t = alternate_terms(family, alt_dual, mask, f);
  const Complex lhs = t.form2 + t.f1.squaredNorm();
  const Complex rhs = std::conj(t.form1) + t.f2.squaredNorm();
  return IdentityCheck::equality(IdentityKind::GeneralComplexIdentity, lhs, rhs, tol * std::max(1.0, t.scale),
                                 {f, mask, {}});
}

GOperatorFamily parsevalize(const GOperatorFamily& family) {
  HermitianSpectrum spectrum(frame_operator(family).matrix());
  if (!spectrum.invertible()) throw NotAFrameError("parsevalize: frame operator is singular");
  return family.compose_right(spectrum.inverse_sqrt());
}

}  // namespace gframe
