#pragma once

#include "framekit/frame.hpp"
#include "framekit/report.hpp"

namespace framekit {

/// Family, K and a positive invertible control operator C.
///
/// Construction checks that C is Hermitian (to 1e-10 relative) and positive
/// definite, throwing NotPositive otherwise, and records ||CK - KC||. The
/// commutation hypothesis is only enforced by the certificates that need it.
struct ControlledProblem {
  FrameFamily family;
  DenseOperator k;
  DenseOperator c;
  double commute_residual = 0.0;

  ControlledProblem(FrameFamily f, DenseOperator k_op, DenseOperator c_op, const Tolerance& tol = {});
};

/// Throws NotPositive unless C is Hermitian with min eigenvalue > rel_eps ||C||.
void require_positive_invertible(const DenseOperator& c, const Tolerance& tol = {});

/// L_C = C S. Cross-checked column by column against sum_n <f, f_n> C f_n.
DenseOperator controlled_operator(const FrameFamily& f, const DenseOperator& c);

struct ControlledForm {
  cplx value;
  double imaginary_part = 0.0;
};

/// sum_n <f, f_n> <C f_n, f>, i.e. <C S f, f>.
ControlledForm controlled_form(const FrameFamily& f, const DenseOperator& c, std::span<const cplx> x);

/// Optimal controlled-frame bounds m_C, M_C: extreme eigenvalues of the
/// Hermitian part of C S. Certified iff m_C > rel_eps * M_C. The report's
/// anti_hermitian_residual records how far C S is from Hermitian.
CertReport certify_controlled_frame(const FrameFamily& f, const DenseOperator& c, const Tolerance& tol = {});

/// A ||C^{1/2} K* f||^2 <= <H f, f> <= B ||f||^2 with H = (CS + (CS)*)/2,
/// tested as H - A (C^{1/2} K)(C^{1/2} K)* >= 0 and lambda_max(H) <= B.
/// Throws CommutationViolated when ||CK - KC|| > rel_eps ||C|| ||K||, and
/// BadBounds for non-positive bounds.
CertReport certify_controlled_kframe(const ControlledProblem& p, double a, double b, const Tolerance& tol = {});

/// Optimal (A, B) for the controlled K-frame inequality. Same gates as
/// certify_controlled_kframe; throws ZeroK when ||K|| <= rank_eps.
FrameBounds optimal_controlled_kframe_bounds(const ControlledProblem& p, const Tolerance& tol = {});

/// Hermitian part of C (S - A K K*) >= 0, the operator form of the lower
/// controlled inequality.
CertReport controlled_inequality(const ControlledProblem& p, double a, const Tolerance& tol = {});

/// (A ||C^{1/2}||^-2, B ||C^{-1/2}||^2): bounds of the plain K-frame implied
/// by a controlled K-frame.
FrameBounds transfer_controlled_to_k(const FrameBounds& bounds, const DenseOperator& c, const Tolerance& tol = {});

/// (A', B' ||C||): controlled bounds implied by a K-frame when CK = KC.
FrameBounds transfer_k_to_controlled(const FrameBounds& bounds, const DenseOperator& c, const Tolerance& tol = {});

namespace detail {

/// Controlled K-frame PSD test without the commutation gate; used where K is
/// replaced by a compression that need not commute with C.
CertReport controlled_kframe_test(const DenseOperator& h, const DenseOperator& c_sqrt_k, double a, double b,
                                  const Tolerance& tol);

}  // namespace detail

}  // namespace framekit
