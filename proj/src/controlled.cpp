#include "framekit/controlled.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "framekit/error.hpp"

namespace framekit {

namespace {

void check_bounds(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::BadBounds, "frame bounds must be positive");
}

void check_commutation(const ControlledProblem& p, const Tolerance& tol) {
  const double limit = tol.rel_eps * operator_norm(p.c) * operator_norm(p.k);
  if (p.commute_residual > limit) {
    throw Error(ErrorCode::CommutationViolated, "||CK - KC|| = " + std::to_string(p.commute_residual) +
                                                    " exceeds " + std::to_string(limit));
  }
}

Spectrum c_spectrum(const DenseOperator& c, const Tolerance& tol) {
  require_positive_invertible(c, tol);
  return hermitian_spectrum(c, tol);
}

}  // namespace

void require_positive_invertible(const DenseOperator& c, const Tolerance& tol) {
  if (!c.square()) throw Error(ErrorCode::NotPositive, "C is not square");
  const double fro = frobenius_norm(c);
  if (2.0 * frobenius_norm(anti_hermitian_part(c)) > tol.rel_eps * fro) {
    throw Error(ErrorCode::NotPositive, "C is not Hermitian");
  }
  const Spectrum sp = hermitian_spectrum(c, tol);
  if (!(sp.min() > tol.rel_eps * std::abs(sp.max()))) {
    throw Error(ErrorCode::NotPositive, "C is not positive definite (min eigenvalue " + std::to_string(sp.min()) + ")");
  }
}

ControlledProblem::ControlledProblem(FrameFamily f, DenseOperator k_op, DenseOperator c_op, const Tolerance& tol)
    : family(std::move(f)), k(std::move(k_op)), c(std::move(c_op)) {
  if (!k.square() || k.rows() != family.dim() || !c.square() || c.rows() != family.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "K and C must be square with side " + std::to_string(family.dim()));
  }
  require_positive_invertible(c, tol);
  commute_residual = operator_norm(c * k - k * c);
}

DenseOperator controlled_operator(const FrameFamily& f, const DenseOperator& c) {
  if (!c.square() || c.rows() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "C must be square with side " + std::to_string(f.dim()));
  }
  const DenseOperator s = frame_operator(f);
  const DenseOperator l = c * s;

  // Direct evaluation: L e_j = sum_n <e_j, f_n> C f_n = sum_n conj(f_n[j]) C f_n.
  const std::size_t d = f.dim();
  std::vector<cplx> direct(d * d);
  for (std::size_t n = 0; n < f.count(); ++n) {
    const Vector cf = framekit::apply(c, f[n]);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) direct[i * d + j] += std::conj(f[n][j]) * cf[i];
  }
  const double gap = max_abs_entry(l - DenseOperator(d, d, std::move(direct)));
  const double scale = std::max(1.0, operator_norm(c) * operator_norm(s));
  if (gap > 1e-10 * scale) {
    throw Error(ErrorCode::InvalidArgument, "C S disagrees with the direct sum by " + std::to_string(gap));
  }
  return l;
}

ControlledForm controlled_form(const FrameFamily& f, const DenseOperator& c, std::span<const cplx> x) {
  if (!c.square() || c.rows() != f.dim() || x.size() != f.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "controlled_form: sizes differ from dim");
  }
  cplx sum{};
  for (std::size_t n = 0; n < f.count(); ++n) sum += inner(x, f[n]) * inner(framekit::apply(c, f[n]), x);
  return {sum, sum.imag()};
}

CertReport certify_controlled_frame(const FrameFamily& f, const DenseOperator& c, const Tolerance& tol) {
  require_positive_invertible(c, tol);
  const DenseOperator l = controlled_operator(f, c);
  const Spectrum hs = hermitian_spectrum(hermitian_part(l), tol);
  CertReport rep;
  rep.bounds = {hs.min(), hs.max(), true, true};
  rep.scale = std::max(std::abs(hs.min()), std::abs(hs.max()));
  rep.margin = hs.min() - tol.rel_eps * hs.max();
  rep.witness = hs.eigenvector(0);
  rep.anti_hermitian_residual = operator_norm(anti_hermitian_part(l));
  rep.verdict = hs.min() > tol.rel_eps * hs.max() ? Verdict::Certified : Verdict::Refuted;
  return rep;
}

namespace detail {

CertReport controlled_kframe_test(const DenseOperator& h, const DenseOperator& c_sqrt_k, double a, double b,
                                  const Tolerance& tol) {
  const Spectrum hs = hermitian_spectrum(h, tol);
  const DenseOperator m = times_adjoint(c_sqrt_k, c_sqrt_k);
  const Spectrum lower = hermitian_spectrum(h - a * m, tol);
  CertReport rep;
  rep.bounds = {a, b, false, false};
  rep.scale = std::max({std::abs(hs.min()), std::abs(hs.max()), a * operator_norm(m)});
  const double lower_slack = lower.min();
  const double upper_slack = b - hs.max();
  const double eps = tol.rel_eps * rep.scale;
  rep.verdict = (lower_slack >= -eps && upper_slack >= -eps) ? Verdict::Certified : Verdict::Refuted;
  if (lower_slack <= upper_slack) {
    rep.margin = lower_slack;
    rep.witness = lower.eigenvector(0);
  } else {
    rep.margin = upper_slack;
    rep.witness = hs.eigenvector(hs.eigenvalues.size() - 1);
  }
  return rep;
}

}  // namespace detail

CertReport certify_controlled_kframe(const ControlledProblem& p, double a, double b, const Tolerance& tol) {
  check_bounds(a, b);
  check_commutation(p, tol);
  const DenseOperator l = controlled_operator(p.family, p.c);
  const DenseOperator h = hermitian_part(l);
  CertReport rep;
  if (operator_norm(p.k) <= tol.rank_eps) {
    const Spectrum hs = hermitian_spectrum(h, tol);
    rep.verdict = Verdict::Degenerate;
    rep.bounds = {a, b, false, false};
    rep.scale = std::max(std::abs(hs.min()), std::abs(hs.max()));
    rep.margin = b - hs.max();
    rep.witness = hs.eigenvector(hs.eigenvalues.size() - 1);
  } else {
    rep = detail::controlled_kframe_test(h, positive_sqrt(p.c, tol) * p.k, a, b, tol);
  }
  rep.anti_hermitian_residual = operator_norm(anti_hermitian_part(l));
  rep.commute_residual = p.commute_residual;
  return rep;
}

FrameBounds optimal_controlled_kframe_bounds(const ControlledProblem& p, const Tolerance& tol) {
  check_commutation(p, tol);
  if (operator_norm(p.k) <= tol.rank_eps) throw Error(ErrorCode::ZeroK, "||K|| is below rank_eps");
  const DenseOperator h = hermitian_part(controlled_operator(p.family, p.c));
  const double lower = pencil_lower_bound(h, positive_sqrt(p.c, tol) * p.k, tol);
  return {lower, hermitian_spectrum(h, tol).max(), true, true};
}

CertReport controlled_inequality(const ControlledProblem& p, double a, const Tolerance& tol) {
  if (!(a > 0.0)) throw Error(ErrorCode::BadBounds, "A must be positive");
  check_commutation(p, tol);
  const DenseOperator s = frame_operator(p.family);
  const DenseOperator diff = p.c * (s - a * times_adjoint(p.k, p.k));
  const Spectrum sp = hermitian_spectrum(hermitian_part(diff), tol);
  CertReport rep;
  rep.bounds = {a, 0.0, false, false};
  rep.scale = std::max(operator_norm(p.c) * operator_norm(s), a * operator_norm(p.c) * std::pow(operator_norm(p.k), 2));
  rep.margin = sp.min();
  rep.witness = sp.eigenvector(0);
  rep.commute_residual = p.commute_residual;
  rep.anti_hermitian_residual = operator_norm(anti_hermitian_part(diff));
  rep.verdict = sp.min() >= -tol.rel_eps * rep.scale ? Verdict::Certified : Verdict::Refuted;
  return rep;
}

FrameBounds transfer_controlled_to_k(const FrameBounds& bounds, const DenseOperator& c, const Tolerance& tol) {
  const Spectrum cs = c_spectrum(c, tol);
  // ||C^{1/2}||^2 = lambda_max(C), ||C^{-1/2}||^2 = 1 / lambda_min(C)
  return {bounds.lower / cs.max(), bounds.upper / cs.min(), false, false};
}

FrameBounds transfer_k_to_controlled(const FrameBounds& bounds, const DenseOperator& c, const Tolerance& tol) {
  const Spectrum cs = c_spectrum(c, tol);
  return {bounds.lower, bounds.upper * cs.max(), false, false};
}

}  // namespace framekit
