#include "framekit/kframe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "framekit/error.hpp"
#include "framekit/generators.hpp"

namespace framekit {

KFrameProblem::KFrameProblem(FrameFamily f, DenseOperator k_op) : family(std::move(f)), k(std::move(k_op)) {
  if (!k.square() || k.rows() != family.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "K must be square with side " + std::to_string(family.dim()));
  }
}

namespace {

void check_bounds(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(ErrorCode::BadBounds, "frame bounds must be positive (A=" + std::to_string(a) +
                                          ", B=" + std::to_string(b) + ")");
  }
}

}  // namespace

CertReport certify_kframe(const KFrameProblem& p, double a, double b, const Tolerance& tol) {
  check_bounds(a, b);
  const DenseOperator s = frame_operator(p.family);
  const Spectrum ss = hermitian_spectrum(s, tol);

  CertReport rep;
  rep.bounds = {a, b, false, false};
  if (operator_norm(p.k) <= tol.rank_eps) {
    rep.verdict = Verdict::Degenerate;
    rep.scale = ss.max();
    rep.margin = b - ss.max();
    rep.witness = ss.eigenvector(ss.eigenvalues.size() - 1);
    return rep;
  }

  const DenseOperator kk = times_adjoint(p.k, p.k);
  const Spectrum lower = hermitian_spectrum(s - a * kk, tol);
  rep.scale = std::max(ss.max(), a * operator_norm(kk));
  const double lower_slack = lower.min();
  const double upper_slack = b - ss.max();
  const double eps = tol.rel_eps * rep.scale;
  rep.verdict = (lower_slack >= -eps && upper_slack >= -eps) ? Verdict::Certified : Verdict::Refuted;
  if (lower_slack <= upper_slack) {
    rep.margin = lower_slack;
    rep.witness = lower.eigenvector(0);
  } else {
    rep.margin = upper_slack;
    rep.witness = ss.eigenvector(ss.eigenvalues.size() - 1);
  }
  return rep;
}

double optimal_kframe_lower(const KFrameProblem& p, const Tolerance& tol) {
  if (operator_norm(p.k) <= tol.rank_eps) throw Error(ErrorCode::ZeroK, "||K|| is below rank_eps");
  return pencil_lower_bound(frame_operator(p.family), p.k, tol);
}

FrameBounds optimal_kframe_bounds(const KFrameProblem& p, const Tolerance& tol) {
  const double lower = optimal_kframe_lower(p, tol);
  return {lower, optimal_frame_bounds(p.family, tol).upper, true, true};
}

CertReport range_restricted_check(const KFrameProblem& p, double a, double b, const Tolerance& tol,
                                  std::uint64_t seed) {
  const CertReport base = certify_kframe(p, a, b, tol);
  if (base.verdict != Verdict::Certified) {
    throw Error(ErrorCode::NotCertified, "family is not certified as a K-frame with the given bounds");
  }
  const DenseOperator basis = range_basis(p.k, tol);
  const SingularValues sv = singular_values(p.k);
  const double k_pinv_norm = 1.0 / sv.values[sv.rank(tol.rank_eps) - 1];
  const double lower_const = a / (k_pinv_norm * k_pinv_norm);
  const DenseOperator s = frame_operator(p.family);

  std::vector<Vector> samples;
  for (std::size_t j = 0; j < basis.cols(); ++j) samples.push_back(basis.col(j));
  Rng rng(seed, /*stream=*/0x52414e4745ULL);
  for (std::size_t t = 0; t < kRangeSamples; ++t) {
    const Vector coeffs = rng.complex_gaussian_vector(basis.cols());
    Vector f = framekit::apply(basis, coeffs);
    const double nf = norm(f);
    if (nf == 0.0) continue;
    samples.push_back(scaled(1.0 / nf, f));
  }

  CertReport rep;
  rep.bounds = {lower_const, b, false, false};
  rep.scale = base.scale;
  rep.margin = std::numeric_limits<double>::infinity();
  for (const Vector& f : samples) {
    const double sf = norm(framekit::apply(s, f));
    const double slack = std::min(sf - lower_const, b - sf);
    if (slack < rep.margin) {
      rep.margin = slack;
      rep.witness = f;
    }
  }
  rep.verdict = rep.margin >= -tol.rel_eps * rep.scale ? Verdict::Certified : Verdict::Refuted;
  return rep;
}

AtomicCoefficients atomic_coefficients(const KFrameProblem& p, std::span<const cplx> x, const Tolerance& tol) {
  if (x.size() != p.family.dim()) throw Error(ErrorCode::DimensionMismatch, "atomic_coefficients: x has wrong length");
  const DenseOperator t = synthesis(p.family);
  const Vector kx = framekit::apply(p.k, x);
  AtomicCoefficients out;
  out.coefficients = framekit::apply(pseudo_inverse(t, tol), kx);
  out.residual = norm(framekit::apply(t, out.coefficients) - std::span<const cplx>(kx));
  const double nkx = norm(kx);
  if (out.residual > 1e-8 * nkx) {
    throw Error(ErrorCode::OutOfRange, "K x is not in the range of the synthesis operator (residual " +
                                           std::to_string(out.residual) + ")");
  }
  const double nx = norm(x);
  out.constant = nx == 0.0 ? 0.0 : norm(out.coefficients) / nx;
  return out;
}

}  // namespace framekit
