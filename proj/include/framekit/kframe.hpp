#pragma once

#include <cstdint>

#include "framekit/frame.hpp"
#include "framekit/report.hpp"

namespace framekit {

/// A family together with the operator K whose range the lower frame
/// inequality is restricted to. K is d x d.
struct KFrameProblem {
  FrameFamily family;
  DenseOperator k;

  KFrameProblem(FrameFamily f, DenseOperator k_op);
};

/// Tests A ||K* f||^2 <= sum |<f, f_i>|^2 <= B ||f||^2 as the PSD conditions
/// S - A K K* >= 0 and lambda_max(S) <= B. Throws BadBounds for A <= 0 or
/// B <= 0. Returns Degenerate when ||K|| <= rank_eps.
CertReport certify_kframe(const KFrameProblem& p, double a, double b, const Tolerance& tol = {});

/// sup{A : S - A K K* >= 0}. Zero when the family is not a K-frame.
/// Throws ZeroK when ||K|| <= rank_eps.
double optimal_kframe_lower(const KFrameProblem& p, const Tolerance& tol = {});

/// Optimal (A, B) for the K-frame inequality.
FrameBounds optimal_kframe_bounds(const KFrameProblem& p, const Tolerance& tol = {});

/// Number of random combinations of the R(K) basis used by the sandwich check.
inline constexpr std::size_t kRangeSamples = 100;

/// Checks A ||K^+||^-2 ||f|| <= ||S f|| <= B ||f|| on the orthonormal basis of
/// R(K) plus kRangeSamples seeded combinations of it. The margin is the worst
/// slack over all sampled unit vectors. Throws NotCertified unless
/// certify_kframe(p, A, B) is Certified.
CertReport range_restricted_check(const KFrameProblem& p, double a, double b, const Tolerance& tol = {},
                                  std::uint64_t seed = 0x5eed);

struct AtomicCoefficients {
  Vector coefficients;
  /// ||a|| / ||x|| (zero for x = 0).
  double constant = 0.0;
  /// ||T a - K x||
  double residual = 0.0;
};

/// Minimal-norm a with T a = K x. Throws OutOfRange when K x is not in the
/// range of the synthesis operator (residual > 1e-8 ||K x||).
AtomicCoefficients atomic_coefficients(const KFrameProblem& p, std::span<const cplx> x, const Tolerance& tol = {});

}  // namespace framekit
