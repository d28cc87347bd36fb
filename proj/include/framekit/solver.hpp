#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "framekit/frame.hpp"

namespace framekit {

struct SolveTrace {
  std::size_t iterations = 0;
  /// ||g - S x_k||, starting with k = 0.
  std::vector<double> residual_history;
  /// ||C^{1/2} (g - S x_k)||; equals residual_history for the plain solver.
  std::vector<double> controlled_residual_history;
  bool converged = false;
  bool diverged = false;
  /// Geometric mean of successive ratios of controlled_residual_history.
  double rate_estimate = 0.0;
  /// (M - m) / (M + m) for the spectrum driving the iteration.
  double contraction_bound = 0.0;
  double relaxation = 0.0;
};

struct SolveResult {
  Vector solution;
  SolveTrace trace;
};

/// Richardson iteration x_{k+1} = x_k + w (g - S x_k), w = 2 / (A + B), x_0 = 0.
/// Stops when ||g - S x|| <= tol_res ||g||. Throws NotAFrame.
SolveResult frame_algorithm(const FrameFamily& f, std::span<const cplx> g, double tol_res, std::size_t max_iter,
                            const Tolerance& tol = {});

/// x_{k+1} = x_k + w C (g - S x_k) with w = 2 / (m + M), where [m, M] is the
/// spectrum of C^{1/2} S C^{1/2} (similar to C S). Throws NotAFrame,
/// NotPositive.
SolveResult preconditioned_frame_algorithm(const FrameFamily& f, const DenseOperator& c, std::span<const cplx> g,
                                           double tol_res, std::size_t max_iter, const Tolerance& tol = {});

struct ConditionNumbers {
  double plain = 0.0;
  double controlled = 0.0;
};

/// (B / A, M / m).
ConditionNumbers condition_report(const FrameFamily& f, const DenseOperator& c, const Tolerance& tol = {});

}  // namespace framekit
