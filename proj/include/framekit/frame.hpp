#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "framekit/operator.hpp"

namespace framekit {

/// Ordered finite family f_1..f_n in C^d. Order and repetitions are kept.
class FrameFamily {
 public:
  FrameFamily(std::size_t dim, std::vector<Vector> vectors);

  /// Family whose vectors are the columns of a d x n synthesis matrix.
  static FrameFamily from_synthesis(const DenseOperator& t);
  static FrameFamily standard_basis(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return vectors_.size(); }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  const Vector& operator[](std::size_t i) const { return vectors_[i]; }

  friend bool operator==(const FrameFamily&, const FrameFamily&) = default;

 private:
  std::size_t dim_;
  std::vector<Vector> vectors_;
};

/// Frame-inequality constants (A, B); `*_optimal` marks values that are the
/// extreme eigenvalues rather than merely valid.
struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool lower_optimal = false;
  bool upper_optimal = false;
};

/// d x n matrix with f_j as column j.
DenseOperator synthesis(const FrameFamily& f);
/// n x d matrix f -> (<f, f_j>)_j.
DenseOperator analysis(const FrameFamily& f);
/// S = T T*, Hermitian PSD.
DenseOperator frame_operator(const FrameFamily& f);

/// Extreme eigenvalues of S, both flagged optimal.
FrameBounds optimal_frame_bounds(const FrameFamily& f, const Tolerance& tol = {});

/// True when the optimal lower bound exceeds rel_eps times the upper one.
bool is_frame(const FrameBounds& b, const Tolerance& tol = {});

struct Reconstruction {
  Vector vector;
  /// Canonical coefficients <g, S^-1 f_i>.
  Vector coefficients;
};

/// sum_i <g, S^-1 f_i> f_i. Throws NotAFrame if S is not invertible.
Reconstruction reconstruct(const FrameFamily& f, std::span<const cplx> g, const Tolerance& tol = {});

}  // namespace framekit
