#include "framekit/frame.hpp"

#include <cmath>
#include <string>

#include "framekit/error.hpp"
#include "framekit/report.hpp"

namespace framekit {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

FrameFamily::FrameFamily(std::size_t dim, std::vector<Vector> vectors) : dim_(dim), vectors_(std::move(vectors)) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "frame dimension must be positive");
  if (vectors_.empty()) throw Error(ErrorCode::InvalidArgument, "frame family must hold at least one vector");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "vector " + std::to_string(i) + " has length " +
                                                    std::to_string(vectors_[i].size()) + ", expected " +
                                                    std::to_string(dim_));
    }
    for (const cplx& z : vectors_[i]) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidArgument, "vector " + std::to_string(i) + " has a non-finite entry");
      }
    }
  }
}

FrameFamily FrameFamily::from_synthesis(const DenseOperator& t) {
  std::vector<Vector> v;
  v.reserve(t.cols());
  for (std::size_t j = 0; j < t.cols(); ++j) v.push_back(t.col(j));
  return FrameFamily(t.rows(), std::move(v));
}

FrameFamily FrameFamily::standard_basis(std::size_t dim) { return from_synthesis(DenseOperator::identity(dim)); }

DenseOperator synthesis(const FrameFamily& f) {
  const std::size_t d = f.dim();
  const std::size_t n = f.count();
  std::vector<cplx> e(d * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < d; ++i) e[i * n + j] = f[j][i];
  return DenseOperator(d, n, std::move(e));
}

DenseOperator analysis(const FrameFamily& f) { return adjoint(synthesis(f)); }

DenseOperator frame_operator(const FrameFamily& f) {
  const DenseOperator t = synthesis(f);
  return hermitian_part(times_adjoint(t, t));
}

FrameBounds optimal_frame_bounds(const FrameFamily& f, const Tolerance& tol) {
  const Spectrum sp = hermitian_spectrum(frame_operator(f), tol);
  return {std::max(sp.min(), 0.0), sp.max(), true, true};
}

bool is_frame(const FrameBounds& b, const Tolerance& tol) { return b.lower > tol.rel_eps * b.upper; }

Reconstruction reconstruct(const FrameFamily& f, std::span<const cplx> g, const Tolerance& tol) {
  if (g.size() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "reconstruct: vector length differs from dim");
  const DenseOperator s = frame_operator(f);
  const Spectrum sp = hermitian_spectrum(s, tol);
  if (!(sp.min() > tol.rel_eps * sp.max())) {
    throw Error(ErrorCode::NotAFrame, "frame operator is not invertible (lower bound " + std::to_string(sp.min()) + ")");
  }
  // S^-1 = V diag(1/lambda) V*
  const std::size_t d = f.dim();
  std::vector<cplx> vl(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) vl[i * d + k] = sp.basis(i, k) / sp.eigenvalues[k];
  const DenseOperator s_inv = hermitian_part(times_adjoint(DenseOperator(d, d, std::move(vl)), sp.basis));

  Reconstruction out;
  out.coefficients.resize(f.count());
  out.vector.assign(d, cplx{});
  for (std::size_t i = 0; i < f.count(); ++i) {
    const Vector dual = framekit::apply(s_inv, f[i]);
    out.coefficients[i] = inner(g, dual);
    for (std::size_t k = 0; k < d; ++k) out.vector[k] += out.coefficients[i] * f[i][k];
  }
  return out;
}

}  // namespace framekit
