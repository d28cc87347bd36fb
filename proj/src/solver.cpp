#include "framekit/solver.hpp"

#include <cmath>

#include "framekit/controlled.hpp"
#include "framekit/error.hpp"

namespace framekit {

namespace {

constexpr std::size_t kDivergenceRun = 5;

struct Extremes {
  double low = 0.0;
  double high = 0.0;
};

Extremes frame_extremes(const FrameFamily& f, const Tolerance& tol) {
  const FrameBounds b = optimal_frame_bounds(f, tol);
  if (!is_frame(b, tol)) throw Error(ErrorCode::NotAFrame, "frame operator is singular");
  return {b.lower, b.upper};
}

Extremes controlled_extremes(const DenseOperator& s, const DenseOperator& c_sqrt, const Tolerance& tol) {
  const Spectrum sp = hermitian_spectrum(hermitian_part(c_sqrt * s * c_sqrt), tol);
  if (!(sp.min() > tol.rel_eps * sp.max())) throw Error(ErrorCode::NotPositive, "C^{1/2} S C^{1/2} is not positive definite");
  return {sp.min(), sp.max()};
}

double rate_of(const std::vector<double>& h) {
  if (h.size() < 2 || h.front() == 0.0) return 0.0;
  const double last = h.back();
  if (last == 0.0) return 0.0;
  return std::pow(last / h.front(), 1.0 / static_cast<double>(h.size() - 1));
}

SolveResult iterate(const DenseOperator& s, const DenseOperator* c, const DenseOperator* c_sqrt, Extremes ex,
                    std::span<const cplx> g, double tol_res, std::size_t max_iter) {
  if (g.size() != s.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side has wrong length");
  if (!(tol_res > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol_res must be positive");
  SolveResult out;
  SolveTrace& tr = out.trace;
  tr.relaxation = 2.0 / (ex.low + ex.high);
  tr.contraction_bound = (ex.high - ex.low) / (ex.high + ex.low);

  Vector x(s.rows(), cplx{});
  Vector r(g.begin(), g.end());
  const double g_norm = norm(g);
  auto record = [&](const Vector& res) {
    tr.residual_history.push_back(norm(res));
    tr.controlled_residual_history.push_back(c_sqrt ? norm(framekit::apply(*c_sqrt, res)) : tr.residual_history.back());
  };
  record(r);
  tr.converged = tr.residual_history.back() <= tol_res * g_norm;

  std::size_t growth = 0;
  while (!tr.converged && tr.iterations < max_iter) {
    const Vector step = c ? framekit::apply(*c, r) : r;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += tr.relaxation * step[i];
    r = g - std::span<const cplx>(framekit::apply(s, x));
    ++tr.iterations;
    record(r);
    tr.converged = tr.residual_history.back() <= tol_res * g_norm;
    const auto& h = tr.controlled_residual_history;
    growth = h[h.size() - 1] > h[h.size() - 2] ? growth + 1 : 0;
    if (growth >= kDivergenceRun) {
      tr.diverged = true;
      break;
    }
  }
  tr.rate_estimate = rate_of(tr.controlled_residual_history);
  out.solution = std::move(x);
  return out;
}

}  // namespace

SolveResult frame_algorithm(const FrameFamily& f, std::span<const cplx> g, double tol_res, std::size_t max_iter,
                            const Tolerance& tol) {
  const Extremes ex = frame_extremes(f, tol);
  return iterate(frame_operator(f), nullptr, nullptr, ex, g, tol_res, max_iter);
}

SolveResult preconditioned_frame_algorithm(const FrameFamily& f, const DenseOperator& c, std::span<const cplx> g,
                                           double tol_res, std::size_t max_iter, const Tolerance& tol) {
  frame_extremes(f, tol);
  if (c.rows() != f.dim() || c.cols() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "C must be d x d");
  require_positive_invertible(c, tol);
  const DenseOperator s = frame_operator(f);
  const DenseOperator c_sqrt = positive_sqrt(c, tol);
  const Extremes ex = controlled_extremes(s, c_sqrt, tol);
  return iterate(s, &c, &c_sqrt, ex, g, tol_res, max_iter);
}

ConditionNumbers condition_report(const FrameFamily& f, const DenseOperator& c, const Tolerance& tol) {
  const Extremes plain = frame_extremes(f, tol);
  if (c.rows() != f.dim() || c.cols() != f.dim()) throw Error(ErrorCode::DimensionMismatch, "C must be d x d");
  require_positive_invertible(c, tol);
  const Extremes ctl = controlled_extremes(frame_operator(f), positive_sqrt(c, tol), tol);
  return {plain.high / plain.low, ctl.high / ctl.low};
}

}  // namespace framekit
