#include "framekit/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "framekit/error.hpp"
#include "framekit/generators.hpp"

namespace framekit {

void PerturbationSpec::validate() const {
  for (double v : {alpha, beta, gamma}) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidArgument, "perturbation constants must be finite and >= 0");
  }
}

std::string_view to_string(ConditionMode m) {
  switch (m) {
    case ConditionMode::SufficientCertified: return "Sufficient-Certified";
    case ConditionMode::SampledPass: return "Sampled-Pass";
    case ConditionMode::SampledFail: return "Sampled-Fail";
  }
  return "Unknown";
}

namespace {

void require_same_shape(const FrameFamily& f, const FrameFamily& g) {
  if (f.dim() != g.dim() || f.count() != g.count()) {
    throw Error(ErrorCode::ShapeMismatch, "families differ in shape (" + std::to_string(f.dim()) + "x" +
                                              std::to_string(f.count()) + " vs " + std::to_string(g.dim()) + "x" +
                                              std::to_string(g.count()) + ")");
  }
}

double pinv_norm(const SingularValues& sv, const Tolerance& tol) {
  return 1.0 / sv.values[sv.rank(tol.rank_eps) - 1];
}

}  // namespace

ConditionReport cc_condition(const FrameFamily& f, const FrameFamily& g, const PerturbationSpec& s, std::size_t trials,
                             std::uint64_t seed) {
  require_same_shape(f, g);
  s.validate();
  const DenseOperator tf = synthesis(f);
  const DenseOperator tg = synthesis(g);
  const DenseOperator e = tf - tg;

  ConditionReport rep;
  rep.seed = seed;
  rep.e_norm = operator_norm(e);
  const double c_f = optimal_frame_bounds(f).lower;
  const double mu_term = s.gamma == 0.0 ? 0.0 : (c_f > 0.0 ? s.gamma / std::sqrt(c_f) : std::numeric_limits<double>::infinity());
  rep.gate_value = std::max(s.alpha + mu_term, s.beta);
  rep.gate_passes = rep.gate_value < 1.0;

  if (rep.e_norm <= s.gamma) {
    rep.mode = ConditionMode::SufficientCertified;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    return rep;
  }
  Rng rng(seed, streams::kSampling);
  rep.trials = trials;
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    const Vector c = rng.complex_gaussian_vector(f.count());
    const double lhs = norm(framekit::apply(e, c));
    const double rhs = s.alpha * norm(framekit::apply(tf, c)) + s.beta * norm(framekit::apply(tg, c)) + s.gamma * norm(c);
    rep.worst_slack = std::min(rep.worst_slack, rhs - lhs);
  }
  // Rounding in the three norms is O(eps * ||c|| * ||T||); allow for it.
  const double noise = 1e-12 * std::max(operator_norm(tf), operator_norm(tg)) * std::sqrt(static_cast<double>(f.count()));
  rep.mode = rep.worst_slack >= -noise ? ConditionMode::SampledPass : ConditionMode::SampledFail;
  return rep;
}

PerturbationReport kframe_perturb_predict(double a, double b, const DenseOperator& k, const PerturbationSpec& s,
                                          const Tolerance& tol) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::BadBounds, "frame bounds must be positive");
  s.validate();
  const SingularValues sv = singular_values(k);
  if (sv.values.empty() || sv.values.front() <= tol.rank_eps) throw Error(ErrorCode::ZeroK, "||K|| is below rank_eps");
  const double k_norm = sv.values.front();
  const double k_pinv = pinv_norm(sv, tol);

  PerturbationReport rep;
  rep.gate_value = std::max(s.alpha + s.gamma * std::sqrt(1.0 / a) * k_pinv, s.beta);
  rep.admissible = rep.gate_value < 1.0;
  if (rep.admissible) {
    const double lo = std::sqrt(a) / k_pinv * (1.0 - s.alpha) - s.gamma;
    const double hi = std::sqrt(b) * (1.0 + s.alpha) + s.gamma;
    FrameBounds fb;
    fb.lower = lo * lo / ((1.0 + s.beta) * (1.0 + s.beta) * k_norm * k_norm);
    fb.upper = hi * hi / ((1.0 - s.beta) * (1.0 - s.beta));
    rep.predicted = fb;
  }
  return rep;
}

PerturbationReport verify_perturbed_kframe(const FrameFamily& f, const FrameFamily& g, const DenseOperator& k,
                                           const PerturbationSpec& s, const Tolerance& tol, std::size_t trials,
                                           std::uint64_t seed) {
  require_same_shape(f, g);
  const ConditionReport cond = cc_condition(f, g, s, trials, seed);
  if (cond.mode == ConditionMode::SampledFail) {
    throw Error(ErrorCode::ConditionFailed, "perturbation inequality fails on a sampled coefficient sequence (slack " +
                                                std::to_string(cond.worst_slack) + ")");
  }
  const KFrameProblem base(f, k);
  const FrameBounds fb = optimal_kframe_bounds(base, tol);
  if (!(fb.lower > 0.0)) throw Error(ErrorCode::NotCertified, "F is not a K-frame");

  PerturbationReport rep = kframe_perturb_predict(fb.lower, fb.upper, k, s, tol);
  rep.condition = cond;
  rep.e_norm = cond.e_norm;

  // Q = T_G T_F*, projector onto Q(R(K)).
  const DenseOperator q = times_adjoint(synthesis(g), synthesis(f));
  const DenseOperator image = q * range_basis(k, tol);
  const DenseOperator basis = range_basis(image, tol);
  rep.projector_rank = basis.cols();
  if (rep.projector_rank == 0) throw Error(ErrorCode::DegenerateProjector, "Q(R(K)) is the zero subspace");
  rep.projector = hermitian_part(times_adjoint(basis, basis));
  const DenseOperator k_eff = rep.projector * k;

  FrameBounds emp;
  emp.lower = optimal_kframe_lower(KFrameProblem(g, k_eff), tol);
  emp.upper = optimal_frame_bounds(g, tol).upper;
  emp.lower_optimal = emp.upper_optimal = true;
  rep.empirical = emp;
  rep.scale = std::max(fb.upper, emp.upper);

  if (!rep.admissible) {
    rep.verdict = Verdict::Refuted;
    return rep;
  }
  rep.lower_slack = emp.lower - rep.predicted->lower;
  rep.upper_slack = rep.predicted->upper - emp.upper;
  const double eps = tol.rel_eps * rep.scale;
  rep.violation = rep.lower_slack < -eps || rep.upper_slack < -eps;
  rep.verdict = (!rep.violation && emp.lower > 0.0) ? Verdict::Certified : Verdict::Refuted;
  return rep;
}

double compact_perturb_bessel_bound(double b_f, const DenseOperator& e, const DenseOperator& c, const Tolerance& tol) {
  if (!(b_f > 0.0)) throw Error(ErrorCode::NotPositive, "B_F must be positive");
  require_positive_invertible(c, tol);
  const double growth = 1.0 + operator_norm(e) / std::sqrt(b_f);
  // ||C^{1/2}||^2 = lambda_max(C)
  return b_f * growth * growth * hermitian_spectrum(c, tol).max();
}

PerturbationReport certify_perturbed_controlled(const ControlledProblem& p, const FrameFamily& g, const Tolerance& tol) {
  require_same_shape(p.family, g);
  const FrameBounds fb = optimal_controlled_kframe_bounds(p, tol);
  if (!(fb.lower > 0.0)) throw Error(ErrorCode::NotCertified, "F is not a C-controlled K-frame");

  const DenseOperator tf = synthesis(p.family);
  const DenseOperator tg = synthesis(g);
  const DenseOperator e = tf - tg;
  const DenseOperator v = tf - e;
  const DenseOperator s_g = frame_operator(g);

  PerturbationReport rep;
  rep.admissible = true;
  rep.e_norm = operator_norm(e);
  const double tf_norm = operator_norm(tf);
  rep.synthesis_residual = max_abs_entry(v - tg);
  rep.frame_operator_residual = max_abs_entry(hermitian_part(times_adjoint(v, v)) - s_g);

  rep.bessel_reference = std::max(fb.upper, tf_norm * tf_norm);
  rep.bessel_bound = compact_perturb_bessel_bound(rep.bessel_reference, e, p.c, tol);
  const DenseOperator h_g = hermitian_part(p.c * s_g);
  const Spectrum hs = hermitian_spectrum(h_g, tol);
  rep.scale = std::max(rep.bessel_bound, std::abs(hs.min()));
  rep.upper_slack = rep.bessel_bound - hs.max();
  rep.violation = rep.upper_slack < -tol.rel_eps * rep.scale;

  // Restrict to span{g_k}.
  const DenseOperator w = range_basis(tg, tol);
  rep.projector_rank = w.cols();
  if (rep.projector_rank == 0) {
    throw Error(ErrorCode::SpanCollapse, "perturbed family spans the zero subspace");
  }
  rep.span_is_full = rep.projector_rank == g.dim();
  rep.projector = hermitian_part(times_adjoint(w, w));
  const DenseOperator k_span = rep.projector * p.k;
  rep.commute_residual = operator_norm(p.c * k_span - k_span * p.c);

  FrameBounds emp;
  emp.upper = hs.max();
  emp.upper_optimal = true;
  const DenseOperator h_w = hermitian_part(adjoint_times(w, h_g * w));
  const DenseOperator g_w = adjoint_times(w, positive_sqrt(p.c, tol) * k_span);
  if (operator_norm(g_w) <= tol.rank_eps) {
    rep.empirical = emp;
    rep.verdict = Verdict::Degenerate;
    return rep;
  }
  emp.lower = pencil_lower_bound(h_w, g_w, tol);
  emp.lower_optimal = true;
  rep.empirical = emp;
  rep.lower_slack = emp.lower;
  rep.verdict = (!rep.violation && emp.lower > tol.rel_eps * rep.scale) ? Verdict::Certified : Verdict::Refuted;
  return rep;
}

}  // namespace framekit
