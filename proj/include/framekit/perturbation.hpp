#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "framekit/controlled.hpp"
#include "framekit/kframe.hpp"

namespace framekit {

/// Perturbation constants: (alpha, beta, gamma) weigh ||sum c_k f_k||,
/// ||sum c_k g_k|| and ||c|| on the right-hand side of the synthesis-side
/// perturbation inequality.
struct PerturbationSpec {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// All finite and >= 0, else InvalidArgument.
  void validate() const;
};

enum class ConditionMode { SufficientCertified, SampledPass, SampledFail };

std::string_view to_string(ConditionMode m);

struct ConditionReport {
  ConditionMode mode = ConditionMode::SampledFail;
  /// ||T_F - T_G||
  double e_norm = 0.0;
  /// max{alpha + gamma / sqrt(C_F), beta} with C_F the optimal lower frame
  /// bound of F; infinite when C_F = 0 and gamma > 0.
  double gate_value = 0.0;
  bool gate_passes = false;
  std::size_t trials = 0;
  /// min over sampled c of rhs - lhs (infinity in sufficient mode).
  double worst_slack = 0.0;
  std::uint64_t seed = 0;
};

/// Checks ||sum c_j (f_j - g_j)|| <= alpha ||sum c_j f_j|| + beta ||sum c_j g_j||
/// + gamma ||c||. Certified outright when ||T_F - T_G|| <= gamma; otherwise
/// tested on `trials` seeded complex Gaussian coefficient sequences.
ConditionReport cc_condition(const FrameFamily& f, const FrameFamily& g, const PerturbationSpec& s, std::size_t trials,
                             std::uint64_t seed);

struct PerturbationReport {
  /// max{alpha + gamma sqrt(1/A) ||K^+||, beta} < 1
  bool admissible = false;
  double gate_value = 0.0;
  std::optional<FrameBounds> predicted;
  std::optional<FrameBounds> empirical;
  double e_norm = 0.0;
  /// Orthogonal projector onto Q(R(K)) (Thm-3.3 style) or onto span{g_k}.
  DenseOperator projector;
  std::size_t projector_rank = 0;
  Verdict verdict = Verdict::Refuted;
  double lower_slack = 0.0;
  double upper_slack = 0.0;
  double scale = 0.0;
  bool violation = false;
  std::optional<ConditionReport> condition;

  // Compact-perturbation fields.
  double bessel_bound = 0.0;
  double bessel_reference = 0.0;
  double synthesis_residual = 0.0;
  double frame_operator_residual = 0.0;
  bool span_is_full = false;
  double commute_residual = 0.0;
};

/// Predicted bounds for a perturbed K-frame with bounds (A, B):
///   lower = [sqrt(A) ||K^+||^-1 (1 - alpha) - gamma]^2 / ((1 + beta)^2 ||K||^2)
///   upper = [sqrt(B) (1 + alpha) + gamma]^2 / (1 - beta)^2
/// Inadmissible specs carry no prediction. Throws ZeroK, BadBounds.
PerturbationReport kframe_perturb_predict(double a, double b, const DenseOperator& k, const PerturbationSpec& s,
                                          const Tolerance& tol = {});

/// Certifies G as a P K-frame with P the projector onto Q(R(K)), Q = T_G T_F*,
/// and compares its optimal bounds with the prediction. Throws
/// ConditionFailed when the perturbation inequality fails on a sample,
/// NotCertified when F is not a K-frame, DegenerateProjector when
/// Q(R(K)) = {0}.
PerturbationReport verify_perturbed_kframe(const FrameFamily& f, const FrameFamily& g, const DenseOperator& k,
                                           const PerturbationSpec& s, const Tolerance& tol = {},
                                           std::size_t trials = 256, std::uint64_t seed = 0);

/// B_F (1 + ||E|| / sqrt(B_F))^2 ||C^{1/2}||^2.
double compact_perturb_bessel_bound(double b_f, const DenseOperator& e, const DenseOperator& c,
                                    const Tolerance& tol = {});

/// Compact perturbation of a controlled K-frame: checks the Bessel bound for
/// G and certifies G as a C-controlled (P K)-frame on span{g_k}, with P the
/// projector onto that span. B_F is max(M_C(F), ||T_F||^2).
PerturbationReport certify_perturbed_controlled(const ControlledProblem& p, const FrameFamily& g,
                                                const Tolerance& tol = {});

}  // namespace framekit
