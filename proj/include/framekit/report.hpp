#pragma once

#include <string_view>

#include "framekit/frame.hpp"

namespace framekit {

enum class Verdict { Certified, Refuted, Degenerate };

std::string_view to_string(Verdict v);

/// Outcome of a certificate: the verdict, the bounds that were tested, the
/// signed slack of the inequality closest to failing, and a unit vector on
/// which that slack is attained.
struct CertReport {
  Verdict verdict = Verdict::Refuted;
  FrameBounds bounds;
  double margin = 0.0;
  Vector witness;
  /// Normalisation used for every "tol * scale" comparison in the report.
  double scale = 0.0;
  /// ||(CS - (CS)*)/2||; zero for certificates that do not involve C.
  double anti_hermitian_residual = 0.0;
  /// ||CK - KC||; zero for certificates that do not involve C.
  double commute_residual = 0.0;
};

}  // namespace framekit
