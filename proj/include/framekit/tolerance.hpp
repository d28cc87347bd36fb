#pragma once

namespace framekit {

/// Relative thresholds shared by every certificate.
///
/// `rel_eps` scales inequality slack (a PSD test passes when the smallest
/// eigenvalue is >= -rel_eps * scale). `rank_eps` is the singular-value cutoff
/// relative to the largest singular value.
struct Tolerance {
  double rel_eps = 1e-10;
  double rank_eps = 1e-12;

  /// Throws Error(InvalidArgument) unless both values lie in (0, 1e-2).
  void validate() const;

  /// Defaults, with rel_eps taken from FRAMEKIT_TOL when that variable is set.
  static Tolerance from_environment();
};

}  // namespace framekit
