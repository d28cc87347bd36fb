#include "doctest.h"

#include "framekit/error.hpp"
#include "support.hpp"

using namespace fk_test;

TEST_CASE("certify_kframe examples") {
  const FrameFamily e1 = real_family(2, {{1, 0}});
  const CertReport a = certify_kframe(KFrameProblem(e1, diag({1, 0})), 1, 1);
  CHECK(a.verdict == Verdict::Certified);

  const CertReport b = certify_kframe(KFrameProblem(FrameFamily::standard_basis(2), DenseOperator::identity(2)), 1, 1);
  CHECK(b.verdict == Verdict::Certified);

  const CertReport c = certify_kframe(KFrameProblem(e1, DenseOperator::identity(2)), 0.3, 1);
  CHECK(c.verdict == Verdict::Refuted);
  REQUIRE(c.witness.size() == 2);
  CHECK(std::abs(c.witness[0]) < 1e-12);
  CHECK(std::abs(std::abs(c.witness[1]) - 1.0) < 1e-12);
  CHECK(norm(c.witness) == doctest::Approx(1.0));
}

TEST_CASE("certify_kframe gates") {
  const KFrameProblem p(FrameFamily::standard_basis(2), DenseOperator::identity(2));
  CHECK_THROWS_AS(certify_kframe(p, 0, 1), Error);
  CHECK_THROWS_AS(certify_kframe(p, 1, -1), Error);
  const CertReport z = certify_kframe(KFrameProblem(FrameFamily::standard_basis(2), DenseOperator::zeros(2, 2)), 1, 1);
  CHECK(z.verdict == Verdict::Degenerate);
  CHECK_THROWS_AS(KFrameProblem(FrameFamily::standard_basis(2), DenseOperator::identity(3)), Error);
  // Upper side binding.
  const CertReport u = certify_kframe(p, 1, 0.5);
  CHECK(u.verdict == Verdict::Refuted);
  CHECK(u.margin == doctest::Approx(-0.5));
}

TEST_CASE("optimal_kframe_lower examples") {
  const FrameFamily f = real_family(2, {{std::sqrt(2.0), 0}, {0, 1}});
  CHECK(optimal_kframe_lower(KFrameProblem(f, diag({1, 0}))) == doctest::Approx(2.0));

  Rng rng(1, 0);
  const FrameFamily g = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(3, 6));
  CHECK(optimal_kframe_lower(KFrameProblem(g, DenseOperator::identity(3))) ==
        doctest::Approx(optimal_frame_bounds(g).lower).epsilon(1e-10));

  CHECK_THROWS_AS(optimal_kframe_lower(KFrameProblem(g, DenseOperator::zeros(3, 3))), Error);
}

TEST_CASE("Parseval family: optimal K-frame bound is at least one for ||K|| = 1") {
  Rng rng(2, 0);
  const FrameFamily parseval = FrameFamily::from_synthesis(select_columns(random_unitary(4, rng), 0, 4));
  for (int t = 0; t < 5; ++t) {
    const DenseOperator raw = rng.complex_gaussian_matrix(4, 2) * rng.complex_gaussian_matrix(2, 4);
    const DenseOperator k = (1.0 / operator_norm(raw)) * raw;
    const KFrameProblem p(parseval, k);
    const double a = optimal_kframe_lower(p);
    CHECK(a >= 1.0 - 1e-10);
    // Rayleigh oracle over R(KK*): sum |<f,f_i>|^2 / ||K* f||^2 >= a.
    const DenseOperator basis = range_basis(k);
    double worst = INFINITY;
    for (int s = 0; s < 1000; ++s) {
      const Vector f = framekit::apply(basis, rng.complex_gaussian_vector(basis.cols()));
      const double kf = std::pow(norm(framekit::apply_adjoint(k, f)), 2);
      worst = std::min(worst, rayleigh(parseval, f) * std::pow(norm(f), 2) / kf);
    }
    CHECK(worst >= a * (1 - 1e-9));
  }
}

TEST_CASE("certification flips around the optimal bound") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed, 9);
    const std::size_t d = 2 + seed % 7;
    const std::size_t n = 1 + seed % 24;
    const FrameFamily f = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(d, n));
    const DenseOperator k = rng.complex_gaussian_matrix(d, d);
    const KFrameProblem p(f, k);
    const double a = optimal_kframe_lower(p);
    if (a <= 0.0) continue;
    const double b = optimal_frame_bounds(f).upper;
    CAPTURE(seed);
    CHECK(certify_kframe(p, a * (1 - 1e-6), b).verdict == Verdict::Certified);
    CHECK(certify_kframe(p, a * (1 + 1e-3), b).verdict == Verdict::Refuted);
  }
}

TEST_CASE("range_restricted_check") {
  Rng rng(3, 0);
  const FrameFamily parseval = FrameFamily::from_synthesis(random_unitary(3, rng));
  const CertReport a = range_restricted_check(KFrameProblem(parseval, DenseOperator::identity(3)), 1, 1);
  CHECK(a.verdict == Verdict::Certified);
  CHECK(std::abs(a.margin) < 1e-12);

  const FrameFamily e1 = real_family(2, {{1, 0}});
  const CertReport b = range_restricted_check(KFrameProblem(e1, diag({1, 0})), 1, 1);
  CHECK(b.verdict == Verdict::Certified);
  CHECK(std::abs(b.margin) < 1e-12);

  CHECK_THROWS_AS(range_restricted_check(KFrameProblem(e1, DenseOperator::identity(2)), 1, 1), Error);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r(seed, 4);
    const std::size_t d = 2 + seed % 7;
    const FrameFamily f = FrameFamily::from_synthesis(r.complex_gaussian_matrix(d, 2 * d));
    const DenseOperator k = r.complex_gaussian_matrix(d, 1 + seed % d) * r.complex_gaussian_matrix(1 + seed % d, d);
    const KFrameProblem p(f, k);
    const FrameBounds fb = optimal_kframe_bounds(p);
    const CertReport c = range_restricted_check(p, fb.lower, fb.upper);
    CHECK(c.verdict == Verdict::Certified);
    CHECK(c.margin >= -1e-9 * c.scale);
    // ||K* f||^2 >= ||K^+||^-2 ||f||^2 on R(K).
    const double kp = operator_norm(pseudo_inverse(k));
    const DenseOperator basis = range_basis(k);
    for (int s = 0; s < 100; ++s) {
      const Vector g = framekit::apply(basis, r.complex_gaussian_vector(basis.cols()));
      CHECK(std::pow(norm(framekit::apply_adjoint(k, g)), 2) >= std::pow(norm(g) / kp, 2) * (1 - 1e-9));
    }
  }
}

TEST_CASE("atomic_coefficients") {
  const KFrameProblem a(FrameFamily::standard_basis(2), DenseOperator::identity(2));
  CHECK(max_diff(atomic_coefficients(a, real_vector({3, 4})).coefficients, real_vector({3, 4})) < 1e-12);

  const KFrameProblem b(real_family(2, {{1, 0}, {1, 0}, {0, 1}}), DenseOperator::identity(2));
  const AtomicCoefficients cb = atomic_coefficients(b, real_vector({2, 5}));
  CHECK(max_diff(cb.coefficients, real_vector({1, 1, 5})) < 1e-12);
  CHECK(cb.constant == doctest::Approx(std::sqrt(27.0 / 29.0)));

  const KFrameProblem c(real_family(2, {{1, 0}}), diag({1, 0}));
  CHECK(max_diff(atomic_coefficients(c, real_vector({7, 9})).coefficients, real_vector({7})) < 1e-12);

  const KFrameProblem bad(real_family(2, {{1, 0}}), DenseOperator::identity(2));
  CHECK_THROWS_AS(atomic_coefficients(bad, real_vector({0, 1})), Error);
}

TEST_CASE("atomic constant is bounded by ||K|| / sqrt(A)") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 5);
    const std::size_t d = 2 + seed % 5;
    const FrameFamily f = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(d, d + 2));
    const DenseOperator k = rng.complex_gaussian_matrix(d, d);
    const KFrameProblem p(f, k);
    const double a = optimal_kframe_lower(p);
    const double bound = operator_norm(k) / std::sqrt(a);
    for (int t = 0; t < 20; ++t) {
      const AtomicCoefficients ac = atomic_coefficients(p, rng.complex_gaussian_vector(d));
      CHECK(ac.constant <= bound * (1 + 1e-9));
    }
  }
}
