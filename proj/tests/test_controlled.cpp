#include "doctest.h"

#include "framekit/error.hpp"
#include "support.hpp"

using namespace fk_test;

namespace {

struct Commuting {
  FrameFamily family;
  DenseOperator k;
  DenseOperator c;
};

// F, K and C all diagonal in one random unitary basis.
Commuting commuting_instance(std::uint64_t seed, std::size_t d, std::size_t rank) {
  const GenSpec spec{d, d + 3, seed, 1.0};
  const CommutingPair pair = commuting_pair(spec, rank);
  Rng rng(seed, streams::kSampling);
  std::vector<double> s(d);
  for (double& v : s) v = rng.uniform(0.2, 3.0);
  return {commuting_frame(spec, pair.basis, s), pair.k, pair.c};
}

}  // namespace

TEST_CASE("control operator must be positive definite") {
  const FrameFamily f = FrameFamily::standard_basis(2);
  CHECK_THROWS_AS(ControlledProblem(f, DenseOperator::identity(2), diag({1, -1})), Error);
  CHECK_THROWS_AS(ControlledProblem(f, DenseOperator::identity(2), real_matrix({{1, 1}, {0, 1}})), Error);
  CHECK_THROWS_AS(ControlledProblem(f, DenseOperator::identity(3), DenseOperator::identity(2)), Error);
  const ControlledProblem p(f, real_matrix({{0, 1}, {0, 0}}), diag({1, 2}));
  CHECK(p.commute_residual == doctest::Approx(1.0));
}

TEST_CASE("controlled_operator") {
  Rng rng(1, 0);
  const FrameFamily f = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(3, 5));
  CHECK(max_diff(controlled_operator(f, DenseOperator::identity(3)), frame_operator(f)) < 1e-14);
  CHECK(max_diff(controlled_operator(FrameFamily::standard_basis(2), diag({2, 3})), diag({2, 3})) == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng r(seed, 1);
    const std::size_t d = 2 + seed % 5;
    const FrameFamily g = FrameFamily::from_synthesis(r.complex_gaussian_matrix(d, d + 2));
    const DenseOperator c = with_spectrum(std::vector<double>(d, 1.0), r) + DenseOperator::identity(d);
    // Oracle: sum_n <x, f_n> C f_n applied to the standard basis.
    const DenseOperator lc = controlled_operator(g, c);
    for (std::size_t j = 0; j < d; ++j) {
      const Vector x = unit(d, j);
      Vector acc(d);
      for (const Vector& fn : g.vectors()) {
        const Vector cf = framekit::apply(c, fn);
        const cplx w = inner(x, fn);
        for (std::size_t i = 0; i < d; ++i) acc[i] += w * cf[i];
      }
      for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(lc(i, j) - acc[i]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(controlled_operator(f, DenseOperator::identity(2)), Error);
}

TEST_CASE("controlled_form") {
  Rng rng(2, 0);
  const FrameFamily f = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(3, 4));
  const Vector x = rng.complex_gaussian_vector(3);
  const ControlledForm a = controlled_form(f, DenseOperator::identity(3), x);
  double frame_sum = 0.0;
  for (const Vector& v : f.vectors()) frame_sum += std::norm(inner(x, v));
  CHECK(a.value.real() == doctest::Approx(frame_sum));
  CHECK(std::abs(a.imaginary_part) < 1e-12);

  const ControlledForm b = controlled_form(FrameFamily::standard_basis(2), diag({2, 3}), real_vector({1, 1}));
  CHECK(b.value.real() == doctest::Approx(5.0));

  const FrameFamily df = real_family(3, {{2, 0, 0}, {0, 1, 0}, {0, 0, 3}, {1, 0, 0}});
  const DenseOperator dc = diag({0.5, 4, 2});
  for (int t = 0; t < 100; ++t) {
    const ControlledForm v = controlled_form(df, dc, rng.complex_gaussian_vector(3));
    CHECK(std::abs(v.imaginary_part) < 1e-12);
  }
}

TEST_CASE("controlled_form equals <H f, f> on commuting instances") {
  const Commuting inst = commuting_instance(3, 4, 4);
  const DenseOperator h = hermitian_part(inst.c * frame_operator(inst.family));
  Rng rng(3, 1);
  for (int t = 0; t < 20; ++t) {
    const Vector x = rng.complex_gaussian_vector(4);
    const ControlledForm v = controlled_form(inst.family, inst.c, x);
    CHECK(std::abs(v.imaginary_part) < 1e-9);
    CHECK(std::abs(v.value - inner(framekit::apply(h, x), x)) < 1e-9);
  }
}

TEST_CASE("certify_controlled_frame") {
  Rng rng(4, 0);
  const FrameFamily parseval = FrameFamily::from_synthesis(random_unitary(3, rng));
  const CertReport a = certify_controlled_frame(parseval, DenseOperator::identity(3));
  CHECK(a.verdict == Verdict::Certified);
  CHECK(a.bounds.lower == doctest::Approx(1.0));
  CHECK(a.bounds.upper == doctest::Approx(1.0));

  const CertReport b = certify_controlled_frame(FrameFamily::standard_basis(2), diag({2, 3}));
  CHECK(b.bounds.lower == doctest::Approx(2.0));
  CHECK(b.bounds.upper == doctest::Approx(3.0));
  CHECK(b.anti_hermitian_residual == 0.0);

  const Commuting inst = commuting_instance(4, 4, 4);
  const CertReport c = certify_controlled_frame(inst.family, inst.c);
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.anti_hermitian_residual < 1e-12);
  for (int t = 0; t < 1000; ++t) {
    const Vector x = rng.complex_gaussian_vector(4);
    const double q = controlled_form(inst.family, inst.c, x).value.real() / std::pow(norm(x), 2);
    CHECK(q >= c.bounds.lower - 1e-9);
    CHECK(q <= c.bounds.upper + 1e-9);
  }
  CHECK_THROWS_AS(certify_controlled_frame(parseval, diag({1, 1, 0})), Error);
}

TEST_CASE("certify_controlled_kframe examples") {
  const FrameFamily std2 = FrameFamily::standard_basis(2);
  const ControlledProblem a(std2, DenseOperator::identity(2), diag({2, 3}));
  const CertReport ra = certify_controlled_kframe(a, 1, 3);
  CHECK(ra.verdict == Verdict::Certified);
  CHECK(std::abs(ra.margin) < 1e-12);

  const ControlledProblem b(real_family(2, {{1, 0}}), diag({1, 0}), diag({4, 1}));
  const CertReport rb = certify_controlled_kframe(b, 1, 4);
  CHECK(rb.verdict == Verdict::Certified);
  CHECK(std::abs(rb.margin) < 1e-12);

  const ControlledProblem nc(std2, real_matrix({{0, 1}, {0, 0}}), diag({1, 2}));
  CHECK_THROWS_AS(certify_controlled_kframe(nc, 1, 1), Error);
  CHECK_THROWS_AS(certify_controlled_kframe(a, 0, 1), Error);
  const ControlledProblem z(std2, DenseOperator::zeros(2, 2), diag({1, 2}));
  CHECK(certify_controlled_kframe(z, 1, 2).verdict == Verdict::Degenerate);
}

TEST_CASE("identity control reproduces the K-frame verdict") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 2);
    const std::size_t d = 2 + seed % 4;
    const FrameFamily f = FrameFamily::from_synthesis(rng.complex_gaussian_matrix(d, d + 1));
    const DenseOperator k = rng.complex_gaussian_matrix(d, d);
    const KFrameProblem kp(f, k);
    const ControlledProblem cp(f, k, DenseOperator::identity(d));
    const FrameBounds fb = optimal_kframe_bounds(kp);
    for (double factor : {0.5, 0.999999, 1.001, 2.0}) {
      const double a = fb.lower * factor;
      if (!(a > 0.0)) continue;
      CHECK(certify_kframe(kp, a, fb.upper).verdict == certify_controlled_kframe(cp, a, fb.upper).verdict);
      CHECK(certify_kframe(kp, a, fb.upper).verdict == controlled_inequality(cp, a).verdict);
    }
  }
}

TEST_CASE("controlled_inequality agrees with the controlled K-frame lower test") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Commuting inst = commuting_instance(seed, 3 + seed % 3, 1 + seed % 3);
    const ControlledProblem p(inst.family, inst.k, inst.c);
    const FrameBounds opt = optimal_controlled_kframe_bounds(p);
    REQUIRE(opt.lower > 0.0);
    CAPTURE(seed);
    CHECK(controlled_inequality(p, 0.5 * opt.lower).verdict == Verdict::Certified);
    CHECK(controlled_inequality(p, opt.lower * (1 - 1e-7)).verdict == Verdict::Certified);
    CHECK(controlled_inequality(p, 2.0 * opt.lower).verdict == Verdict::Refuted);
    // Bisection oracle on the controlled K-frame certificate.
    double lo = 0.0, hi = 4.0 * opt.lower;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (certify_controlled_kframe(p, mid, opt.upper).verdict == Verdict::Certified ? lo : hi) = mid;
    }
    CHECK(lo == doctest::Approx(opt.lower).epsilon(1e-6));
    for (double a : {0.25 * opt.lower, 0.9 * opt.lower, 1.1 * opt.lower, 3.0 * opt.lower}) {
      CHECK(controlled_inequality(p, a).verdict == certify_controlled_kframe(p, a, opt.upper).verdict);
    }
  }
}

TEST_CASE("operator sandwich for certified controlled K-frames") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Commuting inst = commuting_instance(seed, 4, 2 + seed % 3);
    const ControlledProblem p(inst.family, inst.k, inst.c);
    const FrameBounds opt = optimal_controlled_kframe_bounds(p);
    const DenseOperator h = hermitian_part(inst.c * frame_operator(inst.family));
    const DenseOperator g = positive_sqrt(inst.c) * inst.k;
    const double scale = operator_norm(h);
    CHECK(hermitian_spectrum(hermitian_part(h - opt.lower * times_adjoint(g, g))).min() >= -1e-9 * scale);
    CHECK(hermitian_spectrum(hermitian_part(opt.upper * DenseOperator::identity(4) - h)).min() >= -1e-9 * scale);
  }
}

TEST_CASE("bound transfers") {
  const FrameBounds one{1, 1};
  const FrameBounds a = transfer_controlled_to_k(one, DenseOperator::identity(2));
  CHECK(a.lower == doctest::Approx(1.0));
  CHECK(a.upper == doctest::Approx(1.0));
  const FrameBounds b = transfer_controlled_to_k(one, diag({2, 3}));
  CHECK(b.lower == doctest::Approx(1.0 / 3.0));
  CHECK(b.upper == doctest::Approx(0.5));
  CHECK_FALSE(b.lower_optimal);

  const FrameBounds c = transfer_k_to_controlled({1, 2}, DenseOperator::identity(2));
  CHECK(c.lower == doctest::Approx(1.0));
  CHECK(c.upper == doctest::Approx(2.0));
  const FrameBounds d = transfer_k_to_controlled(one, diag({2, 3}));
  CHECK(d.lower == doctest::Approx(1.0));
  CHECK(d.upper == doctest::Approx(3.0));
  CHECK_THROWS_AS(transfer_k_to_controlled(one, diag({1, -2})), Error);
  CHECK_THROWS_AS(transfer_controlled_to_k(one, diag({0, 2})), Error);
}

TEST_CASE("controlled-to-K transfer certifies on commuting instances with C >= I") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GenSpec spec{4, 7, seed, 1.0};
    const CommutingPair pair = commuting_pair(spec, 1 + seed % 4);
    // Shift C so that ||C|| >= 1.
    const DenseOperator c = pair.c + DenseOperator::identity(4);
    Rng rng(seed, 3);
    std::vector<double> s(4);
    for (double& v : s) v = rng.uniform(0.2, 3.0);
    const FrameFamily f = commuting_frame(spec, pair.basis, s);
    const ControlledProblem p(f, pair.k, c);
    const FrameBounds opt = optimal_controlled_kframe_bounds(p);
    const FrameBounds t = transfer_controlled_to_k(opt, c);
    CHECK(certify_kframe(KFrameProblem(f, pair.k), t.lower, t.upper).verdict == Verdict::Certified);
    const FrameBounds back = transfer_k_to_controlled(t, c);
    CHECK(certify_controlled_kframe(p, back.lower, back.upper).verdict == Verdict::Certified);
  }
}

TEST_CASE("controlled-to-K lower transfer fails for a contraction C") {
  // Everything diagonal: S = diag(s), K = diag(k), C = diag(c) with ||C|| < 1.
  // The transferred lower bound A / ||C|| exceeds the optimal K-frame bound.
  const double s0 = 0.3727, k0 = std::sqrt(0.5735), c0 = 0.905, c1 = 0.6;
  const FrameFamily f = real_family(2, {{std::sqrt(s0), 0}, {0, 2.0}});
  const DenseOperator k = diag({k0, 1.0});
  const DenseOperator c = diag({c0, c1});
  const ControlledProblem p(f, k, c);
  const FrameBounds opt = optimal_controlled_kframe_bounds(p);
  const FrameBounds t = transfer_controlled_to_k(opt, c);
  const double true_lower = optimal_kframe_lower(KFrameProblem(f, k));
  CHECK(t.lower > true_lower);
  CHECK(certify_kframe(KFrameProblem(f, k), t.lower, t.upper).verdict == Verdict::Refuted);
}
