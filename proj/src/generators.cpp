#include "framekit/generators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "framekit/error.hpp"

namespace framekit {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

cplx Rng::complex_gaussian() {
  const double re = normal();
  const double im = normal();
  return cplx(re, im) * std::numbers::sqrt2 * 0.5;
}

Vector Rng::complex_gaussian_vector(std::size_t n) {
  Vector v(n);
  for (cplx& z : v) z = complex_gaussian();
  return v;
}

DenseOperator Rng::complex_gaussian_matrix(std::size_t rows, std::size_t cols) {
  return DenseOperator(rows, cols, complex_gaussian_vector(rows * cols));
}

void GenSpec::validate() const {
  if (dim < 1 || dim > 64) throw Error(ErrorCode::InvalidArgument, "dim must lie in [1, 64]");
  if (count < 1 || count > 256) throw Error(ErrorCode::InvalidArgument, "count must lie in [1, 256]");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
}

FrameFamily random_frame(const GenSpec& spec) {
  spec.validate();
  for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
    Rng rng(spec.seed, streams::kFrame + (attempt << 32));
    std::vector<Vector> v(spec.count);
    for (Vector& f : v) {
      f = rng.complex_gaussian_vector(spec.dim);
      for (cplx& z : f) z *= spec.scale;
    }
    FrameFamily fam(spec.dim, std::move(v));
    if (spec.count < spec.dim || is_frame(optimal_frame_bounds(fam))) return fam;
  }
  throw Error(ErrorCode::DegenerateDraw, "random_frame: no frame after 3 redraws (seed " + std::to_string(spec.seed) + ")");
}

DenseOperator random_unitary(std::size_t dim, Rng& rng) {
  // Modified Gram-Schmidt on the columns, applied twice for orthogonality.
  const DenseOperator g = rng.complex_gaussian_matrix(dim, dim);
  std::vector<Vector> cols(dim);
  for (std::size_t j = 0; j < dim; ++j) cols[j] = g.col(j);
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        const cplx proj = inner(cols[j], cols[i]);
        for (std::size_t k = 0; k < dim; ++k) cols[j][k] -= proj * cols[i][k];
      }
    }
    const double nj = norm(cols[j]);
    for (cplx& z : cols[j]) z /= nj;
  }
  std::vector<cplx> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) e[i * dim + j] = cols[j][i];
  return DenseOperator(dim, dim, std::move(e));
}

namespace {

DenseOperator conjugate_diagonal(const DenseOperator& u, std::span<const cplx> diag) {
  const std::size_t n = u.rows();
  std::vector<cplx> ud(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) ud[i * n + k] = u(i, k) * diag[k];
  return times_adjoint(DenseOperator(n, n, std::move(ud)), u);
}

}  // namespace

CommutingPair commuting_pair(const GenSpec& spec, std::size_t rank_k) {
  spec.validate();
  if (rank_k > spec.dim) {
    throw Error(ErrorCode::BadRank, "rank of K (" + std::to_string(rank_k) + ") exceeds dim " + std::to_string(spec.dim));
  }
  Rng urng(spec.seed, streams::kUnitary);
  Rng krng(spec.seed, streams::kKSpectrum);
  Rng crng(spec.seed, streams::kCSpectrum);

  CommutingPair out;
  out.basis = random_unitary(spec.dim, urng);
  out.k_diagonal.assign(spec.dim, cplx{});
  out.c_diagonal.resize(spec.dim);
  for (std::size_t i = 0; i < rank_k; ++i) {
    const double mod = krng.uniform(0.5, 2.0);
    const double phase = krng.uniform(0.0, 2.0 * std::numbers::pi);
    out.k_diagonal[i] = std::polar(mod, phase);
  }
  for (double& c : out.c_diagonal) c = crng.uniform(0.5, 2.0) * spec.scale;
  const std::vector<cplx> c_cplx(out.c_diagonal.begin(), out.c_diagonal.end());
  out.k = conjugate_diagonal(out.basis, out.k_diagonal);
  out.c = hermitian_part(conjugate_diagonal(out.basis, c_cplx));
  return out;
}

FrameFamily commuting_frame(const GenSpec& spec, const DenseOperator& basis, std::span<const double> spectrum) {
  spec.validate();
  if (spec.count < spec.dim) throw Error(ErrorCode::InvalidArgument, "commuting_frame needs count >= dim");
  if (basis.rows() != spec.dim || !basis.square() || spectrum.size() != spec.dim) {
    throw Error(ErrorCode::DimensionMismatch, "commuting_frame: basis/spectrum size differs from dim");
  }
  // Parseval frame from a Gaussian draw, then shaped: T = U diag(sqrt(s)) U* S0^{-1/2} T0.
  const FrameFamily raw = random_frame(spec);
  const DenseOperator t0 = synthesis(raw);
  const Spectrum s0 = hermitian_spectrum(frame_operator(raw));
  const std::size_t d = spec.dim;
  std::vector<cplx> w(d), root(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = 1.0 / std::sqrt(s0.eigenvalues[i]);
  for (std::size_t i = 0; i < d; ++i) {
    if (spectrum[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "commuting_frame: spectrum must be nonnegative");
    root[i] = std::sqrt(spectrum[i]);
  }
  const DenseOperator whiten = conjugate_diagonal(s0.basis, w);
  const DenseOperator shape = conjugate_diagonal(basis, root);
  return FrameFamily::from_synthesis(shape * (whiten * t0));
}

PerturbedFamily perturb_family(const FrameFamily& f, double magnitude, std::uint64_t seed) {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw Error(ErrorCode::InvalidArgument, "perturbation magnitude must be finite and >= 0");
  }
  Rng rng(seed, streams::kPerturbation);
  const DenseOperator dir = rng.complex_gaussian_matrix(f.dim(), f.count());
  const double dn = operator_norm(dir);
  const DenseOperator tf = synthesis(f);
  const DenseOperator tg = tf - (magnitude / dn) * dir;
  return {FrameFamily::from_synthesis(tg), operator_norm(tf - tg)};
}

FrameFamily ill_conditioned_frame(const GenSpec& spec, double min_kappa) {
  spec.validate();
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    GenSpec draw = spec;
    draw.seed = spec.seed + (attempt << 40);
    const DenseOperator t0 = synthesis(random_frame(draw));
    Rng rng(draw.seed, streams::kScaling);
    std::vector<cplx> rows(spec.dim);
    for (std::size_t i = 0; i < spec.dim; ++i) rows[i] = std::pow(10.0, 2.0 * rng.uniform());
    if (spec.dim >= 2) {
      rows[0] = 1.0;
      rows[1] = 100.0;
    }
    FrameFamily fam = FrameFamily::from_synthesis(DenseOperator::diagonal(rows) * t0);
    const FrameBounds b = optimal_frame_bounds(fam);
    if (is_frame(b) && b.upper / b.lower >= min_kappa) return fam;
  }
  throw Error(ErrorCode::DegenerateDraw, "ill_conditioned_frame: condition target not reached");
}

}  // namespace framekit
