#pragma once

#include <cstdint>
#include <random>

#include "framekit/frame.hpp"

namespace framekit {

/// Seeded random stream.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The engine is seeded with splitmix64(seed ^ splitmix64(stream)),
/// so every (seed, stream) pair is an independent reproducible stream.
/// Distributions are computed here from raw 64-bit draws (53-bit uniforms,
/// Box-Muller normals) because the std:: distributions are not portable across
/// standard-library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Circular complex Gaussian with E|z|^2 = 1.
  cplx complex_gaussian();
  Vector complex_gaussian_vector(std::size_t n);
  DenseOperator complex_gaussian_matrix(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Named streams so that different objects drawn from one seed never share
/// random numbers.
namespace streams {
inline constexpr std::uint64_t kFrame = 1;
inline constexpr std::uint64_t kUnitary = 2;
inline constexpr std::uint64_t kKSpectrum = 3;
inline constexpr std::uint64_t kCSpectrum = 4;
inline constexpr std::uint64_t kPerturbation = 5;
inline constexpr std::uint64_t kScaling = 6;
inline constexpr std::uint64_t kSampling = 7;
}  // namespace streams

struct GenSpec {
  std::size_t dim = 2;
  std::size_t count = 2;
  std::uint64_t seed = 0;
  double scale = 1.0;

  /// dim in [1, 64], count in [1, 256], scale > 0; else InvalidArgument.
  void validate() const;
};

/// n vectors with i.i.d. complex Gaussian entries times `scale`. For n >= d
/// the draw is checked to be a frame and redrawn (at most 3 times) otherwise;
/// a fourth failure throws DegenerateDraw.
FrameFamily random_frame(const GenSpec& spec);

/// Haar-distributed unitary: Gram-Schmidt on the columns of a complex
/// Gaussian matrix.
DenseOperator random_unitary(std::size_t dim, Rng& rng);

struct CommutingPair {
  DenseOperator k;
  DenseOperator c;
  /// Shared eigenbasis U: K = U diag(k) U*, C = U diag(c) U*.
  DenseOperator basis;
  std::vector<cplx> k_diagonal;
  std::vector<double> c_diagonal;
};

/// K with exactly rank_k nonzero eigenvalues (moduli in [0.5, 2], uniform
/// phase) and C with eigenvalues in [0.5 scale, 2 scale], jointly diagonal.
/// Throws BadRank unless rank_k <= dim.
CommutingPair commuting_pair(const GenSpec& spec, std::size_t rank_k);

/// Family of `count` vectors whose frame operator is U diag(spectrum) U*, so
/// it commutes with every operator diagonal in U. Needs count >= dim.
FrameFamily commuting_frame(const GenSpec& spec, const DenseOperator& basis, std::span<const double> spectrum);

struct PerturbedFamily {
  FrameFamily family;
  /// ||T_F - T_G|| measured after construction.
  double e_norm = 0.0;
};

/// G with T_G = T_F - magnitude * D for a seeded direction D, ||D|| = 1.
PerturbedFamily perturb_family(const FrameFamily& f, double magnitude, std::uint64_t seed);

/// Gaussian family with rows rescaled by factors spread over two decades, so
/// the frame operator is badly conditioned but close to diagonally scaled.
/// Redrawn until kappa(S) >= min_kappa (at most 8 draws, else DegenerateDraw).
FrameFamily ill_conditioned_frame(const GenSpec& spec, double min_kappa);

}  // namespace framekit
