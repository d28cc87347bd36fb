#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "framekit/controlled.hpp"
#include "framekit/frame.hpp"
#include "framekit/generators.hpp"
#include "framekit/kframe.hpp"
#include "framekit/operator.hpp"

namespace fk_test {

using namespace framekit;

inline DenseOperator real_matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<std::vector<cplx>> c;
  for (const auto& r : rows) c.emplace_back(r.begin(), r.end());
  return DenseOperator::from_rows(c);
}

inline DenseOperator diag(std::vector<double> d) { return DenseOperator::diagonal(std::span<const double>(d)); }

inline Vector real_vector(std::vector<double> v) { return Vector(v.begin(), v.end()); }

inline Vector unit(std::size_t d, std::size_t i) {
  Vector v(d);
  v[i] = 1.0;
  return v;
}

/// Family from real vectors.
inline FrameFamily real_family(std::size_t d, const std::vector<std::vector<double>>& vs) {
  std::vector<Vector> out;
  for (const auto& v : vs) out.push_back(real_vector(v));
  return FrameFamily(d, out);
}

inline double max_diff(const DenseOperator& a, const DenseOperator& b) { return max_abs_entry(a - b); }

inline double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline Eigen::MatrixXcd to_eigen(const DenseOperator& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline DenseOperator random_hermitian(std::size_t d, Rng& rng) {
  return hermitian_part(rng.complex_gaussian_matrix(d, d));
}

/// Hermitian PSD matrix Q diag(values) Q* for a random unitary Q.
inline DenseOperator with_spectrum(const std::vector<double>& values, Rng& rng) {
  const DenseOperator q = random_unitary(values.size(), rng);
  return hermitian_part(q * DenseOperator::diagonal(std::span<const double>(values)) * adjoint(q));
}

/// Sum |<f, f_i>|^2 / ||f||^2 computed directly from the vectors.
inline double rayleigh(const FrameFamily& fam, std::span<const cplx> f) {
  double s = 0.0;
  for (const Vector& v : fam.vectors()) s += std::norm(inner(f, v));
  const double n = norm(f);
  return s / (n * n);
}

}  // namespace fk_test
