#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "framekit/tolerance.hpp"

namespace framekit {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

/// Dense complex matrix acting on C^cols -> C^rows, row-major.
///
/// Immutable once built: every operation returns a new value. Construction
/// rejects non-finite entries and size mismatches.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static DenseOperator zeros(std::size_t rows, std::size_t cols);
  static DenseOperator identity(std::size_t n);
  static DenseOperator diagonal(std::span<const cplx> diag);
  static DenseOperator diagonal(std::span<const double> diag);
  /// Builds from nested rows; every row must have the same length.
  static DenseOperator from_rows(const std::vector<std::vector<cplx>>& rows);
  /// d x 1 operator holding a vector.
  static DenseOperator column(std::span<const cplx> v);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector col(std::size_t j) const;
  std::span<const cplx> entries() const noexcept { return data_; }

  friend bool operator==(const DenseOperator&, const DenseOperator&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Real eigenvalues ascending with an orthonormal eigenbasis (columns).
struct Spectrum {
  std::vector<double> eigenvalues;
  DenseOperator basis;

  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }
  Vector eigenvector(std::size_t k) const { return basis.col(k); }
};

/// Thin singular value decomposition M = U diag(values) V*.
///
/// `values` are descending with min(rows, cols) entries. Columns of U and V
/// that belong to exactly-zero singular values are zero vectors.
struct SingularValues {
  std::vector<double> values;
  DenseOperator u;
  DenseOperator v;

  /// Number of singular values above rank_eps * sigma_max.
  std::size_t rank(double rank_eps) const;
};

// --- arithmetic -------------------------------------------------------------

DenseOperator adjoint(const DenseOperator& m);
DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator-(const DenseOperator& a, const DenseOperator& b);
DenseOperator operator*(cplx s, const DenseOperator& a);
DenseOperator operator*(double s, const DenseOperator& a);
/// a * b
DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
/// a* * b without materialising a*.
DenseOperator adjoint_times(const DenseOperator& a, const DenseOperator& b);
/// a * b* without materialising b*.
DenseOperator times_adjoint(const DenseOperator& a, const DenseOperator& b);
/// m x. Call as framekit::apply when x is a Vector: unqualified calls also
/// find std::apply through argument-dependent lookup.
Vector apply(const DenseOperator& m, std::span<const cplx> x);
/// m* x
Vector apply_adjoint(const DenseOperator& m, std::span<const cplx> x);
/// (m + m*) / 2
DenseOperator hermitian_part(const DenseOperator& m);
/// (m - m*) / 2
DenseOperator anti_hermitian_part(const DenseOperator& m);
DenseOperator select_columns(const DenseOperator& m, std::size_t first, std::size_t count);

double frobenius_norm(const DenseOperator& m);
double max_abs_entry(const DenseOperator& m);

// --- vectors ----------------------------------------------------------------

/// <x, y> = sum x_i conj(y_i), linear in the first slot.
cplx inner(std::span<const cplx> x, std::span<const cplx> y);
double norm(std::span<const cplx> x);
Vector operator-(std::span<const cplx> a, std::span<const cplx> b);
Vector scaled(cplx s, std::span<const cplx> x);

// --- spectral kernel --------------------------------------------------------

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi.
/// Throws NotHermitian when ||M - M*||_F > rel_eps * ||M||_F.
Spectrum hermitian_spectrum(const DenseOperator& m, const Tolerance& tol = {});

/// One-sided (Hestenes) Jacobi SVD.
SingularValues singular_values(const DenseOperator& m);

/// Largest singular value.
double operator_norm(const DenseOperator& m);

/// Moore-Penrose inverse; singular values below rank_eps * sigma_max are zero.
DenseOperator pseudo_inverse(const DenseOperator& m, const Tolerance& tol = {});

/// Unique PSD square root. Eigenvalues in [-rel_eps*||M||, 0) are clamped;
/// anything more negative throws NotPSD.
DenseOperator positive_sqrt(const DenseOperator& m, const Tolerance& tol = {});

/// Orthonormal basis (columns) of R(M) under the rank_eps rule.
DenseOperator range_basis(const DenseOperator& m, const Tolerance& tol = {});

/// Orthogonal projector onto R(M).
DenseOperator range_projector(const DenseOperator& m, const Tolerance& tol = {});

/// Largest a >= 0 with H - a * G G* positive semidefinite (to tolerance).
///
/// Returns 0 when H is not PSD or when R(G) leaves R(H). When R(G) sits inside
/// R(H) the supremum is 1 / lambda_max(G* H^+ G). G must have H.rows() rows
/// and be nonzero.
double pencil_lower_bound(const DenseOperator& h, const DenseOperator& g, const Tolerance& tol = {});

}  // namespace framekit
