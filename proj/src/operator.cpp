#include "framekit/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "framekit/error.hpp"
#include "framekit/kernels.hpp"

namespace framekit {

namespace {

const kernels::KernelTable& K() { return kernels::active(); }

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::BadBounds: return "BadBounds";
    case ErrorCode::ZeroK: return "ZeroK";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::CommutationViolated: return "CommutationViolated";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ConditionFailed: return "ConditionFailed";
    case ErrorCode::DegenerateProjector: return "DegenerateProjector";
    case ErrorCode::SpanCollapse: return "SpanCollapse";
    case ErrorCode::DegenerateDraw: return "DegenerateDraw";
    case ErrorCode::BadRank: return "BadRank";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1e-2; };
  require(ok(rel_eps), ErrorCode::InvalidArgument, "rel_eps must lie in (0, 1e-2)");
  require(ok(rank_eps), ErrorCode::InvalidArgument, "rank_eps must lie in (0, 1e-2)");
}

Tolerance Tolerance::from_environment() {
  Tolerance tol;
  if (const char* env = std::getenv("FRAMEKIT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    require(end != env && *end == '\0', ErrorCode::InvalidArgument, "FRAMEKIT_TOL is not a number");
    tol.rel_eps = v;
    tol.validate();
  }
  return tol;
}

// --- DenseOperator ----------------------------------------------------------

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows_ * cols_, ErrorCode::DimensionMismatch,
          "entries length " + std::to_string(data_.size()) + " != rows*cols " + std::to_string(rows_ * cols_));
  for (const cplx& z : data_) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), ErrorCode::InvalidArgument,
            "operator entries must be finite");
  }
}

DenseOperator DenseOperator::zeros(std::size_t rows, std::size_t cols) {
  return DenseOperator(rows, cols, std::vector<cplx>(rows * cols));
}

DenseOperator DenseOperator::identity(std::size_t n) {
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
  return DenseOperator(n, n, std::move(e));
}

DenseOperator DenseOperator::diagonal(std::span<const cplx> diag) {
  const std::size_t n = diag.size();
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i) e[i * n + i] = diag[i];
  return DenseOperator(n, n, std::move(e));
}

DenseOperator DenseOperator::diagonal(std::span<const double> diag) {
  std::vector<cplx> d(diag.begin(), diag.end());
  return diagonal(std::span<const cplx>(d));
}

DenseOperator DenseOperator::from_rows(const std::vector<std::vector<cplx>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<cplx> e;
  e.reserve(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    require(rows[i].size() == c, ErrorCode::DimensionMismatch,
            "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) + " entries, expected " +
                std::to_string(c));
    e.insert(e.end(), rows[i].begin(), rows[i].end());
  }
  return DenseOperator(r, c, std::move(e));
}

DenseOperator DenseOperator::column(std::span<const cplx> v) {
  return DenseOperator(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

Vector DenseOperator::col(std::size_t j) const {
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = data_[i * cols_ + j];
  return out;
}

std::size_t SingularValues::rank(double rank_eps) const {
  if (values.empty() || values.front() <= 0.0) return 0;
  const double cut = rank_eps * values.front();
  return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double s) { return s > cut; }));
}

// --- arithmetic -------------------------------------------------------------

DenseOperator adjoint(const DenseOperator& m) {
  std::vector<cplx> e(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e[j * m.rows() + i] = std::conj(m(i, j));
  return DenseOperator(m.cols(), m.rows(), std::move(e));
}

namespace {

template <class Op>
DenseOperator zip(const DenseOperator& a, const DenseOperator& b, Op op, const char* what) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::DimensionMismatch,
          std::string(what) + ": operand shapes differ");
  std::vector<cplx> e(a.entries().begin(), a.entries().end());
  const auto rhs = b.entries();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = op(e[i], rhs[i]);
  return DenseOperator(a.rows(), a.cols(), std::move(e));
}

}  // namespace

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  return zip(a, b, [](cplx x, cplx y) { return x + y; }, "operator+");
}

DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) {
  return zip(a, b, [](cplx x, cplx y) { return x - y; }, "operator-");
}

DenseOperator operator*(cplx s, const DenseOperator& a) {
  std::vector<cplx> e(a.entries().begin(), a.entries().end());
  K().scal(s, e.data(), e.size());
  return DenseOperator(a.rows(), a.cols(), std::move(e));
}

DenseOperator operator*(double s, const DenseOperator& a) {
  std::vector<cplx> e(a.entries().begin(), a.entries().end());
  for (cplx& z : e) z *= s;
  return DenseOperator(a.rows(), a.cols(), std::move(e));
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch, "product: inner dimensions differ");
  const std::size_t n = b.cols();
  std::vector<cplx> e(a.rows() * n);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* out = e.data() + i * n;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik != cplx{}) K().axpy(aik, b.row(k).data(), out, n);
    }
  }
  return DenseOperator(a.rows(), n, std::move(e));
}

DenseOperator adjoint_times(const DenseOperator& a, const DenseOperator& b) {
  require(a.rows() == b.rows(), ErrorCode::DimensionMismatch, "adjoint_times: row counts differ");
  const std::size_t n = b.cols();
  std::vector<cplx> e(a.cols() * n);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto brow = b.row(k).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const cplx aki = std::conj(a(k, i));
      if (aki != cplx{}) K().axpy(aki, brow, e.data() + i * n, n);
    }
  }
  return DenseOperator(a.cols(), n, std::move(e));
}

DenseOperator times_adjoint(const DenseOperator& a, const DenseOperator& b) {
  require(a.cols() == b.cols(), ErrorCode::DimensionMismatch, "times_adjoint: column counts differ");
  std::vector<cplx> e(a.rows() * b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j)
      e[i * b.rows() + j] = std::conj(K().dotc(a.row(i).data(), b.row(j).data(), a.cols()));
  return DenseOperator(a.rows(), b.rows(), std::move(e));
}

Vector apply(const DenseOperator& m, std::span<const cplx> x) {
  require(x.size() == m.cols(), ErrorCode::DimensionMismatch, "apply: vector length differs from column count");
  Vector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = K().dotu(m.row(i).data(), x.data(), m.cols());
  return y;
}

Vector apply_adjoint(const DenseOperator& m, std::span<const cplx> x) {
  require(x.size() == m.rows(), ErrorCode::DimensionMismatch, "apply_adjoint: vector length differs from row count");
  Vector y(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    cplx s{};
    for (std::size_t k = 0; k < m.rows(); ++k) s += std::conj(m(k, j)) * x[k];
    y[j] = s;
  }
  return y;
}

DenseOperator hermitian_part(const DenseOperator& m) {
  require(m.square(), ErrorCode::DimensionMismatch, "hermitian_part: operator not square");
  const std::size_t n = m.rows();
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i * n + i] = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      e[i * n + j] = h;
      e[j * n + i] = std::conj(h);
    }
  }
  return DenseOperator(n, n, std::move(e));
}

DenseOperator anti_hermitian_part(const DenseOperator& m) {
  require(m.square(), ErrorCode::DimensionMismatch, "anti_hermitian_part: operator not square");
  const std::size_t n = m.rows();
  std::vector<cplx> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    e[i * n + i] = cplx(0.0, m(i, i).imag());
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx a = 0.5 * (m(i, j) - std::conj(m(j, i)));
      e[i * n + j] = a;
      e[j * n + i] = -std::conj(a);
    }
  }
  return DenseOperator(n, n, std::move(e));
}

DenseOperator select_columns(const DenseOperator& m, std::size_t first, std::size_t count) {
  require(first + count <= m.cols(), ErrorCode::DimensionMismatch, "select_columns: range exceeds column count");
  std::vector<cplx> e(m.rows() * count);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) e[i * count + j] = m(i, first + j);
  return DenseOperator(m.rows(), count, std::move(e));
}

double frobenius_norm(const DenseOperator& m) { return std::sqrt(K().norm2(m.entries().data(), m.entries().size())); }

double max_abs_entry(const DenseOperator& m) {
  double best = 0.0;
  for (const cplx& z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

// --- vectors ----------------------------------------------------------------

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  require(x.size() == y.size(), ErrorCode::DimensionMismatch, "inner: lengths differ");
  return K().dotc(y.data(), x.data(), x.size());
}

double norm(std::span<const cplx> x) { return std::sqrt(K().norm2(x.data(), x.size())); }

Vector operator-(std::span<const cplx> a, std::span<const cplx> b) {
  require(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector difference: lengths differ");
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Vector scaled(cplx s, std::span<const cplx> x) {
  Vector out(x.begin(), x.end());
  K().scal(s, out.data(), out.size());
  return out;
}

}  // namespace framekit
