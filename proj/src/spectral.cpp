#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "framekit/error.hpp"
#include "framekit/kernels.hpp"
#include "framekit/operator.hpp"

namespace framekit {

namespace {

constexpr int kMaxSweeps = 100;

struct Rotation {
  double c;
  double s;
  cplx phase;  // a_pq / |a_pq|
};

// Unitary J with J_pp = J_qq = c, J_pq = s*phase, J_qp = -s*conj(phase) that
// zeroes the (p, q) entry of J* A J for the Hermitian 2x2 block
// [[app, apq], [conj(apq), aqq]].
Rotation jacobi_rotation(double app, double aqq, cplx apq) {
  const double mag = std::abs(apq);
  const double theta = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, apq / mag};
}

}  // namespace

Spectrum hermitian_spectrum(const DenseOperator& m, const Tolerance& tol) {
  if (!m.square()) throw Error(ErrorCode::NotHermitian, "hermitian_spectrum: operator is not square");
  const std::size_t n = m.rows();
  const double fro = frobenius_norm(m);
  const double asym = 2.0 * frobenius_norm(anti_hermitian_part(m));
  if (asym > tol.rel_eps * fro) {
    throw Error(ErrorCode::NotHermitian,
                "||M - M*|| = " + std::to_string(asym) + " exceeds rel_eps * ||M|| = " + std::to_string(tol.rel_eps * fro));
  }

  const auto& ker = kernels::active();
  const DenseOperator h = hermitian_part(m);
  std::vector<cplx> a(h.entries().begin(), h.entries().end());
  std::vector<cplx> vt(n * n);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double g = 100.0 * mag;
        if (std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
          a[p * n + q] = a[q * n + p] = 0.0;
          continue;
        }
        const Rotation r = jacobi_rotation(app, aqq, apq);
        const cplx sp = r.s * r.phase;
        const cplx sc = r.s * std::conj(r.phase);
        // rows: A <- J* A
        ker.rot2(r.c, -sp, sc, r.c, a.data() + p * n, a.data() + q * n, n);
        // columns: A <- A J
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a[k * n + p];
          const cplx akq = a[k * n + q];
          a[k * n + p] = r.c * akp - sc * akq;
          a[k * n + q] = sp * akp + r.c * akq;
        }
        a[p * n + q] = a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
        // eigenvectors: V <- V J, stored transposed so the update is a row op
        ker.rot2(r.c, -sc, sp, r.c, vt.data() + p * n, vt.data() + q * n, n);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * n + x].real() < a[y * n + y].real(); });
  Spectrum out;
  out.eigenvalues.resize(n);
  std::vector<cplx> basis(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) basis[i * n + k] = vt[order[k] * n + i];
  }
  out.basis = DenseOperator(n, n, std::move(basis));
  return out;
}

SingularValues singular_values(const DenseOperator& m) {
  if (m.cols() > m.rows()) {
    SingularValues t = singular_values(adjoint(m));
    return {std::move(t.values), std::move(t.v), std::move(t.u)};
  }
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  const auto& ker = kernels::active();

  // x holds the columns of M as contiguous rows; column rotations of M become
  // row rotations of x.
  std::vector<cplx> x(n * rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < n; ++j) x[j * rows + i] = m(i, j);
  std::vector<cplx> vt(n * n);
  for (std::size_t i = 0; i < n; ++i) vt[i * n + i] = 1.0;

  constexpr double kOrthEps = 1e-15;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        cplx* xi = x.data() + i * rows;
        cplx* xj = x.data() + j * rows;
        const double alpha = ker.norm2(xi, rows);
        const double beta = ker.norm2(xj, rows);
        if (alpha == 0.0 || beta == 0.0) continue;
        const cplx gamma = ker.dotc(xi, xj, rows);
        const double mag = std::abs(gamma);
        if (mag <= kOrthEps * std::sqrt(alpha) * std::sqrt(beta)) continue;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        const cplx sp = r.s * r.phase;
        const cplx sc = r.s * std::conj(r.phase);
        ker.rot2(r.c, -sc, sp, r.c, xi, xj, rows);
        ker.rot2(r.c, -sc, sp, r.c, vt.data() + i * n, vt.data() + j * n, n);
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(ker.norm2(x.data() + j * rows, rows));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) { return sigma[p] > sigma[q]; });

  SingularValues out;
  out.values.resize(n);
  std::vector<cplx> u(rows * n);
  std::vector<cplx> v(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.values[k] = sigma[j];
    if (sigma[j] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) u[i * n + k] = x[j * rows + i] / sigma[j];
      for (std::size_t i = 0; i < n; ++i) v[i * n + k] = vt[j * n + i];
    }
  }
  out.u = DenseOperator(rows, n, std::move(u));
  out.v = DenseOperator(n, n, std::move(v));
  return out;
}

double operator_norm(const DenseOperator& m) {
  if (m.empty()) return 0.0;
  return singular_values(m).values.front();
}

DenseOperator pseudo_inverse(const DenseOperator& m, const Tolerance& tol) {
  if (m.empty()) return DenseOperator::zeros(m.cols(), m.rows());
  const SingularValues svd = singular_values(m);
  const std::size_t r = svd.rank(tol.rank_eps);
  std::vector<cplx> vs(m.cols() * r);
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t k = 0; k < r; ++k) vs[i * r + k] = svd.v(i, k) / svd.values[k];
  return times_adjoint(DenseOperator(m.cols(), r, std::move(vs)), select_columns(svd.u, 0, r));
}

DenseOperator positive_sqrt(const DenseOperator& m, const Tolerance& tol) {
  const Spectrum sp = hermitian_spectrum(m, tol);
  const std::size_t n = m.rows();
  if (n == 0) return m;
  const double scale = std::max(std::abs(sp.min()), std::abs(sp.max()));
  if (sp.min() < -tol.rel_eps * scale) {
    throw Error(ErrorCode::NotPSD, "min eigenvalue " + std::to_string(sp.min()) + " below -rel_eps*||M||");
  }
  std::vector<cplx> vr(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) vr[i * n + k] = sp.basis(i, k) * std::sqrt(std::max(sp.eigenvalues[k], 0.0));
  return hermitian_part(times_adjoint(DenseOperator(n, n, std::move(vr)), sp.basis));
}

DenseOperator range_basis(const DenseOperator& m, const Tolerance& tol) {
  if (m.empty()) return DenseOperator::zeros(m.rows(), 0);
  const SingularValues svd = singular_values(m);
  return select_columns(svd.u, 0, svd.rank(tol.rank_eps));
}

DenseOperator range_projector(const DenseOperator& m, const Tolerance& tol) {
  const DenseOperator b = range_basis(m, tol);
  return hermitian_part(times_adjoint(b, b));
}

double pencil_lower_bound(const DenseOperator& h, const DenseOperator& g, const Tolerance& tol) {
  if (!h.square() || g.rows() != h.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "pencil_lower_bound: G must have as many rows as H");
  }
  const double gnorm = frobenius_norm(g);
  if (gnorm == 0.0) throw Error(ErrorCode::InvalidArgument, "pencil_lower_bound: G is zero");

  const Spectrum sp = hermitian_spectrum(h, tol);
  const std::size_t n = h.rows();
  const double scale = std::max(std::abs(sp.min()), std::abs(sp.max()));
  if (scale == 0.0 || sp.min() < -tol.rel_eps * scale) return 0.0;

  // Split the eigenbasis into R(H) and its complement.
  std::size_t first_range = 0;
  while (first_range < n && sp.eigenvalues[first_range] <= tol.rank_eps * scale) ++first_range;
  const std::size_t r = n - first_range;

  const DenseOperator coords = adjoint_times(sp.basis, g);  // V* G
  double leak2 = 0.0;
  for (std::size_t i = 0; i < first_range; ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) leak2 += std::norm(coords(i, j));
  // A component of R(G) outside R(H) forces the bound to zero. Leakage at the
  // sqrt(rel_eps) level is numerical noise: it moves the pencil by
  // O(rel_eps) and stays inside the PSD test's slack.
  if (std::sqrt(leak2) > std::sqrt(tol.rel_eps) * gnorm) return 0.0;

  std::vector<cplx> z(r * g.cols());
  for (std::size_t i = 0; i < r; ++i) {
    const double w = 1.0 / std::sqrt(sp.eigenvalues[first_range + i]);
    for (std::size_t j = 0; j < g.cols(); ++j) z[i * g.cols() + j] = w * coords(first_range + i, j);
  }
  const double top = operator_norm(DenseOperator(r, g.cols(), std::move(z)));
  if (top == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (top * top);
}

}  // namespace framekit
