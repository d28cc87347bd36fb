// Compiled with -mavx2 -mfma; only reached after a cpuid check.
#include <immintrin.h>

#include "framekit/kernels.hpp"

namespace framekit::kernels::detail {
namespace {

// One __m256d holds two complex numbers laid out [re0, im0, re1, im1].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_ri(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// alpha * v for a broadcast complex alpha.
inline __m256d cmul(__m256d v, __m256d alpha_re, __m256d alpha_im) {
  return _mm256_fmaddsub_pd(alpha_re, v, _mm256_mul_pd(alpha_im, swap_ri(v)));
}

inline double hsum_even(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[0] + t[2];
}

inline double hsum_odd(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return t[1] + t[3];
}

inline double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

cplx dotc(const cplx* a, const cplx* b, std::size_t n) {
  // re = sum ar*br + ai*bi ; im = sum ar*bi - ai*br
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, swap_ri(vb), acc_im);
  }
  double re = hsum(acc_re);
  double im = hsum_even(acc_im) - hsum_odd(acc_im);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

cplx dotu(const cplx* a, const cplx* b, std::size_t n) {
  // re = sum ar*br - ai*bi ; im = sum ar*bi + ai*br
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, swap_ri(vb), acc_im);
  }
  double re = hsum_even(acc_re) - hsum_odd(acc_re);
  double im = hsum(acc_im);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

double norm2(const cplx* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

void axpy(cplx alpha, const cplx* x, cplx* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    store2(y + i, _mm256_add_pd(load2(y + i), cmul(load2(x + i), ar, ai)));
  }
  for (; i < n; ++i) {
    y[i] += cplx(alpha.real() * x[i].real() - alpha.imag() * x[i].imag(),
                 alpha.real() * x[i].imag() + alpha.imag() * x[i].real());
  }
}

void scal(cplx alpha, cplx* x, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store2(x + i, cmul(load2(x + i), ar, ai));
  for (; i < n; ++i) {
    x[i] = cplx(alpha.real() * x[i].real() - alpha.imag() * x[i].imag(),
                alpha.real() * x[i].imag() + alpha.imag() * x[i].real());
  }
}

void rot2(cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y, std::size_t n) {
  const __m256d a_re = _mm256_set1_pd(a.real()), a_im = _mm256_set1_pd(a.imag());
  const __m256d b_re = _mm256_set1_pd(b.real()), b_im = _mm256_set1_pd(b.imag());
  const __m256d c_re = _mm256_set1_pd(c.real()), c_im = _mm256_set1_pd(c.imag());
  const __m256d d_re = _mm256_set1_pd(d.real()), d_im = _mm256_set1_pd(d.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    const __m256d vy = load2(y + i);
    store2(x + i, _mm256_add_pd(cmul(vx, a_re, a_im), cmul(vy, b_re, b_im)));
    store2(y + i, _mm256_add_pd(cmul(vx, c_re, c_im), cmul(vy, d_re, d_im)));
  }
  auto mul = [](cplx p, cplx q) {
    return cplx(p.real() * q.real() - p.imag() * q.imag(), p.real() * q.imag() + p.imag() * q.real());
  };
  for (; i < n; ++i) {
    const cplx xi = x[i];
    const cplx yi = y[i];
    x[i] = mul(a, xi) + mul(b, yi);
    y[i] = mul(c, xi) + mul(d, yi);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::Avx2, dotc, dotu, norm2, axpy, scal, rot2};
  return t;
}

}  // namespace framekit::kernels::detail
