#pragma once

// Complex level-1 kernels underneath every matrix product, rotation and norm
// in the library. Each kernel exists as a scalar reference implementation and,
// on x86-64, an AVX2+FMA variant; the active table is chosen once at startup
// from cpuid and can be pinned to the scalar path with FRAMEKIT_KERNEL=scalar.
//
// The variants agree to rounding, not bit-for-bit: the SIMD versions sum in a
// different order and fuse multiply-adds.

#include <complex>
#include <cstddef>
#include <string_view>

namespace framekit::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  /// sum_i conj(a_i) * b_i
  cplx (*dotc)(const cplx* a, const cplx* b, std::size_t n);
  /// sum_i a_i * b_i
  cplx (*dotu)(const cplx* a, const cplx* b, std::size_t n);
  /// sum_i |x_i|^2
  double (*norm2)(const cplx* x, std::size_t n);
  /// y += alpha * x
  void (*axpy)(cplx alpha, const cplx* x, cplx* y, std::size_t n);
  /// x *= alpha
  void (*scal)(cplx alpha, cplx* x, std::size_t n);
  /// (x, y) <- (a*x + b*y, c*x + d*y), elementwise
  void (*rot2)(cplx a, cplx b, cplx c, cplx d, cplx* x, cplx* y, std::size_t n);
};

const KernelTable& scalar_table();
bool isa_available(Isa isa);
/// Throws Error(InvalidArgument) when the ISA is not available on this CPU.
const KernelTable& table(Isa isa);
/// Table selected for this process.
const KernelTable& active();
std::string_view isa_name(Isa isa);

namespace detail {
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace framekit::kernels
