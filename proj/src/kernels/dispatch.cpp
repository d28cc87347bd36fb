#include <cstdlib>
#include <string>

#include "framekit/error.hpp"
#include "framekit/kernels.hpp"

namespace framekit::kernels {

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorCode::InvalidArgument, std::string("kernel ISA not available: ") + std::string(isa_name(isa)));
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (isa == Isa::Avx2) return detail::avx2_table();
#endif
  return scalar_table();
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("FRAMEKIT_KERNEL")) {
    if (std::string(forced) == "scalar") return scalar_table();
  }
  if (isa_available(Isa::Avx2)) return table(Isa::Avx2);
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace framekit::kernels
