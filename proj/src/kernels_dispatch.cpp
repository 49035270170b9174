#include "netprop/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace netprop::kernels {

#ifndef NETPROP_HAVE_AVX2
const Ops* avx2() { return nullptr; }
#endif

namespace {

const Ops& select() {
  if (const char* forced = std::getenv("NETPROP_KERNELS")) {
    if (std::strcmp(forced, "scalar") == 0) return scalar();
    if (std::strcmp(forced, "avx2") == 0 && avx2() != nullptr) return *avx2();
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2() != nullptr && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return *avx2();
  }
#endif
  return scalar();
}

}  // namespace

const Ops& active() {
  static const Ops& selected = select();
  return selected;
}

}  // namespace netprop::kernels
