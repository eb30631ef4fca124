#include "smr/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace smr::kernels {

#if defined(SMR_BUILD_AVX2)
const Dispatch* avx2_table_impl();
#endif

const Dispatch* avx2() {
#if defined(SMR_BUILD_AVX2)
  static const Dispatch* table = []() -> const Dispatch* {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
      return avx2_table_impl();
    }
    return nullptr;
  }();
  return table;
#else
  return nullptr;
#endif
}

const Dispatch& active() {
  static const Dispatch* table = [] {
    const char* force = std::getenv("SMR_KERNELS");
    if (force != nullptr) {
      if (std::strcmp(force, "scalar") == 0) return &scalar();
      if (std::strcmp(force, "avx2") == 0 && avx2() != nullptr) return avx2();
    }
    return avx2() != nullptr ? avx2() : &scalar();
  }();
  return *table;
}

}  // namespace smr::kernels
