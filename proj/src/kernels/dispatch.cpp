#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sarimg/kernels.hpp"

namespace sarimg::kernels {

#if defined(SARIMG_HAVE_AVX2_BUILD)
namespace detail {
const Backend& avx2_backend_table();
}
#endif

const Backend* avx2_backend() {
#if defined(SARIMG_HAVE_AVX2_BUILD)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return &detail::avx2_backend_table();
  }
#endif
  return nullptr;
}

namespace {

const Backend* lookup(std::string_view name) {
  if (name == "scalar") return &scalar_backend();
  if (name == "avx2") return avx2_backend();
  return nullptr;
}

const Backend* initial_backend() {
  if (const char* env = std::getenv("SARIMG_KERNELS")) {
    if (const Backend* b = lookup(env)) return b;
    throw std::invalid_argument(std::string("SARIMG_KERNELS: unknown or unsupported backend '") +
                                env + "'");
  }
  if (const Backend* b = avx2_backend()) return b;
  return &scalar_backend();
}

const Backend*& active_slot() {
  static const Backend* slot = initial_backend();
  return slot;
}

}  // namespace

const Backend& active() { return *active_slot(); }

void force_backend(std::string_view name) {
  const Backend* b = lookup(name);
  if (b == nullptr) {
    throw std::invalid_argument("unknown or unsupported kernel backend '" +
                                std::string(name) + "'");
  }
  active_slot() = b;
}

}  // namespace sarimg::kernels
