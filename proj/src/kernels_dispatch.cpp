#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "tomo/errors.hpp"
#include "tomo/kernels.hpp"

namespace tomo::kernels {
namespace {

const KernelTable* g_override = nullptr;

const KernelTable* resolve_default() {
  if (const char* env = std::getenv("TOMO_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return &detail::scalar_table;
    if (want == "avx2") {
      const KernelTable* t = table(Backend::avx2);
      if (t == nullptr) {
        throw ValidationError(
            "TOMO_KERNELS=avx2 requested but AVX2 is not available on this "
            "machine");
      }
      return t;
    }
    throw ValidationError("TOMO_KERNELS must be 'scalar' or 'avx2', got '" +
                          want + "'");
  }
  const KernelTable* t = table(Backend::avx2);
  return t != nullptr ? t : &detail::scalar_table;
}

}  // namespace

const KernelTable* table(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return &detail::scalar_table;
    case Backend::avx2:
#ifdef TOMO_HAVE_AVX2_BUILD
      if (__builtin_cpu_supports("avx2")) return &detail::avx2_table;
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable* chosen = resolve_default();
  return g_override != nullptr ? *g_override : *chosen;
}

Backend active_backend() {
  return std::string(active().name) == "avx2" ? Backend::avx2
                                              : Backend::scalar;
}

void set_backend(Backend backend) {
  const KernelTable* t = table(backend);
  if (t == nullptr) {
    throw ValidationError(
        "requested kernel backend is not available on this machine");
  }
  g_override = t;
}

}  // namespace tomo::kernels
