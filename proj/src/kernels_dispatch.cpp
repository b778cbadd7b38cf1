// carlab: a finite-dimensional laboratory for quasi-free CAR representations.
// SPDX-License-Identifier: MIT

#include "carlab/kernels.hpp"

#include <cstring>

namespace carlab::kernels {
namespace {

const Backend* g_active = nullptr;

const Backend* resolve_auto() {
  return avx2_available() ? &avx2_backend : &scalar_backend;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Backend& active() {
  if (!g_active) g_active = resolve_auto();
  return *g_active;
}

bool set_backend(const char* name) {
  if (std::strcmp(name, "auto") == 0) {
    g_active = resolve_auto();
    return true;
  }
  if (std::strcmp(name, "scalar") == 0) {
    g_active = &scalar_backend;
    return true;
  }
  if (std::strcmp(name, "avx2") == 0) {
    if (!avx2_available()) return false;
    g_active = &avx2_backend;
    return true;
  }
  return false;
}

const char* active_name() { return active().name; }

}  // namespace carlab::kernels
