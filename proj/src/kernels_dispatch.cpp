#include <atomic>
#include <cstdlib>
#include <cstring>

#include "convexlse/kernels.hpp"

namespace convexlse::kernels {
namespace {

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend env_backend() {
  const char* v = std::getenv("CONVEX_LSE_KERNELS");
  if (v == nullptr) return Backend::Auto;
  if (std::strcmp(v, "scalar") == 0) return Backend::Scalar;
  if (std::strcmp(v, "avx2") == 0) return Backend::Avx2;
  return Backend::Auto;
}

const Ops* resolve(Backend b) {
  if (b == Backend::Scalar) return &scalar_ops();
  const Ops* simd = cpu_supports_avx2() ? avx2_ops() : nullptr;
  if (b == Backend::Avx2) return simd != nullptr ? simd : &scalar_ops();
  return simd != nullptr ? simd : &scalar_ops();
}

std::atomic<const Ops*> g_active{nullptr};

const Ops* active() {
  const Ops* p = g_active.load(std::memory_order_acquire);
  if (p == nullptr) {
    p = resolve(env_backend());
    g_active.store(p, std::memory_order_release);
  }
  return p;
}

}  // namespace

const Ops& ops() { return *active(); }

void set_backend(Backend b) { g_active.store(resolve(b), std::memory_order_release); }

Backend active_backend() {
  return active() == &scalar_ops() ? Backend::Scalar : Backend::Avx2;
}

}  // namespace convexlse::kernels
