#include "epsforms/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define EPSFORMS_X86 1
#endif

namespace epsforms::kernels {

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    const std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("inv_mod: not invertible");
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

void axpy_mod_scalar(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x,
                     std::uint32_t p) {
  const std::uint64_t aa = a;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<std::uint32_t>((y[i] + aa * x[i]) % p);
}

#ifdef EPSFORMS_X86
__attribute__((target("avx2,fma"))) void axpy_mod_avx2(std::span<std::uint32_t> y, std::uint32_t a,
                                                       std::span<const std::uint32_t> x, std::uint32_t p) {
  const std::size_t n = y.size();
  const __m256d pv = _mm256_set1_pd(static_cast<double>(p));
  const __m256d pinv = _mm256_set1_pd(1.0 / static_cast<double>(p));
  const __m256d av = _mm256_set1_pd(static_cast<double>(a));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i xi, yi;
    std::memcpy(&xi, x.data() + i, sizeof xi);
    std::memcpy(&yi, y.data() + i, sizeof yi);
    const __m256d xv = _mm256_cvtepi32_pd(xi);
    const __m256d yv = _mm256_cvtepi32_pd(yi);
    const __m256d t = _mm256_mul_pd(av, xv); // exact: < 2^52
    const __m256d q = _mm256_floor_pd(_mm256_mul_pd(t, pinv));
    __m256d r = _mm256_fnmadd_pd(q, pv, t);
    r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), pv));
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, pv, _CMP_GE_OQ), pv));
    r = _mm256_add_pd(r, yv);
    r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, pv, _CMP_GE_OQ), pv));
    const __m128i out = _mm256_cvttpd_epi32(r);
    std::memcpy(y.data() + i, &out, sizeof out);
  }
  axpy_mod_scalar(y.subspan(i), a, x.subspan(i), p);
}

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
void axpy_mod_avx2(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x,
                   std::uint32_t p) {
  axpy_mod_scalar(y, a, x, p);
}

bool isa_available(Isa isa) { return isa == Isa::scalar; }
#endif

Isa active_isa() {
  static const Isa chosen = [] {
    const char* env = std::getenv("EPSFORMS_ISA");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return chosen;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void axpy_mod(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x, std::uint32_t p) {
  if (x.size() < y.size()) throw std::invalid_argument("axpy_mod: x shorter than y");
  if (active_isa() == Isa::avx2) axpy_mod_avx2(y, a, x, p);
  else axpy_mod_scalar(y, a, x, p);
}

} // namespace epsforms::kernels
