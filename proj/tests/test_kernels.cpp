#include "epsforms/kernels.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace epsforms::kernels;

TEST_CASE("scalar and AVX2 axpy agree") {
  if (!isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available; checking the scalar path only");
  }
  std::mt19937_64 rng(1);
  for (std::uint32_t p : {3u, 65521u, kScreenPrime}) {
    std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
    for (std::size_t len : {0u, 1u, 3u, 7u, 8u, 9u, 31u, 64u, 1001u}) {
      std::vector<std::uint32_t> x(len + 3), y(len);
      for (auto& v : x) v = d(rng);
      for (auto& v : y) v = d(rng);
      const std::uint32_t a = d(rng);
      auto ref = y;
      for (std::size_t i = 0; i < len; ++i)
        ref[i] = static_cast<std::uint32_t>((ref[i] + static_cast<std::uint64_t>(a) * x[i]) % p);
      auto s = y;
      axpy_mod_scalar(s, a, x, p);
      CHECK(s == ref);
      if (isa_available(Isa::avx2)) {
        auto v = y;
        axpy_mod_avx2(v, a, x, p);
        CHECK(v == ref);
      }
      auto disp = y;
      axpy_mod(disp, a, x, p);
      CHECK(disp == ref);
    }
  }
}

TEST_CASE("modular inverse") {
  for (std::uint32_t a : {1u, 2u, 12345u, kScreenPrime - 1})
    CHECK(mul_mod(a, inv_mod(a, kScreenPrime), kScreenPrime) == 1u);
}
