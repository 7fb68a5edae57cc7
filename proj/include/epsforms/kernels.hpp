#pragma once

// Modular arithmetic kernels used to rank-screen candidate generators before
// any exact rational work is done. Residues live in [0, p) with p < 2^26 so a
// product fits exactly in a double mantissa; the AVX2 variant relies on that.

#include <cstdint>
#include <span>
#include <string_view>

namespace epsforms::kernels {

/// Default screening prime (largest prime below 2^26).
inline constexpr std::uint32_t kScreenPrime = 67108859u;

enum class Isa { scalar, avx2 };

/// y[i] = (y[i] + a * x[i]) mod p for i < y.size(); x.size() >= y.size().
void axpy_mod_scalar(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x,
                     std::uint32_t p);
/// Same contract; only callable when the CPU reports AVX2 and FMA.
void axpy_mod_avx2(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x,
                   std::uint32_t p);

/// Best variant supported by the running CPU (overridable with
/// EPSFORMS_ISA=scalar for debugging).
Isa active_isa();
std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// Dispatching entry point.
void axpy_mod(std::span<std::uint32_t> y, std::uint32_t a, std::span<const std::uint32_t> x, std::uint32_t p);

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

} // namespace epsforms::kernels
