#pragma once

// Data-parallel inner loops used by the permutation tests and the forest
// importance code. Every kernel has a scalar reference implementation; vector
// variants are selected once at startup from the host CPU.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace rhet::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  double (*dot)(const double* a, const double* b, std::size_t n);

  // acc[k] += sum_i w[i] * rows[idx[i] * stride + k]   for k < width
  void (*gather_axpy)(const double* rows, std::size_t stride, const std::uint32_t* idx,
                      const double* w, std::size_t count, double* acc, std::size_t width);

  // acc[k] += sum_i rows[idx[i] * stride + k]   for k < width
  void (*gather_sum)(const double* rows, std::size_t stride, const std::uint32_t* idx,
                     std::size_t count, double* acc, std::size_t width);

  // sum_i (a[i] - b[i])^2
  double (*squared_distance)(const double* a, const double* b, std::size_t n);

  // max_k |x[k] * scale[k]|
  double (*max_abs_scaled)(const double* x, const double* scale, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(RHET_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(RHET_HAVE_NEON)
const KernelTable& neon_table();
#endif

/// True when the variant was compiled in and the running CPU supports it.
bool supported(Isa isa);

/// Table for a specific ISA; throws std::invalid_argument if unsupported.
const KernelTable& table(Isa isa);

/// The table used by library code. Chosen on first use: the widest supported
/// ISA, unless the RHET_ISA environment variable names another one.
const KernelTable& active();

/// Overrides the active table (tests and benchmarks).
void set_active(Isa isa);

}  // namespace rhet::kernels
