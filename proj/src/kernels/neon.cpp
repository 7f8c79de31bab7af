// AArch64 Advanced SIMD variants. NEON is mandatory on AArch64, so no runtime
// probe is needed beyond the architecture check at build time.

#include "rhet/kernels/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace rhet::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 = vfmaq_f64(s0, vld1q_f64(a + i), vld1q_f64(b + i));
    s1 = vfmaq_f64(s1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gather_axpy(const double* rows, std::size_t stride, const std::uint32_t* idx,
                 const double* w, std::size_t count, double* acc, std::size_t width) {
  std::size_t k = 0;
  for (; k + 8 <= width; k += 8) {
    float64x2_t a0 = vld1q_f64(acc + k);
    float64x2_t a1 = vld1q_f64(acc + k + 2);
    float64x2_t a2 = vld1q_f64(acc + k + 4);
    float64x2_t a3 = vld1q_f64(acc + k + 6);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = rows + static_cast<std::size_t>(idx[i]) * stride + k;
      const float64x2_t wi = vdupq_n_f64(w[i]);
      a0 = vfmaq_f64(a0, wi, vld1q_f64(row));
      a1 = vfmaq_f64(a1, wi, vld1q_f64(row + 2));
      a2 = vfmaq_f64(a2, wi, vld1q_f64(row + 4));
      a3 = vfmaq_f64(a3, wi, vld1q_f64(row + 6));
    }
    vst1q_f64(acc + k, a0);
    vst1q_f64(acc + k + 2, a1);
    vst1q_f64(acc + k + 4, a2);
    vst1q_f64(acc + k + 6, a3);
  }
  for (; k < width; ++k) {
    double a = acc[k];
    for (std::size_t i = 0; i < count; ++i)
      a += w[i] * rows[static_cast<std::size_t>(idx[i]) * stride + k];
    acc[k] = a;
  }
}

void gather_sum(const double* rows, std::size_t stride, const std::uint32_t* idx,
                std::size_t count, double* acc, std::size_t width) {
  std::size_t k = 0;
  for (; k + 8 <= width; k += 8) {
    float64x2_t a0 = vld1q_f64(acc + k);
    float64x2_t a1 = vld1q_f64(acc + k + 2);
    float64x2_t a2 = vld1q_f64(acc + k + 4);
    float64x2_t a3 = vld1q_f64(acc + k + 6);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = rows + static_cast<std::size_t>(idx[i]) * stride + k;
      a0 = vaddq_f64(a0, vld1q_f64(row));
      a1 = vaddq_f64(a1, vld1q_f64(row + 2));
      a2 = vaddq_f64(a2, vld1q_f64(row + 4));
      a3 = vaddq_f64(a3, vld1q_f64(row + 6));
    }
    vst1q_f64(acc + k, a0);
    vst1q_f64(acc + k + 2, a1);
    vst1q_f64(acc + k + 4, a2);
    vst1q_f64(acc + k + 6, a3);
  }
  for (; k < width; ++k) {
    double a = acc[k];
    for (std::size_t i = 0; i < count; ++i) a += rows[static_cast<std::size_t>(idx[i]) * stride + k];
    acc[k] = a;
  }
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  float64x2_t s0 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    s0 = vfmaq_f64(s0, d, d);
  }
  double s = vaddvq_f64(s0);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double max_abs_scaled(const double* x, const double* scale, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) m = vmaxq_f64(m, vabsq_f64(vmulq_f64(vld1q_f64(x + k), vld1q_f64(scale + k))));
  double r = vmaxvq_f64(m);
  for (; k < n; ++k) r = std::fmax(r, std::fabs(x[k] * scale[k]));
  return r;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable t{Isa::neon, dot, gather_axpy, gather_sum, squared_distance,
                             max_abs_scaled};
  return t;
}

}  // namespace rhet::kernels
