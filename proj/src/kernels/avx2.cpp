// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "rhet/kernels/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace rhet::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), s1);
  }
  for (; i + 4 <= n; i += 4)
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), s0);
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gather_axpy(const double* rows, std::size_t stride, const std::uint32_t* idx,
                 const double* w, std::size_t count, double* acc, std::size_t width) {
  std::size_t k = 0;
  for (; k + 16 <= width; k += 16) {
    __m256d a0 = _mm256_loadu_pd(acc + k);
    __m256d a1 = _mm256_loadu_pd(acc + k + 4);
    __m256d a2 = _mm256_loadu_pd(acc + k + 8);
    __m256d a3 = _mm256_loadu_pd(acc + k + 12);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = rows + static_cast<std::size_t>(idx[i]) * stride + k;
      const __m256d wi = _mm256_set1_pd(w[i]);
      a0 = _mm256_fmadd_pd(wi, _mm256_loadu_pd(row), a0);
      a1 = _mm256_fmadd_pd(wi, _mm256_loadu_pd(row + 4), a1);
      a2 = _mm256_fmadd_pd(wi, _mm256_loadu_pd(row + 8), a2);
      a3 = _mm256_fmadd_pd(wi, _mm256_loadu_pd(row + 12), a3);
    }
    _mm256_storeu_pd(acc + k, a0);
    _mm256_storeu_pd(acc + k + 4, a1);
    _mm256_storeu_pd(acc + k + 8, a2);
    _mm256_storeu_pd(acc + k + 12, a3);
  }
  for (; k + 4 <= width; k += 4) {
    __m256d a0 = _mm256_loadu_pd(acc + k);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = rows + static_cast<std::size_t>(idx[i]) * stride + k;
      a0 = _mm256_fmadd_pd(_mm256_set1_pd(w[i]), _mm256_loadu_pd(row), a0);
    }
    _mm256_storeu_pd(acc + k, a0);
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
  for (; k + 16 <= width; k += 16) {
    __m256d a0 = _mm256_loadu_pd(acc + k);
    __m256d a1 = _mm256_loadu_pd(acc + k + 4);
    __m256d a2 = _mm256_loadu_pd(acc + k + 8);
    __m256d a3 = _mm256_loadu_pd(acc + k + 12);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = rows + static_cast<std::size_t>(idx[i]) * stride + k;
      a0 = _mm256_add_pd(a0, _mm256_loadu_pd(row));
      a1 = _mm256_add_pd(a1, _mm256_loadu_pd(row + 4));
      a2 = _mm256_add_pd(a2, _mm256_loadu_pd(row + 8));
      a3 = _mm256_add_pd(a3, _mm256_loadu_pd(row + 12));
    }
    _mm256_storeu_pd(acc + k, a0);
    _mm256_storeu_pd(acc + k + 4, a1);
    _mm256_storeu_pd(acc + k + 8, a2);
    _mm256_storeu_pd(acc + k + 12, a3);
  }
  for (; k + 4 <= width; k += 4) {
    __m256d a0 = _mm256_loadu_pd(acc + k);
    for (std::size_t i = 0; i < count; ++i)
      a0 = _mm256_add_pd(a0, _mm256_loadu_pd(rows + static_cast<std::size_t>(idx[i]) * stride + k));
    _mm256_storeu_pd(acc + k, a0);
  }
  for (; k < width; ++k) {
    double a = acc[k];
    for (std::size_t i = 0; i < count; ++i) a += rows[static_cast<std::size_t>(idx[i]) * stride + k];
    acc[k] = a;
  }
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
    s0 = _mm256_fmadd_pd(d0, d0, s0);
    s1 = _mm256_fmadd_pd(d1, d1, s1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    s0 = _mm256_fmadd_pd(d0, d0, s0);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double max_abs_scaled(const double* x, const double* scale, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(scale + k));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, v));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = std::fmax(std::fmax(lanes[0], lanes[1]), std::fmax(lanes[2], lanes[3]));
  for (; k < n; ++k) r = std::fmax(r, std::fabs(x[k] * scale[k]));
  return r;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{Isa::avx2, dot, gather_axpy, gather_sum, squared_distance,
                             max_abs_scaled};
  return t;
}

}  // namespace rhet::kernels
