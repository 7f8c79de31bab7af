#include "rhet/kernels/kernels.hpp"

#include <cmath>

namespace rhet::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void gather_axpy(const double* rows, std::size_t stride, const std::uint32_t* idx,
                 const double* w, std::size_t count, double* acc, std::size_t width) {
  for (std::size_t i = 0; i < count; ++i) {
    const double* row = rows + static_cast<std::size_t>(idx[i]) * stride;
    const double wi = w[i];
    for (std::size_t k = 0; k < width; ++k) acc[k] += wi * row[k];
  }
}

void gather_sum(const double* rows, std::size_t stride, const std::uint32_t* idx,
                std::size_t count, double* acc, std::size_t width) {
  for (std::size_t i = 0; i < count; ++i) {
    const double* row = rows + static_cast<std::size_t>(idx[i]) * stride;
    for (std::size_t k = 0; k < width; ++k) acc[k] += row[k];
  }
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double max_abs_scaled(const double* x, const double* scale, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::fmax(m, std::fabs(x[k] * scale[k]));
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{Isa::scalar, dot, gather_axpy, gather_sum, squared_distance,
                             max_abs_scaled};
  return t;
}

}  // namespace rhet::kernels
