// AVX2 + FMA variants of the kernels. Compiled with -mavx2 -mfma in its own
// translation unit; only reached through the runtime dispatch in kernels.cpp.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "rae/kernels.hpp"

namespace rae::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void horner_many_avx2(const double* c, std::size_t nc, const double* t, double* out,
                      std::size_t n) {
  if (nc == 0) {
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
    return;
  }
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d x = _mm256_loadu_pd(t + j);
    __m256d acc = _mm256_set1_pd(c[nc - 1]);
    for (std::size_t m = nc - 1; m-- > 0;)
      acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[m]));
    _mm256_storeu_pd(out + j, acc);
  }
  if (j < n) horner_many_scalar(c, nc, t + j, out + j, n - j);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + j), _mm256_loadu_pd(b + j), acc);
  double s = hsum(acc);
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

double weighted_inv_sum_avx2(const double* w, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d q = _mm256_div_pd(_mm256_loadu_pd(w + j), _mm256_loadu_pd(y + j));
    acc = _mm256_add_pd(acc, q);
  }
  double s = hsum(acc);
  for (; j < n; ++j) s += w[j] / y[j];
  return s;
}

void scaled_inv_pow_avx2(const double* w, const double* y, double* out, std::size_t n,
                         int power) {
  if (power < 1 || power > 3) throw std::invalid_argument("scaled_inv_pow: power must be 1, 2 or 3");
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d yv = _mm256_loadu_pd(y + j);
    __m256d den = yv;
    if (power >= 2) den = _mm256_mul_pd(den, yv);
    if (power == 3) den = _mm256_mul_pd(den, yv);
    _mm256_storeu_pd(out + j, _mm256_div_pd(_mm256_loadu_pd(w + j), den));
  }
  if (j < n) scaled_inv_pow_scalar(w + j, y + j, out + j, n - j, power);
}

void vandermonde_moments_avx2(const double* t, const double* c, std::size_t n_nodes, double* out,
                              std::size_t n_moments) {
  static thread_local std::vector<double> pow_buf;
  pow_buf.assign(c, c + n_nodes);
  for (std::size_t m = 0; m < n_moments; ++m) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n_nodes; j += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(pow_buf.data() + j));
    double s = hsum(acc);
    for (; j < n_nodes; ++j) s += pow_buf[j];
    out[m] = s;
    if (m + 1 < n_moments) {
      j = 0;
      for (; j + 4 <= n_nodes; j += 4) {
        const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(pow_buf.data() + j),
                                        _mm256_loadu_pd(t + j));
        _mm256_storeu_pd(pow_buf.data() + j, p);
      }
      for (; j < n_nodes; ++j) pow_buf[j] *= t[j];
    }
  }
}

}  // namespace rae::kernels::detail

#endif  // x86_64
