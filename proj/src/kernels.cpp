#include "rae/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace rae::kernels {

namespace detail {

void horner_many_scalar(const double* c, std::size_t nc, const double* t, double* out,
                        std::size_t n) {
  if (nc == 0) {
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
    return;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double x = t[j];
    double acc = c[nc - 1];
    for (std::size_t m = nc - 1; m-- > 0;) acc = acc * x + c[m];
    out[j] = acc;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += a[j] * b[j];
  return acc;
}

double weighted_inv_sum_scalar(const double* w, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += w[j] / y[j];
  return acc;
}

void scaled_inv_pow_scalar(const double* w, const double* y, double* out, std::size_t n,
                           int power) {
  switch (power) {
    case 1:
      for (std::size_t j = 0; j < n; ++j) out[j] = w[j] / y[j];
      break;
    case 2:
      for (std::size_t j = 0; j < n; ++j) out[j] = w[j] / (y[j] * y[j]);
      break;
    case 3:
      for (std::size_t j = 0; j < n; ++j) out[j] = w[j] / (y[j] * y[j] * y[j]);
      break;
    default:
      throw std::invalid_argument("scaled_inv_pow: power must be 1, 2 or 3");
  }
}

void vandermonde_moments_scalar(const double* t, const double* c, std::size_t n_nodes, double* out,
                                std::size_t n_moments) {
  // Column-major over moments with running powers kept per node.
  static thread_local std::vector<double> pow_buf;
  pow_buf.assign(c, c + n_nodes);  // c_j * t_j^0
  for (std::size_t m = 0; m < n_moments; ++m) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_nodes; ++j) acc += pow_buf[j];
    out[m] = acc;
    if (m + 1 < n_moments)
      for (std::size_t j = 0; j < n_nodes; ++j) pow_buf[j] *= t[j];
  }
}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

}  // namespace detail

namespace {

Backend pick_default() {
  if (std::getenv("RAE_FORCE_SCALAR") != nullptr) return Backend::scalar;
  return detail::avx2_available() ? Backend::avx2 : Backend::scalar;
}

Backend& active() {
  static Backend b = pick_default();
  return b;
}

}  // namespace

Backend backend() { return active(); }

std::string_view backend_name() {
  return active() == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
  if (b == Backend::avx2 && !detail::avx2_available())
    throw std::runtime_error("avx2 backend not available on this CPU");
  active() = b;
}

void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Backend::avx2) return detail::horner_many_avx2(c, nc, t, out, n);
#endif
  detail::horner_many_scalar(c, nc, t, out, n);
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Backend::avx2) return detail::dot_avx2(a, b, n);
#endif
  return detail::dot_scalar(a, b, n);
}

double weighted_inv_sum(const double* w, const double* y, std::size_t n) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Backend::avx2) return detail::weighted_inv_sum_avx2(w, y, n);
#endif
  return detail::weighted_inv_sum_scalar(w, y, n);
}

void scaled_inv_pow(const double* w, const double* y, double* out, std::size_t n, int power) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Backend::avx2) return detail::scaled_inv_pow_avx2(w, y, out, n, power);
#endif
  detail::scaled_inv_pow_scalar(w, y, out, n, power);
}

void vandermonde_moments(const double* t, const double* c, std::size_t n_nodes, double* out,
                         std::size_t n_moments) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Backend::avx2)
    return detail::vandermonde_moments_avx2(t, c, n_nodes, out, n_moments);
#endif
  detail::vandermonde_moments_scalar(t, c, n_nodes, out, n_moments);
}

}  // namespace rae::kernels
