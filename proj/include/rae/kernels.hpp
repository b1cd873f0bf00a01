#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by the quadrature-based evaluators.
// Scalar reference implementations are the semantic definition; an AVX2
// variant is selected at runtime when the CPU supports it and must agree
// with the reference to floating-point accumulation-order tolerance.
namespace rae::kernels {

enum class Backend { scalar, avx2 };

// Active backend. Defaults to the best variant the CPU supports.
Backend backend();
std::string_view backend_name();

// Force a specific backend (used by equivalence tests and the
// RAE_FORCE_SCALAR environment variable). Throws if unsupported.
void set_backend(Backend b);

// out[j] = sum_{m=0}^{nc-1} c[m] * t[j]^m  (Horner), j = 0..n-1.
void horner_many(const double* c, std::size_t nc, const double* t, double* out, std::size_t n);

// sum_j a[j] * b[j]
double dot(const double* a, const double* b, std::size_t n);

// sum_j w[j] / y[j]
double weighted_inv_sum(const double* w, const double* y, std::size_t n);

// out[j] = w[j] / y[j]^power, power in {1, 2, 3}.
void scaled_inv_pow(const double* w, const double* y, double* out, std::size_t n, int power);

// out[m] = sum_j c[j] * t[j]^m for m = 0..n_moments-1.
// Running node powers; O(n_nodes * n_moments).
void vandermonde_moments(const double* t, const double* c, std::size_t n_nodes, double* out,
                         std::size_t n_moments);

namespace detail {
// Reference implementations, always available (used for equivalence tests).
void horner_many_scalar(const double* c, std::size_t nc, const double* t, double* out,
                        std::size_t n);
double dot_scalar(const double* a, const double* b, std::size_t n);
double weighted_inv_sum_scalar(const double* w, const double* y, std::size_t n);
void scaled_inv_pow_scalar(const double* w, const double* y, double* out, std::size_t n,
                           int power);
void vandermonde_moments_scalar(const double* t, const double* c, std::size_t n_nodes, double* out,
                                std::size_t n_moments);

bool avx2_available();
#if defined(__x86_64__) || defined(_M_X64)
void horner_many_avx2(const double* c, std::size_t nc, const double* t, double* out,
                      std::size_t n);
double dot_avx2(const double* a, const double* b, std::size_t n);
double weighted_inv_sum_avx2(const double* w, const double* y, std::size_t n);
void scaled_inv_pow_avx2(const double* w, const double* y, double* out, std::size_t n, int power);
void vandermonde_moments_avx2(const double* t, const double* c, std::size_t n_nodes, double* out,
                              std::size_t n_moments);
#endif
}  // namespace detail

}  // namespace rae::kernels
