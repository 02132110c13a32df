#pragma once

#include <cstddef>
#include <string>

// Dense double-precision inner loops shared by the signature, clustering and
// allocation code. Every kernel has a scalar reference implementation and, on
// x86-64 with AVX2+FMA, a vectorized variant selected once at startup. The two
// lanes are equivalence-tested against each other; everything above this layer
// is lane-agnostic.

namespace sigfolio::kernels {

enum class Isa { scalar, avx2 };

// Lane picked for this process: AVX2 when the CPU supports it (override with
// SIGFOLIO_ISA=scalar|avx2 in the environment), scalar otherwise.
Isa active_isa();

const char* isa_name(Isa isa);

// True when the running CPU can execute the AVX2+FMA lane.
bool cpu_supports_avx2();

// Forces a lane, for equivalence tests. Throws Error if unavailable.
void set_isa(Isa isa);

// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i (a[i] - b[i])^2
double squared_distance(const double* a, const double* b, std::size_t n);

// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);

// dest[i*nb + j] += a[i] * b[j]; dest has na*nb entries. This is the inner
// step of the truncated tensor product and of covariance accumulation.
void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb);

// y = A x with A row-major (rows x cols), y has `rows` entries.
void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);

double sum(const double* x, std::size_t n);

// Scalar reference lane, callable directly (tests compare the active lane
// against these).
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb);
void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
double sum(const double* x, std::size_t n);
}  // namespace scalar

}  // namespace sigfolio::kernels
