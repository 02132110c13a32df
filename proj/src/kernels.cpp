#include "sigfolio/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "sigfolio/error.hpp"

namespace sigfolio::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb) {
    for (std::size_t i = 0; i < na; ++i) {
        const double ai = a[i];
        double* row = dest + i * nb;
        for (std::size_t j = 0; j < nb; ++j) row[j] += ai * b[j];
    }
}

void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = dot(a + r * cols, x, cols);
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

}  // namespace scalar

#if defined(SIGFOLIO_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb);
void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols);
double sum(const double* x, std::size_t n);
}  // namespace avx2
#endif

namespace {

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*squared_distance)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*outer_accumulate)(double*, const double*, std::size_t, const double*, std::size_t);
    void (*matvec)(const double*, const double*, double*, std::size_t, std::size_t);
    double (*sum)(const double*, std::size_t);
};

constexpr Table kScalarTable{scalar::dot,   scalar::squared_distance, scalar::axpy,
                             scalar::outer_accumulate, scalar::matvec, scalar::sum};

#if defined(SIGFOLIO_HAVE_AVX2)
constexpr Table kAvx2Table{avx2::dot,   avx2::squared_distance, avx2::axpy,
                           avx2::outer_accumulate, avx2::matvec, avx2::sum};
#endif

Isa detect_isa() {
    if (const char* env = std::getenv("SIGFOLIO_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!cpu_supports_avx2())
                throw Error("SIGFOLIO_ISA=avx2 requested but CPU or build lacks AVX2+FMA");
            return Isa::avx2;
        }
        throw Error(std::string("unknown SIGFOLIO_ISA value '") + env + "'");
    }
    return cpu_supports_avx2() ? Isa::avx2 : Isa::scalar;
}

const Table& table_for(Isa isa) {
#if defined(SIGFOLIO_HAVE_AVX2)
    if (isa == Isa::avx2) return kAvx2Table;
#else
    (void)isa;
#endif
    return kScalarTable;
}

struct State {
    Isa isa;
    const Table* table;
};

// Lazy so a bad SIGFOLIO_ISA value surfaces as a catchable error at first
// kernel use rather than during static initialization.
State& state() {
    static State s = [] {
        const Isa isa = detect_isa();
        return State{isa, &table_for(isa)};
    }();
    return s;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(SIGFOLIO_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return state().isa; }

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void set_isa(Isa isa) {
    if (isa == Isa::avx2 && !cpu_supports_avx2())
        throw Error("AVX2 lane unavailable on this CPU/build");
    state().isa = isa;
    state().table = &table_for(isa);
}

double dot(const double* a, const double* b, std::size_t n) {
    return state().table->dot(a, b, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    return state().table->squared_distance(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    state().table->axpy(alpha, x, y, n);
}

void outer_accumulate(double* dest, const double* a, std::size_t na, const double* b,
                      std::size_t nb) {
    state().table->outer_accumulate(dest, a, na, b, nb);
}

void matvec(const double* a, const double* x, double* y, std::size_t rows, std::size_t cols) {
    state().table->matvec(a, x, y, rows, cols);
}

double sum(const double* x, std::size_t n) { return state().table->sum(x, n); }

}  // namespace sigfolio::kernels
