#include "zomirror/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define ZOMIRROR_X86 1
#include <immintrin.h>
#else
#define ZOMIRROR_X86 0
#endif

namespace zomirror::kern {

// ---------------------------------------------------------------------------
// scalar reference kernels
// ---------------------------------------------------------------------------

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double l1_norm(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
    return s;
}

double l2_norm_sq(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
    return s;
}

double linf_norm(const double* a, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

double l1_dist(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

void axpy(double* out, const double* x, double scale, const double* u, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + scale * u[i];
}

// tie handling matches MAXPD/MINPD (second operand on equality) so the AVX2
// variant rounds and signs identically
void clamp(double* out, const double* x, const double* lo, const double* hi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i];
        v = v > lo[i] ? v : lo[i];
        v = v < hi[i] ? v : hi[i];
        out[i] = v;
    }
}

void soft_threshold(double* out, const double* z, double thr, double scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::fabs(z[i]) - thr;
        const double m = a > 0.0 ? a : 0.0;
        out[i] = std::copysign(m * scale, z[i]);
    }
}

void matvec(const double* w, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += row[c] * x[c];
        out[r] = s;
    }
}

void csr_matvec(const std::int32_t* row_ptr, const std::int32_t* col, const double* val,
                std::size_t rows, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int32_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
        out[r] = s;
    }
}

}  // namespace scalar

// ---------------------------------------------------------------------------
// AVX2 kernels
// ---------------------------------------------------------------------------

#if ZOMIRROR_X86

namespace avx2 {

__attribute__((target("avx2,fma"))) static inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) static inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

__attribute__((target("avx2,fma"))) double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

__attribute__((target("avx2,fma"))) double l1_norm(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(a[i]);
    return s;
}

__attribute__((target("avx2,fma"))) double l2_norm_sq(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * a[i];
    return s;
}

__attribute__((target("avx2,fma"))) double linf_norm(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(a + i)));
    __m128d lo = _mm_max_pd(_mm256_castpd256_pd128(acc), _mm256_extractf128_pd(acc, 1));
    double m = _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
    return m;
}

__attribute__((target("avx2,fma"))) double l1_dist(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
    return s;
}

// mul+add, not fma: must round exactly like the scalar reference
__attribute__((target("avx2"))) void axpy(double* out, const double* x, double scale, const double* u,
                                          std::size_t n) {
    const __m256d sv = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r =
            _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_mul_pd(sv, _mm256_loadu_pd(u + i)));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) out[i] = x[i] + scale * u[i];
}

__attribute__((target("avx2"))) void clamp(double* out, const double* x, const double* lo,
                                           const double* hi, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        v = _mm256_max_pd(v, _mm256_loadu_pd(lo + i));
        v = _mm256_min_pd(v, _mm256_loadu_pd(hi + i));
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) {
        double v = x[i];
        v = v > lo[i] ? v : lo[i];
        v = v < hi[i] ? v : hi[i];
        out[i] = v;
    }
}

__attribute__((target("avx2"))) void soft_threshold(double* out, const double* z, double thr,
                                                    double scale, std::size_t n) {
    const __m256d tv = _mm256_set1_pd(thr);
    const __m256d sv = _mm256_set1_pd(scale);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d zv = _mm256_loadu_pd(z + i);
        const __m256d mag = _mm256_max_pd(_mm256_sub_pd(_mm256_andnot_pd(signmask, zv), tv),
                                          _mm256_setzero_pd());
        const __m256d r = _mm256_or_pd(_mm256_mul_pd(mag, sv), _mm256_and_pd(signmask, zv));
        _mm256_storeu_pd(out + i, r);
    }
    for (; i < n; ++i) {
        const double a = std::fabs(z[i]) - thr;
        const double m = a > 0.0 ? a : 0.0;
        out[i] = std::copysign(m * scale, z[i]);
    }
}

__attribute__((target("avx2,fma"))) void matvec(const double* w, std::size_t rows, std::size_t cols,
                                                const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double s = hsum(acc);
        for (; c < cols; ++c) s += row[c] * x[c];
        out[r] = s;
    }
}

__attribute__((target("avx2,fma"))) void csr_matvec(const std::int32_t* row_ptr, const std::int32_t* col,
                                                    const double* val, std::size_t rows, const double* x,
                                                    double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const std::int32_t lo = row_ptr[r];
        const std::int32_t hi = row_ptr[r + 1];
        __m256d acc = _mm256_setzero_pd();
        std::int32_t k = lo;
        for (; k + 4 <= hi; k += 4) {
            const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
            const __m256d xs = _mm256_i32gather_pd(x, idx, 8);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xs, acc);
        }
        double s = hsum(acc);
        for (; k < hi; ++k) s += val[k] * x[col[k]];
        out[r] = s;
    }
}

}  // namespace avx2

#endif  // ZOMIRROR_X86

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

namespace {

constexpr Ops kScalarOps = {
    scalar::dot,   scalar::l1_norm,        scalar::l2_norm_sq, scalar::linf_norm,
    scalar::l1_dist, scalar::axpy,         scalar::clamp,      scalar::soft_threshold,
    scalar::matvec,  scalar::csr_matvec,
};

#if ZOMIRROR_X86
constexpr Ops kAvx2Ops = {
    avx2::dot,   avx2::l1_norm,        avx2::l2_norm_sq, avx2::linf_norm,
    avx2::l1_dist, avx2::axpy,         avx2::clamp,      avx2::soft_threshold,
    avx2::matvec,  avx2::csr_matvec,
};
#endif

bool avx2_available() {
#if ZOMIRROR_X86
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect() {
    if (const char* env = std::getenv("ZOMIRROR_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Isa::Avx2;
        // "auto" or unrecognized falls through to detection
    }
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<const Ops*> g_active{nullptr};
std::atomic<Isa> g_isa{Isa::Scalar};

const Ops* table_for(Isa isa) {
#if ZOMIRROR_X86
    if (isa == Isa::Avx2) return &kAvx2Ops;
#endif
    (void)isa;
    return &kScalarOps;
}

void init_once() {
    if (g_active.load(std::memory_order_acquire)) return;
    const Isa isa = detect();
    g_isa.store(isa, std::memory_order_relaxed);
    g_active.store(table_for(isa), std::memory_order_release);
}

}  // namespace

const Ops& ops() {
    init_once();
    return *g_active.load(std::memory_order_acquire);
}

Isa active() {
    init_once();
    return g_isa.load(std::memory_order_relaxed);
}

bool supported(Isa isa) { return isa == Isa::Scalar || (isa == Isa::Avx2 && avx2_available()); }

bool select(Isa isa) {
    if (!supported(isa)) return false;
    g_isa.store(isa, std::memory_order_relaxed);
    g_active.store(table_for(isa), std::memory_order_release);
    return true;
}

bool select(std::string_view name) {
    if (name == "scalar") return select(Isa::Scalar);
    if (name == "avx2") return select(Isa::Avx2);
    if (name == "auto") {
        g_active.store(nullptr, std::memory_order_release);
        init_once();
        return true;
    }
    return false;
}

const char* name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const Ops& scalar_ops() { return kScalarOps; }

const Ops* avx2_ops() {
#if ZOMIRROR_X86
    if (avx2_available()) return &kAvx2Ops;
#endif
    return nullptr;
}

}  // namespace zomirror::kern
