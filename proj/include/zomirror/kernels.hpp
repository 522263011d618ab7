#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel arithmetic kernels behind the vector math used by the
// optimizers, estimators and problem oracles. Every kernel has a scalar
// reference implementation and an AVX2 variant; the active set is selected
// once at runtime (cpuid, overridable via ZOMIRROR_KERNELS=scalar|avx2 or
// kern::select()). Elementwise kernels produce bit-identical results across
// variants; reductions may differ in the last ulps and are equivalence-tested
// against the scalar reference under a tight relative tolerance.

namespace zomirror::kern {

enum class Isa { Scalar, Avx2 };

struct Ops {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*l1_norm)(const double* a, std::size_t n);
    double (*l2_norm_sq)(const double* a, std::size_t n);
    double (*linf_norm)(const double* a, std::size_t n);
    double (*l1_dist)(const double* a, const double* b, std::size_t n);
    // out = x + scale * u
    void (*axpy)(double* out, const double* x, double scale, const double* u, std::size_t n);
    // out_i = min(max(x_i, lo_i), hi_i)
    void (*clamp)(double* out, const double* x, const double* lo, const double* hi, std::size_t n);
    // out_i = sign(z_i) * max(|z_i| - thr, 0) * scale
    void (*soft_threshold)(double* out, const double* z, double thr, double scale, std::size_t n);
    // dense row-major (rows x cols) matrix times vector
    void (*matvec)(const double* w, std::size_t rows, std::size_t cols, const double* x, double* out);
    // CSR matrix times vector
    void (*csr_matvec)(const std::int32_t* row_ptr, const std::int32_t* col, const double* val,
                       std::size_t rows, const double* x, double* out);
};

// Active kernel table (auto-detected on first use).
const Ops& ops();

Isa active();
bool supported(Isa isa);
// Returns false (and leaves the selection unchanged) if the ISA is not
// available on this machine.
bool select(Isa isa);
bool select(std::string_view name);  // "scalar" | "avx2" | "auto"
const char* name(Isa isa);

// Individual tables, exposed for equivalence tests.
const Ops& scalar_ops();
const Ops* avx2_ops();  // null when unavailable

}  // namespace zomirror::kern
