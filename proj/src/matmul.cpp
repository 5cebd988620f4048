#include "alignkit/matrix.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef ALIGNKIT_USE_BLAS
#include <cblas.h>

#if defined(__x86_64__) && defined(__GNUC__)
// OpenBLAS picks its kernels from CPUID at init time, which misfires on some
// virtualized CPUs. Hint the core type before the (statically linked) library
// constructor runs; priority 101 orders this ahead of default constructors.
__attribute__((constructor(101))) static void alignkit_blas_core_hint() {
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx512f")) setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 0);
}
#endif
#endif

namespace alignkit {

namespace {

void check_inner(std::size_t a, std::size_t b, const char* op) {
    if (a != b)
        throw std::invalid_argument(std::string(op) + ": inner dimensions disagree (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}

// Reference kernels, used when BLAS is unavailable. Accumulation order over
// the inner index is ascending per output element.

template <typename T>
void gemm_nn_ref(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    const std::size_t m = a.rows, k = a.cols, n = b.cols;
    for (std::size_t i = 0; i < m; ++i) {
        const T* ar = a.row(i);
        T* cr = c.row(i);
        for (std::size_t p = 0; p < k; ++p) {
            const T ap = ar[p];
            const T* br = b.row(p);
            for (std::size_t j = 0; j < n; ++j) cr[j] += ap * br[j];
        }
    }
}

template <typename T>
void gemm_tn_ref(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    const std::size_t k = a.rows, m = a.cols, n = b.cols;
    for (std::size_t p = 0; p < k; ++p) {
        const T* ar = a.row(p);
        const T* br = b.row(p);
        for (std::size_t i = 0; i < m; ++i) {
            const T av = ar[i];
            T* cr = c.row(i);
            for (std::size_t j = 0; j < n; ++j) cr[j] += av * br[j];
        }
    }
}

template <typename T>
void gemm_nt_ref(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    const std::size_t m = a.rows, k = a.cols, n = b.rows;
    for (std::size_t i = 0; i < m; ++i) {
        const T* ar = a.row(i);
        T* cr = c.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const T* br = b.row(j);
            T acc = T(0);
            for (std::size_t p = 0; p < k; ++p) acc += ar[p] * br[p];
            cr[j] = acc;
        }
    }
}

#ifdef ALIGNKIT_USE_BLAS
inline void blas_gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k,
                      const float* a, std::size_t lda, const float* b, std::size_t ldb,
                      float* c, std::size_t ldc) {
    cblas_sgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans, tb ? CblasTrans : CblasNoTrans,
                static_cast<int>(m), static_cast<int>(n), static_cast<int>(k), 1.0f, a,
                static_cast<int>(lda), b, static_cast<int>(ldb), 0.0f, c, static_cast<int>(ldc));
}

inline void blas_gemm(bool ta, bool tb, std::size_t m, std::size_t n, std::size_t k,
                      const double* a, std::size_t lda, const double* b, std::size_t ldb,
                      double* c, std::size_t ldc) {
    cblas_dgemm(CblasRowMajor, ta ? CblasTrans : CblasNoTrans, tb ? CblasTrans : CblasNoTrans,
                static_cast<int>(m), static_cast<int>(n), static_cast<int>(k), 1.0, a,
                static_cast<int>(lda), b, static_cast<int>(ldb), 0.0, c, static_cast<int>(ldc));
}
#endif

template <typename T>
void do_nn(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    check_inner(a.cols, b.rows, "matmul_nn");
    c.resize_for_overwrite(a.rows, b.cols);
    if (c.data.empty()) return;
#ifdef ALIGNKIT_USE_BLAS
    blas_gemm(false, false, a.rows, b.cols, a.cols, a.data.data(), a.cols, b.data.data(), b.cols,
              c.data.data(), c.cols);
#else
    std::fill(c.data.begin(), c.data.end(), T(0));
    gemm_nn_ref(a, b, c);
#endif
}

template <typename T>
void do_tn(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    check_inner(a.rows, b.rows, "matmul_tn");
    c.resize_for_overwrite(a.cols, b.cols);
    if (c.data.empty()) return;
#ifdef ALIGNKIT_USE_BLAS
    blas_gemm(true, false, a.cols, b.cols, a.rows, a.data.data(), a.cols, b.data.data(), b.cols,
              c.data.data(), c.cols);
#else
    std::fill(c.data.begin(), c.data.end(), T(0));
    gemm_tn_ref(a, b, c);
#endif
}

template <typename T>
void do_nt(const Mat<T>& a, const Mat<T>& b, Mat<T>& c) {
    check_inner(a.cols, b.cols, "matmul_nt");
    c.resize_for_overwrite(a.rows, b.rows);
    if (c.data.empty()) return;
#ifdef ALIGNKIT_USE_BLAS
    blas_gemm(false, true, a.rows, b.rows, a.cols, a.data.data(), a.cols, b.data.data(), b.cols,
              c.data.data(), c.cols);
#else
    gemm_nt_ref(a, b, c);
#endif
}

}  // namespace

void matmul_nn(const Mat<float>& a, const Mat<float>& b, Mat<float>& c) { do_nn(a, b, c); }
void matmul_nn(const Mat<double>& a, const Mat<double>& b, Mat<double>& c) { do_nn(a, b, c); }
void matmul_tn(const Mat<float>& a, const Mat<float>& b, Mat<float>& c) { do_tn(a, b, c); }
void matmul_tn(const Mat<double>& a, const Mat<double>& b, Mat<double>& c) { do_tn(a, b, c); }
void matmul_nt(const Mat<float>& a, const Mat<float>& b, Mat<float>& c) { do_nt(a, b, c); }
void matmul_nt(const Mat<double>& a, const Mat<double>& b, Mat<double>& c) { do_nt(a, b, c); }

}  // namespace alignkit
