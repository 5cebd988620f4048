#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alignkit/matrix.hpp"

namespace alignkit {

/// Binary commentary-by-frame label matrix; every row must mark at least
/// one positive frame.
struct LabelMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> values;

    LabelMatrix() = default;
    LabelMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0) {}

    std::uint8_t& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
    std::uint8_t at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

    static LabelMatrix one_hot(std::size_t rows, std::size_t cols,
                               const std::vector<std::size_t>& positives) {
        LabelMatrix y(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) y.at(i, positives[i]) = 1;
        return y;
    }
};

namespace detail {

template <typename T>
void normalize_rows(const Mat<T>& m, Mat<T>& out, std::vector<double>& norms, const char* side) {
    out.resize_for_overwrite(m.rows, m.cols);
    norms.resize(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const T* r = m.row(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) sq += static_cast<double>(r[j]) * r[j];
        const double norm = std::sqrt(sq);
        if (norm == 0.0)
            throw std::invalid_argument(std::string("affinity: zero-norm ") + side + " row " +
                                        std::to_string(i));
        norms[i] = norm;
        T* o = out.row(i);
        const T inv = static_cast<T>(1.0 / norm);
        for (std::size_t j = 0; j < m.cols; ++j) o[j] = r[j] * inv;
    }
}

}  // namespace detail

/// Affinity values together with the normalized factors that produced
/// them, so a following backward pass does not renormalize.
template <typename T>
struct CosineAffinity {
    Mat<T> values;
    Mat<T> c_normalized, v_normalized;
    std::vector<double> c_norms, v_norms;
};

template <typename T>
CosineAffinity<T> affinity_cached(const Mat<T>& commentary, const Mat<T>& frames) {
    if (commentary.cols != frames.cols)
        throw std::invalid_argument("affinity: embedding dims disagree (" +
                                    std::to_string(commentary.cols) + " vs " +
                                    std::to_string(frames.cols) + ")");
    CosineAffinity<T> out;
    detail::normalize_rows(commentary, out.c_normalized, out.c_norms, "commentary");
    detail::normalize_rows(frames, out.v_normalized, out.v_norms, "frame");
    matmul_nt(out.c_normalized, out.v_normalized, out.values);
    return out;
}

/// Entrywise cosine similarity between commentary rows and frame rows.
template <typename T>
Mat<T> affinity(const Mat<T>& commentary, const Mat<T>& frames) {
    return affinity_cached(commentary, frames).values;
}

template <typename T>
struct AlignLoss {
    double value = 0.0;
    Mat<T> grad_affinity;  // dL/dA, same shape as the affinity matrix
};

/// Mean over rows of -log(softmax mass on the positive frames):
///   L = -(1/k) sum_i log( sum_j Y[i,j] exp(A[i,j]) / sum_j exp(A[i,j]) )
/// Stabilized with log-sum-exp; accumulation in double.
template <typename T>
AlignLoss<T> align_loss(const Mat<T>& a, const LabelMatrix& y) {
    if (a.rows != y.rows || a.cols != y.cols)
        throw std::invalid_argument("align_loss: affinity is " + std::to_string(a.rows) + "x" +
                                    std::to_string(a.cols) + " but labels are " +
                                    std::to_string(y.rows) + "x" + std::to_string(y.cols));
    if (a.rows == 0 || a.cols == 0) throw std::invalid_argument("align_loss: empty input");

    AlignLoss<T> result;
    result.grad_affinity.resize_for_overwrite(a.rows, a.cols);
    const double inv_k = 1.0 / static_cast<double>(a.rows);
    double total = 0.0;
    std::vector<double> shifted(a.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const T* row = a.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < a.cols; ++j)
            mx = std::max(mx, static_cast<double>(row[j]));
        double sum_all = 0.0, sum_pos = 0.0;
        bool has_pos = false;
        for (std::size_t j = 0; j < a.cols; ++j) {
            const double e = std::exp(static_cast<double>(row[j]) - mx);
            shifted[j] = e;
            sum_all += e;
            if (y.at(i, j)) {
                sum_pos += e;
                has_pos = true;
            }
        }
        if (!has_pos)
            throw std::invalid_argument("align_loss: label row " + std::to_string(i) +
                                        " has no positive");
        total += std::log(sum_all) - std::log(sum_pos);
        T* g = result.grad_affinity.row(i);
        for (std::size_t j = 0; j < a.cols; ++j) {
            const double p_all = shifted[j] / sum_all;
            const double p_pos = y.at(i, j) ? shifted[j] / sum_pos : 0.0;
            g[j] = static_cast<T>((p_all - p_pos) * inv_k);
        }
    }
    result.value = total * inv_k;
    return result;
}

/// Backpropagates dL/dA through the cosine affinity to the raw embedding
/// rows, reusing the normalized factors cached by affinity_cached. Either
/// output may be null when that side is not trained.
template <typename T>
void affinity_backward_cached(const CosineAffinity<T>& cache, const Mat<T>& grad_a,
                              Mat<T>* grad_commentary, Mat<T>* grad_frames) {
    const Mat<T>& a = cache.values;
    if (!a.same_shape(grad_a))
        throw std::invalid_argument("affinity_backward: shape mismatch");

    if (grad_commentary) {
        // dC_i = (G V^ - rowsum(G o A) C^_i) / |C_i|
        matmul_nn(grad_a, cache.v_normalized, *grad_commentary);
        for (std::size_t i = 0; i < a.rows; ++i) {
            const T* ga = grad_a.row(i);
            const T* ar = a.row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < a.cols; ++j)
                s += static_cast<double>(ga[j]) * static_cast<double>(ar[j]);
            T* out = grad_commentary->row(i);
            const T* u = cache.c_normalized.row(i);
            const T inv = static_cast<T>(1.0 / cache.c_norms[i]);
            const T sv = static_cast<T>(s);
            for (std::size_t j = 0; j < cache.c_normalized.cols; ++j)
                out[j] = (out[j] - sv * u[j]) * inv;
        }
    }
    if (grad_frames) {
        matmul_tn(grad_a, cache.c_normalized, *grad_frames);
        for (std::size_t j = 0; j < a.cols; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows; ++i)
                s += static_cast<double>(grad_a.at(i, j)) * static_cast<double>(a.at(i, j));
            T* out = grad_frames->row(j);
            const T* v = cache.v_normalized.row(j);
            const T inv = static_cast<T>(1.0 / cache.v_norms[j]);
            const T sv = static_cast<T>(s);
            for (std::size_t jj = 0; jj < cache.v_normalized.cols; ++jj)
                out[jj] = (out[jj] - sv * v[jj]) * inv;
        }
    }
}

/// Standalone form: recomputes the normalized factors of (commentary,
/// frames). a must be their affinity.
template <typename T>
void affinity_backward(const Mat<T>& commentary, const Mat<T>& frames, const Mat<T>& a,
                       const Mat<T>& grad_a, Mat<T>* grad_commentary, Mat<T>* grad_frames) {
    if (a.rows != commentary.rows || a.cols != frames.rows)
        throw std::invalid_argument("affinity_backward: shape mismatch");
    CosineAffinity<T> cache;
    detail::normalize_rows(commentary, cache.c_normalized, cache.c_norms, "commentary");
    detail::normalize_rows(frames, cache.v_normalized, cache.v_norms, "frame");
    cache.values = a;
    affinity_backward_cached(cache, grad_a, grad_commentary, grad_frames);
}

}  // namespace alignkit
