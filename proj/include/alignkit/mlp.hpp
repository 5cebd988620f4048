#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alignkit/matrix.hpp"
#include "alignkit/rng.hpp"

namespace alignkit {

/// Two-layer projection head: relu(x*W1 + b1)*W2 + b2.
/// Templated on the scalar type: float for the trained artifact, double for
/// gradient-check oracles.
template <typename T>
struct MlpHead {
    Mat<T> w1;          // d_in x d_h
    std::vector<T> b1;  // d_h
    Mat<T> w2;          // d_h x d_out
    std::vector<T> b2;  // d_out

    std::size_t d_in() const { return w1.rows; }
    std::size_t d_h() const { return w1.cols; }
    std::size_t d_out() const { return w2.cols; }
};

/// Uniform init in +-1/sqrt(fan_in) for weights and biases of each layer,
/// drawn in fixed order: w1 row-major, b1, w2 row-major, b2.
template <typename T>
MlpHead<T> init_head(std::size_t d_in, std::size_t d_h, std::size_t d_out, Rng& rng) {
    MlpHead<T> head;
    head.w1.resize(d_in, d_h);
    head.b1.assign(d_h, T(0));
    head.w2.resize(d_h, d_out);
    head.b2.assign(d_out, T(0));
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(d_in));
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(d_h));
    for (auto& w : head.w1.data) w = static_cast<T>(rng.uniform(-bound1, bound1));
    for (auto& b : head.b1) b = static_cast<T>(rng.uniform(-bound1, bound1));
    for (auto& w : head.w2.data) w = static_cast<T>(rng.uniform(-bound2, bound2));
    for (auto& b : head.b2) b = static_cast<T>(rng.uniform(-bound2, bound2));
    return head;
}

/// Hidden-layer values cached by the forward pass for reuse in backward.
template <typename T>
struct HeadActivations {
    Mat<T> hidden;  // relu(x*W1 + b1), m x d_h
};

template <typename T>
struct HeadGrads {
    Mat<T> w1;
    std::vector<T> b1;
    Mat<T> w2;
    std::vector<T> b2;
};

namespace detail {

template <typename T>
void add_bias_rows(Mat<T>& m, const std::vector<T>& bias) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        T* r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += bias[j];
    }
}

template <typename T>
void col_sums(const Mat<T>& m, std::vector<T>& out) {
    out.assign(m.cols, T(0));
    for (std::size_t i = 0; i < m.rows; ++i) {
        const T* r = m.row(i);
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += r[j];
    }
}

}  // namespace detail

/// Maps each row of x independently. acts, when given, receives the hidden
/// activations needed by head_backward.
template <typename T>
Mat<T> head_forward(const MlpHead<T>& head, const Mat<T>& x, HeadActivations<T>* acts = nullptr) {
    if (x.cols != head.d_in())
        throw std::invalid_argument("head_forward: input has " + std::to_string(x.cols) +
                                    " columns, head expects " + std::to_string(head.d_in()));
    Mat<T> hidden;
    matmul_nn(x, head.w1, hidden);
    detail::add_bias_rows(hidden, head.b1);
    for (auto& v : hidden.data) v = v > T(0) ? v : T(0);

    Mat<T> out;
    matmul_nn(hidden, head.w2, out);
    detail::add_bias_rows(out, head.b2);
    if (acts) acts->hidden = std::move(hidden);
    return out;
}

/// Analytic gradients of head_forward with respect to parameters and,
/// optionally, the input (dx may be null when x is data rather than a
/// differentiable upstream value).
template <typename T>
void head_backward(const MlpHead<T>& head, const Mat<T>& x, const HeadActivations<T>& acts,
                   const Mat<T>& upstream, HeadGrads<T>& grads, Mat<T>* dx = nullptr) {
    if (upstream.rows != x.rows || upstream.cols != head.d_out())
        throw std::invalid_argument("head_backward: upstream gradient is " +
                                    std::to_string(upstream.rows) + "x" +
                                    std::to_string(upstream.cols) + ", expected " +
                                    std::to_string(x.rows) + "x" + std::to_string(head.d_out()));
    if (acts.hidden.rows != x.rows || acts.hidden.cols != head.d_h())
        throw std::invalid_argument("head_backward: stale activations");

    matmul_tn(acts.hidden, upstream, grads.w2);
    detail::col_sums(upstream, grads.b2);

    Mat<T> dhidden;
    matmul_nt(upstream, head.w2, dhidden);
    // relu mask: hidden > 0 picks the active units
    for (std::size_t i = 0; i < dhidden.data.size(); ++i)
        if (!(acts.hidden.data[i] > T(0))) dhidden.data[i] = T(0);

    matmul_tn(x, dhidden, grads.w1);
    detail::col_sums(dhidden, grads.b1);

    if (dx) matmul_nt(dhidden, head.w1, *dx);
}

}  // namespace alignkit
