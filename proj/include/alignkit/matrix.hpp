#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace alignkit {

/// Dense row-major matrix.
template <typename T>
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<T> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, T fill = T(0)) : rows(r), cols(c), data(r * c, fill) {}

    T* row(std::size_t i) { return data.data() + i * cols; }
    const T* row(std::size_t i) const { return data.data() + i * cols; }

    T& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const T& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    void resize(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        data.assign(r * c, T(0));
    }

    /// Resize without the zero fill; every element must be written before
    /// being read. Used by kernels that overwrite their output.
    void resize_for_overwrite(std::size_t r, std::size_t c) {
        rows = r;
        cols = c;
        data.resize(r * c);
    }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

// C = A * B. C is resized; inner dimensions must agree.
void matmul_nn(const Mat<float>& a, const Mat<float>& b, Mat<float>& c);
void matmul_nn(const Mat<double>& a, const Mat<double>& b, Mat<double>& c);

// C = A^T * B  (A is k x m, B is k x n, C becomes m x n).
void matmul_tn(const Mat<float>& a, const Mat<float>& b, Mat<float>& c);
void matmul_tn(const Mat<double>& a, const Mat<double>& b, Mat<double>& c);

// C = A * B^T  (A is m x k, B is n x k, C becomes m x n).
void matmul_nt(const Mat<float>& a, const Mat<float>& b, Mat<float>& c);
void matmul_nt(const Mat<double>& a, const Mat<double>& b, Mat<double>& c);

}  // namespace alignkit
