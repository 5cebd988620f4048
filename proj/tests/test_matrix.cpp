#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <alignkit/matrix.hpp>
#include <alignkit/rng.hpp>

using namespace alignkit;

namespace {

// straightforward oracle for all three product forms
template <typename T>
Mat<T> naive_nn(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            double acc = 0;
            for (std::size_t p = 0; p < a.cols; ++p)
                acc += static_cast<double>(a.at(i, p)) * static_cast<double>(b.at(p, j));
            c.at(i, j) = static_cast<T>(acc);
        }
    return c;
}

template <typename T>
Mat<T> random_mat(std::size_t r, std::size_t c, Rng& rng) {
    Mat<T> m(r, c);
    for (auto& v : m.data) v = static_cast<T>(rng.uniform(-1.0, 1.0));
    return m;
}

template <typename T>
Mat<T> transpose(const Mat<T>& m) {
    Mat<T> t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t.at(j, i) = m.at(i, j);
    return t;
}

}  // namespace

TEST_CASE("matmul variants agree with the naive oracle") {
    Rng rng(42);
    for (int iter = 0; iter < 20; ++iter) {
        const std::size_t m = 1 + rng.below(9);
        const std::size_t k = 1 + rng.below(9);
        const std::size_t n = 1 + rng.below(9);
        auto a = random_mat<double>(m, k, rng);
        auto b = random_mat<double>(k, n, rng);
        auto want = naive_nn(a, b);

        Mat<double> c;
        matmul_nn(a, b, c);
        REQUIRE(c.rows == m);
        REQUIRE(c.cols == n);
        for (std::size_t i = 0; i < c.data.size(); ++i)
            CHECK(c.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));

        Mat<double> ct;
        matmul_tn(transpose(a), b, ct);
        for (std::size_t i = 0; i < ct.data.size(); ++i)
            CHECK(ct.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));

        Mat<double> cn;
        matmul_nt(a, transpose(b), cn);
        for (std::size_t i = 0; i < cn.data.size(); ++i)
            CHECK(cn.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("matmul float path matches the double oracle to float precision") {
    Rng rng(7);
    auto a = random_mat<float>(5, 16, rng);
    auto b = random_mat<float>(16, 3, rng);
    auto want = naive_nn(a, b);
    Mat<float> c;
    matmul_nn(a, b, c);
    for (std::size_t i = 0; i < c.data.size(); ++i)
        CHECK(c.data[i] == doctest::Approx(want.data[i]).epsilon(1e-5));
}

TEST_CASE("matmul rejects mismatched inner dimensions") {
    Mat<double> a(2, 3), b(4, 2), c;
    CHECK_THROWS_AS(matmul_nn(a, b, c), std::invalid_argument);
    CHECK_THROWS_AS(matmul_tn(a, b, c), std::invalid_argument);
    Mat<double> bt(2, 4);
    CHECK_THROWS_AS(matmul_nt(a, bt, c), std::invalid_argument);
}
