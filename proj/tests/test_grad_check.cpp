#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <alignkit/grad_check.hpp>

#include <cmath>
#include <limits>
#include <vector>

using namespace alignkit;

TEST_CASE("linear loss checks out to near machine precision") {
    const std::vector<double> coef = {2.0, -3.0, 0.5};
    auto loss = [&](std::span<const double> p) {
        double acc = 1.0;
        for (std::size_t i = 0; i < p.size(); ++i) acc += coef[i] * p[i];
        return acc;
    };
    std::vector<double> params = {0.3, -0.7, 1.1};
    auto report = grad_check(loss, params, coef);
    CHECK(report.max_rel_err < 1e-9);
    // params restored
    CHECK(params == std::vector<double>{0.3, -0.7, 1.1});
}

TEST_CASE("a corrupted gradient coordinate is caught") {
    const std::vector<double> coef = {2.0, -3.0, 0.5};
    auto loss = [&](std::span<const double> p) {
        double acc = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) acc += coef[i] * p[i];
        return acc;
    };
    std::vector<double> params = {0.3, -0.7, 1.1};
    std::vector<double> corrupted = coef;
    corrupted[1] += 0.1;
    auto report = grad_check(loss, params, corrupted);
    CHECK(report.max_rel_err > 1e-2);
    CHECK(report.worst_coord == 1);
}

TEST_CASE("quadratic loss passes at the documented tolerance") {
    auto loss = [](std::span<const double> p) {
        double acc = 0.0;
        for (double v : p) acc += 0.5 * v * v;
        return acc;
    };
    std::vector<double> params = {1.5, -2.0, 0.01};
    std::vector<double> analytic = params;
    auto report = grad_check(loss, params, analytic);
    CHECK(report.max_rel_err < 1e-4);
}

TEST_CASE("non-finite loss raises") {
    auto loss = [](std::span<const double> p) { return std::log(p[0]); };
    std::vector<double> params = {1e-6};  // crossing zero under the probe step
    std::vector<double> analytic = {1e6};
    CHECK_THROWS_AS(grad_check(loss, params, analytic), std::domain_error);
}

TEST_CASE("size mismatch is rejected") {
    auto loss = [](std::span<const double>) { return 0.0; };
    std::vector<double> params = {1.0, 2.0};
    std::vector<double> analytic = {0.0};
    CHECK_THROWS_AS(grad_check(loss, params, analytic), std::invalid_argument);
}
