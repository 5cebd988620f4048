#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace alignkit {

struct GradCheckReport {
    double max_rel_err = 0.0;
    std::size_t worst_coord = 0;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

/// Compares an analytic gradient against central finite differences,
/// coordinate by coordinate. loss must be a deterministic function of
/// params; params are perturbed in place and restored.
///
/// Differences below abs_floor count as zero error, so near-zero gradient
/// coordinates do not blow up the relative measure.
template <typename LossFn>
GradCheckReport grad_check(LossFn&& loss, std::span<double> params,
                           std::span<const double> analytic_grad, double h = 1e-4,
                           double abs_floor = 1e-7) {
    if (params.size() != analytic_grad.size())
        throw std::invalid_argument("grad_check: gradient size does not match parameter size");
    GradCheckReport report;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = loss(std::span<const double>(params.data(), params.size()));
        params[i] = saved - h;
        const double down = loss(std::span<const double>(params.data(), params.size()));
        params[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw std::domain_error("grad_check: non-finite loss near coordinate " +
                                    std::to_string(i));
        const double numeric = (up - down) / (2.0 * h);
        const double diff = std::abs(numeric - analytic_grad[i]);
        const double denom = std::max(std::abs(numeric), std::abs(analytic_grad[i]));
        const double rel = diff <= abs_floor ? 0.0 : diff / denom;
        if (rel > report.max_rel_err) {
            report.max_rel_err = rel;
            report.worst_coord = i;
            report.analytic_at_worst = analytic_grad[i];
            report.numeric_at_worst = numeric;
        }
    }
    return report;
}

}  // namespace alignkit
