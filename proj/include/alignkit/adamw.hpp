#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alignkit {

struct AdamWConfig {
    double lr = 5e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

/// One named parameter block and its gradient for an optimizer step.
template <typename T>
struct ParamBlock {
    std::string_view name;
    std::span<T> values;
    std::span<const T> grads;
};

/// AdamW with decoupled weight decay. Moment buffers are laid out per block
/// in the order of the first step() call; block shapes must stay fixed.
template <typename T>
class AdamW {
public:
    explicit AdamW(AdamWConfig cfg = {}) : cfg_(cfg) {}

    const AdamWConfig& config() const { return cfg_; }
    std::uint64_t step_count() const { return step_; }

    void step(std::span<const ParamBlock<T>> blocks) {
        if (m_.empty()) {
            m_.reserve(blocks.size());
            v_.reserve(blocks.size());
            for (const auto& b : blocks) {
                m_.emplace_back(b.values.size(), T(0));
                v_.emplace_back(b.values.size(), T(0));
            }
        } else if (m_.size() != blocks.size()) {
            throw std::invalid_argument("adamw: block count changed between steps");
        }

        for (const auto& b : blocks) {
            if (b.values.size() != b.grads.size())
                throw std::invalid_argument("adamw: parameter/gradient size mismatch in block '" +
                                            std::string(b.name) + "'");
            // g * 0 stays 0 for finite g and goes NaN for inf/NaN; eight
            // independent accumulator lanes keep the scan vectorizable
            T poison[8] = {};
            const T* g = b.grads.data();
            const std::size_t n = b.grads.size();
            std::size_t i = 0;
            for (; i + 8 <= n; i += 8)
                for (std::size_t u = 0; u < 8; ++u) poison[u] += g[i + u] * T(0);
            for (; i < n; ++i) poison[0] += g[i] * T(0);
            T total = T(0);
            for (std::size_t u = 0; u < 8; ++u) total += poison[u];
            if (!(total == T(0)))
                throw std::domain_error("adamw: non-finite gradient in block '" +
                                        std::string(b.name) + "'");
        }

        ++step_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));

        const T lr = static_cast<T>(cfg_.lr);
        const T beta1 = static_cast<T>(cfg_.beta1);
        const T beta2 = static_cast<T>(cfg_.beta2);
        const T one_m_beta1 = static_cast<T>(1.0 - cfg_.beta1);
        const T one_m_beta2 = static_cast<T>(1.0 - cfg_.beta2);
        const T eps = static_cast<T>(cfg_.eps);
        const T wd = static_cast<T>(cfg_.weight_decay);
        const T inv_bc1 = static_cast<T>(1.0 / bc1);
        const T inv_bc2 = static_cast<T>(1.0 / bc2);

        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& b = blocks[bi];
            if (b.values.size() != m_[bi].size())
                throw std::invalid_argument("adamw: block size changed in '" +
                                            std::string(b.name) + "'");
            T* p = b.values.data();
            const T* g = b.grads.data();
            T* m = m_[bi].data();
            T* v = v_[bi].data();
            const std::size_t n = b.values.size();
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = beta1 * m[i] + one_m_beta1 * g[i];
                v[i] = beta2 * v[i] + one_m_beta2 * g[i] * g[i];
                const T mhat = m[i] * inv_bc1;
                const T vhat = v[i] * inv_bc2;
                p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + wd * p[i]);
            }
        }
    }

private:
    AdamWConfig cfg_;
    std::uint64_t step_ = 0;
    std::vector<std::vector<T>> m_, v_;
};

}  // namespace alignkit
