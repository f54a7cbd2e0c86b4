#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emograph {

// Adam with bias correction. Defaults are the standard (0.9, 0.999, 1e-8).
struct AdamState {
    explicit AdamState(std::size_t n_params, double beta1 = 0.9, double beta2 = 0.999,
                       double eps = 1e-8)
        : m(n_params, 0.0), v(n_params, 0.0), beta1(beta1), beta2(beta2), eps(eps) {}

    std::vector<double> m, v;
    std::size_t step = 0;
    double beta1, beta2, eps;
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr);

}  // namespace emograph
