#include "emograph/optimizer.hpp"

#include <cmath>

#include "emograph/error.hpp"

namespace emograph {

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw DimensionError("adam_step: parameter/gradient/state size mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

}  // namespace emograph
