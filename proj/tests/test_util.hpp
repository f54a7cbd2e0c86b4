#pragma once

#include <functional>
#include <vector>

#include "emograph/gradcheck.hpp"
#include "emograph/param_store.hpp"
#include "emograph/rng.hpp"
#include "emograph/tape.hpp"
#include "emograph/tensor.hpp"

namespace emograph::test {

inline Vector random_vector(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
    Vector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
    return v;
}

inline void randomize(ParamStore& store, Rng& rng, double lo = -0.8, double hi = 0.8) {
    for (double& x : store.values()) x = rng.uniform(lo, hi);
}

// Max relative error between the tape gradient of `expr` (which must end
// in a scalar node) and central finite differences over every store
// coordinate.
inline double fd_max_rel_error(ParamStore& store,
                               const std::function<Var(Tape&)>& expr, double eps = 1e-6) {
    Tape tape(&store);
    const auto loss_fn = [&]() {
        tape.reset();
        return tape.value(expr(tape))[0];
    };
    const auto grad_fn = [&]() {
        tape.reset();
        tape.backward(expr(tape));
        return std::vector<double>(store.grads().begin(), store.grads().end());
    };
    return grad_check(loss_fn, grad_fn, store, eps).max_rel_error;
}

}  // namespace emograph::test
