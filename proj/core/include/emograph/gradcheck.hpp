#pragma once

#include <functional>
#include <string>
#include <vector>

#include "emograph/param_store.hpp"

namespace emograph {

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_coordinate = 0;
    std::string worst_segment;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

// Central-difference verification of an analytic gradient.
//
// `loss` must be a deterministic function of the current store values
// (dropout off, fixed data). `analytic_grad` returns dLoss/dtheta for the
// current values, one entry per flat coordinate. Relative error per
// coordinate is |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<std::vector<double>()>& analytic_grad,
                           ParamStore& params, double eps);

}  // namespace emograph
