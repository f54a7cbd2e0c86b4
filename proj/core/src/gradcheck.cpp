#include "emograph/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "emograph/error.hpp"

namespace emograph {

GradCheckReport grad_check(const std::function<double()>& loss,
                           const std::function<std::vector<double>()>& analytic_grad,
                           ParamStore& params, double eps) {
    if (!(eps > 0.0)) throw ArgumentError("grad_check: eps must be positive");
    const std::vector<double> analytic = analytic_grad();
    if (analytic.size() != params.size()) {
        throw DimensionError("grad_check: analytic gradient size mismatch");
    }

    GradCheckReport report;
    std::span<double> theta = params.values();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double saved = theta[i];
        theta[i] = saved + eps;
        const double up = loss();
        theta[i] = saved - eps;
        const double down = loss();
        theta[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down)) {
            throw NumericError("grad_check: non-finite loss at coordinate " + std::to_string(i) +
                               " (" + params.segment_of_coordinate(i).name + ")");
        }
        const double numeric = (up - down) / (2.0 * eps);
        const double a = analytic[i];
        const double rel =
            std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_coordinate = i;
            report.worst_segment = params.segment_of_coordinate(i).name;
            report.analytic_at_worst = a;
            report.numeric_at_worst = numeric;
        }
    }
    return report;
}

}  // namespace emograph
