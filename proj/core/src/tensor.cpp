#include "emograph/tensor.hpp"

#include <cmath>

#include "emograph/error.hpp"

namespace emograph {

bool all_finite(std::span<const double> xs) {
    for (const double x : xs) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

Vector Vector::validated(std::vector<double> xs) {
    if (!all_finite(xs)) throw NumericError("vector contains non-finite elements");
    Vector v;
    v.xs_ = std::move(xs);
    return v;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

}  // namespace emograph
