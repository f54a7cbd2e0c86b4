#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace emograph {

// Dense fp64 vector. Training and verification both run in double
// precision so finite-difference tolerances stay meaningful.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0) : xs_(n, value) {}
    Vector(std::initializer_list<double> xs) : xs_(xs) {}

    // Boundary constructor: rejects NaN/Inf entries.
    static Vector validated(std::vector<double> xs);

    std::size_t size() const noexcept { return xs_.size(); }
    bool empty() const noexcept { return xs_.empty(); }

    double& operator[](std::size_t i) noexcept { return xs_[i]; }
    const double& operator[](std::size_t i) const noexcept { return xs_[i]; }

    double* data() noexcept { return xs_.data(); }
    const double* data() const noexcept { return xs_.data(); }

    std::span<double> span() noexcept { return xs_; }
    std::span<const double> span() const noexcept { return xs_; }

    std::vector<double>& raw() noexcept { return xs_; }
    const std::vector<double>& raw() const noexcept { return xs_; }

    void fill(double v) { xs_.assign(xs_.size(), v); }

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> xs_;
};

struct ConstMatrixView {
    const double* data = nullptr;
    std::size_t rows = 0, cols = 0;

    double at(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
    const double* row(std::size_t r) const noexcept { return data + r * cols; }
};

struct MatrixView {
    double* data = nullptr;
    std::size_t rows = 0, cols = 0;

    double& at(std::size_t r, std::size_t c) const noexcept { return data[r * cols + c]; }
    double* row(std::size_t r) const noexcept { return data + r * cols; }
    ConstMatrixView cview() const noexcept { return {data, rows, cols}; }
};

// Owning row-major matrix. Parameter matrices live in the ParamStore's
// flat array; this type backs oracles, fixtures and standalone math.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), xs_(rows * cols, value) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& at(std::size_t r, std::size_t c) noexcept { return xs_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const noexcept { return xs_[r * cols_ + c]; }

    MatrixView view() noexcept { return {xs_.data(), rows_, cols_}; }
    ConstMatrixView cview() const noexcept { return {xs_.data(), rows_, cols_}; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> xs_;
};

bool all_finite(std::span<const double> xs);

}  // namespace emograph
