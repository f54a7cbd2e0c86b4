#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "emograph/tensor.hpp"

namespace emograph {

// All trainable scalars in one flat array, addressable as named matrix or
// vector segments. The flat layout is the storage, so the optimizer,
// finite-difference checking and checkpointing see every parameter with
// zero translation. Segments are declared up front, then finalize()
// allocates; views are only valid afterwards.
class ParamStore {
public:
    using SegId = std::size_t;

    struct Segment {
        std::string name;
        std::size_t offset = 0;
        std::size_t rows = 0, cols = 0;  // cols == 1 for vectors

        std::size_t size() const noexcept { return rows * cols; }
    };

    SegId add_matrix(std::string name, std::size_t rows, std::size_t cols);
    SegId add_vector(std::string name, std::size_t len) { return add_matrix(std::move(name), len, 1); }

    void finalize();
    bool finalized() const noexcept { return finalized_; }

    std::size_t size() const noexcept { return total_; }
    std::size_t segment_count() const noexcept { return segments_.size(); }
    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const Segment& segment(SegId id) const { return segments_.at(id); }

    // Name of the segment containing flat coordinate `i`.
    const Segment& segment_of_coordinate(std::size_t i) const;

    std::span<double> values();
    std::span<const double> values() const;
    std::span<double> grads();
    std::span<const double> grads() const;
    void zero_grads();

    MatrixView mat(SegId id);
    ConstMatrixView cmat(SegId id) const;
    MatrixView grad_mat(SegId id);
    std::span<double> seg_values(SegId id);
    std::span<const double> seg_values(SegId id) const;
    std::span<double> seg_grads(SegId id);

private:
    void require_finalized() const;

    std::vector<Segment> segments_;
    std::vector<double> values_;
    std::vector<double> grads_;
    std::size_t total_ = 0;
    bool finalized_ = false;
};

}  // namespace emograph
