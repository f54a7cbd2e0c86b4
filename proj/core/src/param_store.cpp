#include "emograph/param_store.hpp"

#include <algorithm>

#include "emograph/error.hpp"

namespace emograph {

ParamStore::SegId ParamStore::add_matrix(std::string name, std::size_t rows, std::size_t cols) {
    if (finalized_) throw ArgumentError("ParamStore: cannot add segments after finalize");
    if (rows == 0 || cols == 0) throw ArgumentError("ParamStore: empty segment " + name);
    for (const Segment& s : segments_) {
        if (s.name == name) throw ArgumentError("ParamStore: duplicate segment " + name);
    }
    Segment seg;
    seg.name = std::move(name);
    seg.offset = total_;
    seg.rows = rows;
    seg.cols = cols;
    total_ += seg.size();
    segments_.push_back(std::move(seg));
    return segments_.size() - 1;
}

void ParamStore::finalize() {
    if (finalized_) return;
    values_.assign(total_, 0.0);
    grads_.assign(total_, 0.0);
    finalized_ = true;
}

void ParamStore::require_finalized() const {
    if (!finalized_) throw ArgumentError("ParamStore: finalize() before accessing storage");
}

const ParamStore::Segment& ParamStore::segment_of_coordinate(std::size_t i) const {
    for (const Segment& s : segments_) {
        if (i >= s.offset && i < s.offset + s.size()) return s;
    }
    throw ArgumentError("ParamStore: coordinate out of range");
}

std::span<double> ParamStore::values() {
    require_finalized();
    return values_;
}

std::span<const double> ParamStore::values() const {
    require_finalized();
    return values_;
}

std::span<double> ParamStore::grads() {
    require_finalized();
    return grads_;
}

std::span<const double> ParamStore::grads() const {
    require_finalized();
    return grads_;
}

void ParamStore::zero_grads() {
    require_finalized();
    std::fill(grads_.begin(), grads_.end(), 0.0);
}

MatrixView ParamStore::mat(SegId id) {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {values_.data() + s.offset, s.rows, s.cols};
}

ConstMatrixView ParamStore::cmat(SegId id) const {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {values_.data() + s.offset, s.rows, s.cols};
}

MatrixView ParamStore::grad_mat(SegId id) {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {grads_.data() + s.offset, s.rows, s.cols};
}

std::span<double> ParamStore::seg_values(SegId id) {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {values_.data() + s.offset, s.size()};
}

std::span<const double> ParamStore::seg_values(SegId id) const {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {values_.data() + s.offset, s.size()};
}

std::span<double> ParamStore::seg_grads(SegId id) {
    require_finalized();
    const Segment& s = segments_.at(id);
    return {grads_.data() + s.offset, s.size()};
}

}  // namespace emograph
