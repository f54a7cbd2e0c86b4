#include "emograph/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emograph/error.hpp"

namespace emograph {

namespace {

void require_dims(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

}  // namespace

Vector linear(ConstMatrixView w, std::span<const double> b, const Vector& x) {
    require_dims(w.cols == x.size(), "linear: cols(W)=" + std::to_string(w.cols) +
                                         " != len(x)=" + std::to_string(x.size()));
    require_dims(w.rows == b.size(), "linear: rows(W)=" + std::to_string(w.rows) +
                                         " != len(b)=" + std::to_string(b.size()));
    Vector y(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.row(r);
        double acc = b[r];
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Vector linear_no_bias(ConstMatrixView w, const Vector& x) {
    require_dims(w.cols == x.size(), "linear: cols(W)=" + std::to_string(w.cols) +
                                         " != len(x)=" + std::to_string(x.size()));
    Vector y(w.rows);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.row(r);
        double acc = 0.0;
        for (std::size_t c = 0; c < w.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Vector matvec_transposed(ConstMatrixView w, std::span<const double> y) {
    require_dims(w.rows == y.size(), "matvec_transposed: rows(W) != len(y)");
    Vector x(w.cols);
    for (std::size_t r = 0; r < w.rows; ++r) {
        const double* row = w.row(r);
        const double yr = y[r];
        for (std::size_t c = 0; c < w.cols; ++c) x[c] += row[c] * yr;
    }
    return x;
}

Vector relu(const Vector& x) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    return y;
}

Vector sigmoid(const Vector& x) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-x[i]));
    return y;
}

Vector tanh_elem(const Vector& x) {
    Vector y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
    return y;
}

Vector concat(std::span<const Vector* const> parts) {
    if (parts.empty()) throw ArgumentError("concat: empty part list");
    std::size_t total = 0;
    for (const Vector* p : parts) total += p->size();
    Vector y(total);
    std::size_t at = 0;
    for (const Vector* p : parts) {
        std::copy(p->data(), p->data() + p->size(), y.data() + at);
        at += p->size();
    }
    return y;
}

Vector mean_reduce(std::span<const Vector* const> xs) {
    if (xs.empty()) throw ArgumentError("mean_reduce: empty input list");
    const std::size_t n = xs.front()->size();
    Vector m = *xs.front();
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const Vector& x = *xs[k];
        require_dims(x.size() == n, "mean_reduce: length mismatch");
        const double inv = 1.0 / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < n; ++i) m[i] += (x[i] - m[i]) * inv;
    }
    return m;
}

SoftmaxCrossEntropy softmax_cross_entropy(const Vector& logits, std::size_t gold) {
    if (logits.empty()) throw ArgumentError("softmax_cross_entropy: empty logits");
    if (gold >= logits.size()) {
        throw ArgumentError("softmax_cross_entropy: gold index " + std::to_string(gold) +
                            " out of range for " + std::to_string(logits.size()) + " classes");
    }
    const double mx = *std::max_element(logits.data(), logits.data() + logits.size());
    SoftmaxCrossEntropy out;
    out.probs = Vector(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out.probs[i] = std::exp(logits[i] - mx);
        sum += out.probs[i];
    }
    for (std::size_t i = 0; i < logits.size(); ++i) out.probs[i] /= sum;
    out.loss = std::log(sum) - (logits[gold] - mx);
    return out;
}

Vector dropout_mask(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("dropout: rate must lie in [0, 1)");
    Vector mask(n);
    const double keep_scale = 1.0 / (1.0 - p);
    for (std::size_t i = 0; i < n; ++i) mask[i] = rng.uniform01() < p ? 0.0 : keep_scale;
    return mask;
}

std::size_t argmax(const Vector& probs) {
    if (probs.empty()) throw ArgumentError("argmax: empty vector");
    return static_cast<std::size_t>(
        std::max_element(probs.data(), probs.data() + probs.size()) - probs.data());
}

}  // namespace emograph
