#pragma once

#include <cstddef>
#include <span>

#include "emograph/rng.hpp"
#include "emograph/tensor.hpp"

namespace emograph {

// Forward kernels for the differentiable primitives. Shape consistency is
// checked here; the gradient contracts live in Tape::backward.

// W*x + b. cols(W) == len(x), rows(W) == len(b).
Vector linear(ConstMatrixView w, std::span<const double> b, const Vector& x);
Vector linear_no_bias(ConstMatrixView w, const Vector& x);

// W^T * y, the input-gradient half of linear.
Vector matvec_transposed(ConstMatrixView w, std::span<const double> y);

Vector relu(const Vector& x);
Vector sigmoid(const Vector& x);
Vector tanh_elem(const Vector& x);

// Parts joined in order; the list must be non-empty.
Vector concat(std::span<const Vector* const> parts);

// Elementwise arithmetic mean. Computed as a running mean in input order,
// which keeps mean({v, v, ..., v}) == v bit-exact.
Vector mean_reduce(std::span<const Vector* const> xs);

struct SoftmaxCrossEntropy {
    double loss = 0.0;
    Vector probs;
};

// Max-subtracted softmax with negative log likelihood of `gold`.
SoftmaxCrossEntropy softmax_cross_entropy(const Vector& logits, std::size_t gold);

// Inverted-dropout mask: entries are 0 with probability p, else 1/(1-p).
Vector dropout_mask(std::size_t n, double p, Rng& rng);

// Smallest index attaining the maximum.
std::size_t argmax(const Vector& probs);

}  // namespace emograph
