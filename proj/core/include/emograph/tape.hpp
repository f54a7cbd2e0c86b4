#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emograph/ops.hpp"
#include "emograph/param_store.hpp"
#include "emograph/rng.hpp"
#include "emograph/tensor.hpp"

namespace emograph {

// Handle to a tape node. Valid only for the tape that produced it, until
// the next reset().
struct Var {
    std::uint32_t idx = 0;
};

// Minimal reverse-mode tape. Nodes are vectors; parameter matrices stay in
// the ParamStore and participate through the linear ops, which accumulate
// their gradients straight into the store's flat grad array. Creation
// order is a topological order, so backward() is a single reverse sweep.
//
// Gradient contracts (d = upstream gradient):
//   linear        dW += d x^T, db += d, dx += W^T d
//   relu          dx += d * [x > 0]          (subgradient at 0 is 0)
//   sigmoid/tanh  via the stored output
//   add           both parents += d
//   mul           da += d*b, db += d*a
//   concat/slice  segment routing
//   mean          each parent += d / n
//   dropout       dx += d * mask
//   softmax_ce    dlogits += d * (probs - onehot(gold))
class Tape {
public:
    explicit Tape(ParamStore* params = nullptr) : params_(params) {}

    void reset();

    Var input(Vector v);
    Var zeros(std::size_t n) { return input(Vector(n)); }

    // Leaf bound to a vector segment of the ParamStore; backward
    // accumulates into the store's gradient for that segment.
    Var param_vector(ParamStore::SegId seg);

    Var linear(ParamStore::SegId w, ParamStore::SegId b, Var x);
    Var linear_no_bias(ParamStore::SegId w, Var x);
    Var relu(Var x);
    Var sigmoid(Var x);
    Var tanh_elem(Var x);
    Var add(Var a, Var b);
    Var mul(Var a, Var b);
    Var concat(std::span<const Var> parts);
    Var slice(Var x, std::size_t offset, std::size_t len);
    Var mean(std::span<const Var> xs);
    Var dropout(Var x, double p, Rng& rng, bool training);

    struct CrossEntropy {
        Var loss;      // scalar node
        Vector probs;  // detached probability vector
    };
    CrossEntropy softmax_cross_entropy(Var logits, std::size_t gold);

    // Mean of scalar nodes (loss averaging).
    Var mean_scalars(std::span<const Var> xs);

    const Vector& value(Var v) const { return nodes_[v.idx].value; }
    const Vector& grad(Var v) const { return nodes_[v.idx].grad; }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    // Seeds d(loss)=1 and sweeps in reverse creation order. Zeroes the
    // parameter-store gradients first; unused parameters stay exactly zero.
    void backward(Var loss);

private:
    enum class Op : std::uint8_t {
        leaf,
        param_leaf,
        linear,
        linear_nb,
        relu,
        sigmoid,
        tanh_elem,
        add,
        mul,
        concat,
        slice,
        mean,
        dropout,
        softmax_ce,
        mean_scalars,
    };

    struct Node {
        Op op = Op::leaf;
        Vector value;
        Vector grad;
        std::uint32_t a = 0, b = 0;          // unary/binary parents
        std::uint32_t args_off = 0, args_len = 0;  // variadic parents
        std::size_t i0 = 0, i1 = 0;          // op payload (segments, offsets, gold)
        Vector aux;                          // dropout mask / softmax probs
        bool touched = false;
    };

    Var push(Node node);
    void require_params() const;
    void touch(std::uint32_t idx) { nodes_[idx].touched = true; }
    void accumulate(std::uint32_t idx, std::size_t at, double v) {
        nodes_[idx].grad[at] += v;
        nodes_[idx].touched = true;
    }

    ParamStore* params_ = nullptr;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> arg_pool_;
};

}  // namespace emograph
