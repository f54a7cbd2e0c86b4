#include "emograph/tape.hpp"

#include <string>

#include "emograph/error.hpp"

namespace emograph {

void Tape::reset() {
    nodes_.clear();
    arg_pool_.clear();
}

Var Tape::push(Node node) {
    node.grad = Vector(node.value.size());
    nodes_.push_back(std::move(node));
    return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tape::require_params() const {
    if (params_ == nullptr) throw ArgumentError("Tape: no ParamStore bound for parameter op");
}

Var Tape::input(Vector v) {
    Node n;
    n.op = Op::leaf;
    n.value = std::move(v);
    return push(std::move(n));
}

Var Tape::param_vector(ParamStore::SegId seg) {
    require_params();
    const ParamStore::Segment& s = params_->segment(seg);
    if (s.cols != 1) throw ArgumentError("param_vector: segment " + s.name + " is not a vector");
    Node n;
    n.op = Op::param_leaf;
    n.i0 = seg;
    std::span<const double> values =
        static_cast<const ParamStore*>(params_)->seg_values(seg);
    n.value = Vector(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) n.value[i] = values[i];
    return push(std::move(n));
}

Var Tape::linear(ParamStore::SegId w, ParamStore::SegId b, Var x) {
    require_params();
    Node n;
    n.op = Op::linear;
    n.a = x.idx;
    n.i0 = w;
    n.i1 = b;
    n.value = emograph::linear(params_->cmat(w), params_->seg_values(b), nodes_[x.idx].value);
    return push(std::move(n));
}

Var Tape::linear_no_bias(ParamStore::SegId w, Var x) {
    require_params();
    Node n;
    n.op = Op::linear_nb;
    n.a = x.idx;
    n.i0 = w;
    n.value = emograph::linear_no_bias(params_->cmat(w), nodes_[x.idx].value);
    return push(std::move(n));
}

Var Tape::relu(Var x) {
    Node n;
    n.op = Op::relu;
    n.a = x.idx;
    n.value = emograph::relu(nodes_[x.idx].value);
    return push(std::move(n));
}

Var Tape::sigmoid(Var x) {
    Node n;
    n.op = Op::sigmoid;
    n.a = x.idx;
    n.value = emograph::sigmoid(nodes_[x.idx].value);
    return push(std::move(n));
}

Var Tape::tanh_elem(Var x) {
    Node n;
    n.op = Op::tanh_elem;
    n.a = x.idx;
    n.value = emograph::tanh_elem(nodes_[x.idx].value);
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    const Vector& va = nodes_[a.idx].value;
    const Vector& vb = nodes_[b.idx].value;
    if (va.size() != vb.size()) throw DimensionError("add: length mismatch");
    Node n;
    n.op = Op::add;
    n.a = a.idx;
    n.b = b.idx;
    n.value = va;
    for (std::size_t i = 0; i < vb.size(); ++i) n.value[i] += vb[i];
    return push(std::move(n));
}

Var Tape::mul(Var a, Var b) {
    const Vector& va = nodes_[a.idx].value;
    const Vector& vb = nodes_[b.idx].value;
    if (va.size() != vb.size()) throw DimensionError("mul: length mismatch");
    Node n;
    n.op = Op::mul;
    n.a = a.idx;
    n.b = b.idx;
    n.value = va;
    for (std::size_t i = 0; i < vb.size(); ++i) n.value[i] *= vb[i];
    return push(std::move(n));
}

Var Tape::concat(std::span<const Var> parts) {
    if (parts.empty()) throw ArgumentError("concat: empty part list");
    Node n;
    n.op = Op::concat;
    n.args_off = static_cast<std::uint32_t>(arg_pool_.size());
    n.args_len = static_cast<std::uint32_t>(parts.size());
    std::size_t total = 0;
    for (const Var p : parts) {
        arg_pool_.push_back(p.idx);
        total += nodes_[p.idx].value.size();
    }
    n.value = Vector(total);
    std::size_t at = 0;
    for (const Var p : parts) {
        const Vector& v = nodes_[p.idx].value;
        for (std::size_t i = 0; i < v.size(); ++i) n.value[at + i] = v[i];
        at += v.size();
    }
    return push(std::move(n));
}

Var Tape::slice(Var x, std::size_t offset, std::size_t len) {
    const Vector& v = nodes_[x.idx].value;
    if (offset + len > v.size()) throw ArgumentError("slice: range out of bounds");
    Node n;
    n.op = Op::slice;
    n.a = x.idx;
    n.i0 = offset;
    n.i1 = len;
    n.value = Vector(len);
    for (std::size_t i = 0; i < len; ++i) n.value[i] = v[offset + i];
    return push(std::move(n));
}

Var Tape::mean(std::span<const Var> xs) {
    if (xs.empty()) throw ArgumentError("mean: empty input list");
    const std::size_t dim = nodes_[xs.front().idx].value.size();
    Node n;
    n.op = Op::mean;
    n.args_off = static_cast<std::uint32_t>(arg_pool_.size());
    n.args_len = static_cast<std::uint32_t>(xs.size());
    // Running mean in argument order; exact for identical inputs.
    n.value = nodes_[xs.front().idx].value;
    arg_pool_.push_back(xs.front().idx);
    for (std::size_t k = 1; k < xs.size(); ++k) {
        const Vector& v = nodes_[xs[k].idx].value;
        if (v.size() != dim) throw DimensionError("mean: length mismatch");
        arg_pool_.push_back(xs[k].idx);
        const double inv = 1.0 / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < dim; ++i) n.value[i] += (v[i] - n.value[i]) * inv;
    }
    return push(std::move(n));
}

Var Tape::dropout(Var x, double p, Rng& rng, bool training) {
    if (!(p >= 0.0 && p < 1.0)) throw ArgumentError("dropout: rate must lie in [0, 1)");
    if (!training || p == 0.0) return x;  // identity, no node
    const Vector& v = nodes_[x.idx].value;
    Node n;
    n.op = Op::dropout;
    n.a = x.idx;
    n.aux = dropout_mask(v.size(), p, rng);
    n.value = Vector(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) n.value[i] = v[i] * n.aux[i];
    return push(std::move(n));
}

Tape::CrossEntropy Tape::softmax_cross_entropy(Var logits, std::size_t gold) {
    SoftmaxCrossEntropy ce = emograph::softmax_cross_entropy(nodes_[logits.idx].value, gold);
    Node n;
    n.op = Op::softmax_ce;
    n.a = logits.idx;
    n.i0 = gold;
    n.aux = ce.probs;
    n.value = Vector{ce.loss};
    const Var loss = push(std::move(n));
    return {loss, std::move(ce.probs)};
}

Var Tape::mean_scalars(std::span<const Var> xs) {
    if (xs.empty()) throw ArgumentError("mean_scalars: empty input list");
    Node n;
    n.op = Op::mean_scalars;
    n.args_off = static_cast<std::uint32_t>(arg_pool_.size());
    n.args_len = static_cast<std::uint32_t>(xs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const Vector& v = nodes_[xs[k].idx].value;
        if (v.size() != 1) throw DimensionError("mean_scalars: inputs must be scalars");
        arg_pool_.push_back(xs[k].idx);
        acc += (v[0] - acc) / static_cast<double>(k + 1);
    }
    n.value = Vector{acc};
    return push(std::move(n));
}

void Tape::backward(Var loss) {
    Node& top = nodes_.at(loss.idx);
    if (top.value.size() != 1) throw ArgumentError("backward: loss must be a scalar node");
    if (params_ != nullptr) params_->zero_grads();
    top.grad[0] = 1.0;
    top.touched = true;

    for (std::size_t k = nodes_.size(); k-- > 0;) {
        Node& n = nodes_[k];
        if (!n.touched) continue;
        const Vector& d = n.grad;
        switch (n.op) {
            case Op::leaf:
                break;
            case Op::param_leaf: {
                std::span<double> dp = params_->seg_grads(n.i0);
                for (std::size_t i = 0; i < d.size(); ++i) dp[i] += d[i];
                break;
            }
            case Op::linear:
            case Op::linear_nb: {
                const Vector& x = nodes_[n.a].value;
                MatrixView dw = params_->grad_mat(n.i0);
                ConstMatrixView w = params_->cmat(n.i0);
                Vector& dx = nodes_[n.a].grad;
                for (std::size_t r = 0; r < w.rows; ++r) {
                    const double dr = d[r];
                    if (dr == 0.0) continue;
                    double* dwr = dw.row(r);
                    const double* wr = w.row(r);
                    for (std::size_t c = 0; c < w.cols; ++c) {
                        dwr[c] += dr * x[c];
                        dx[c] += wr[c] * dr;
                    }
                }
                if (n.op == Op::linear) {
                    std::span<double> db = params_->seg_grads(n.i1);
                    for (std::size_t r = 0; r < d.size(); ++r) db[r] += d[r];
                }
                touch(n.a);
                break;
            }
            case Op::relu: {
                const Vector& x = nodes_[n.a].value;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (x[i] > 0.0) accumulate(n.a, i, d[i]);
                }
                touch(n.a);
                break;
            }
            case Op::sigmoid: {
                for (std::size_t i = 0; i < d.size(); ++i) {
                    const double y = n.value[i];
                    accumulate(n.a, i, d[i] * y * (1.0 - y));
                }
                break;
            }
            case Op::tanh_elem: {
                for (std::size_t i = 0; i < d.size(); ++i) {
                    const double y = n.value[i];
                    accumulate(n.a, i, d[i] * (1.0 - y * y));
                }
                break;
            }
            case Op::add: {
                for (std::size_t i = 0; i < d.size(); ++i) {
                    nodes_[n.a].grad[i] += d[i];
                    nodes_[n.b].grad[i] += d[i];
                }
                touch(n.a);
                touch(n.b);
                break;
            }
            case Op::mul: {
                const Vector& va = nodes_[n.a].value;
                const Vector& vb = nodes_[n.b].value;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    nodes_[n.a].grad[i] += d[i] * vb[i];
                    nodes_[n.b].grad[i] += d[i] * va[i];
                }
                touch(n.a);
                touch(n.b);
                break;
            }
            case Op::concat: {
                std::size_t at = 0;
                for (std::uint32_t j = 0; j < n.args_len; ++j) {
                    const std::uint32_t p = arg_pool_[n.args_off + j];
                    Vector& dp = nodes_[p].grad;
                    for (std::size_t i = 0; i < dp.size(); ++i) dp[i] += d[at + i];
                    at += dp.size();
                    touch(p);
                }
                break;
            }
            case Op::slice: {
                Vector& dp = nodes_[n.a].grad;
                for (std::size_t i = 0; i < n.i1; ++i) dp[n.i0 + i] += d[i];
                touch(n.a);
                break;
            }
            case Op::mean: {
                const double inv = 1.0 / static_cast<double>(n.args_len);
                for (std::uint32_t j = 0; j < n.args_len; ++j) {
                    const std::uint32_t p = arg_pool_[n.args_off + j];
                    Vector& dp = nodes_[p].grad;
                    for (std::size_t i = 0; i < d.size(); ++i) dp[i] += d[i] * inv;
                    touch(p);
                }
                break;
            }
            case Op::dropout: {
                for (std::size_t i = 0; i < d.size(); ++i) {
                    if (n.aux[i] != 0.0) accumulate(n.a, i, d[i] * n.aux[i]);
                }
                touch(n.a);
                break;
            }
            case Op::softmax_ce: {
                const double dl = d[0];
                Vector& dlogits = nodes_[n.a].grad;
                for (std::size_t i = 0; i < n.aux.size(); ++i) dlogits[i] += dl * n.aux[i];
                dlogits[n.i0] -= dl;
                touch(n.a);
                break;
            }
            case Op::mean_scalars: {
                const double dv = d[0] / static_cast<double>(n.args_len);
                for (std::uint32_t j = 0; j < n.args_len; ++j) {
                    const std::uint32_t p = arg_pool_[n.args_off + j];
                    nodes_[p].grad[0] += dv;
                    touch(p);
                }
                break;
            }
        }
    }
}

}  // namespace emograph
