#include "emograph/lstm.hpp"

#include <array>
#include <cmath>
#include <tuple>

#include "emograph/error.hpp"

namespace emograph {

LstmSegments declare_lstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                          std::size_t hidden) {
    if (input_dim == 0 || hidden == 0) throw ArgumentError("lstm: dimensions must be positive");
    LstmSegments segs;
    segs.input_dim = input_dim;
    segs.hidden = hidden;
    segs.w_in = store.add_matrix(prefix + ".w_in", 4 * hidden, input_dim);
    segs.w_rec = store.add_matrix(prefix + ".w_rec", 4 * hidden, hidden);
    segs.bias = store.add_vector(prefix + ".bias", 4 * hidden);
    return segs;
}

namespace {

void xavier_fill(MatrixView w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t r = 0; r < w.rows; ++r) {
        for (std::size_t c = 0; c < w.cols; ++c) w.at(r, c) = rng.uniform(-a, a);
    }
}

Rng segment_rng(std::uint64_t root_seed, const ParamStore& store, ParamStore::SegId id) {
    return substream(root_seed, "init." + store.segment(id).name);
}

}  // namespace

void init_lstm(ParamStore& store, const LstmSegments& segs, std::uint64_t root_seed) {
    const std::size_t h = segs.hidden;
    // Gate blocks get their own fan-based range.
    MatrixView w_in = store.mat(segs.w_in);
    Rng in_rng = segment_rng(root_seed, store, segs.w_in);
    MatrixView w_rec = store.mat(segs.w_rec);
    Rng rec_rng = segment_rng(root_seed, store, segs.w_rec);
    for (std::size_t gate = 0; gate < 4; ++gate) {
        MatrixView in_block{w_in.row(gate * h), h, segs.input_dim};
        xavier_fill(in_block, segs.input_dim, h, in_rng);
        MatrixView rec_block{w_rec.row(gate * h), h, h};
        xavier_fill(rec_block, h, h, rec_rng);
    }
    std::span<double> bias = store.seg_values(segs.bias);
    for (std::size_t i = 0; i < bias.size(); ++i) bias[i] = 0.0;
    for (std::size_t i = h; i < 2 * h; ++i) bias[i] = 1.0;  // forget gate
}

std::pair<Var, Var> lstm_cell(Tape& tape, Var x, Var h_prev, Var c_prev,
                              const LstmSegments& segs) {
    const std::size_t h = segs.hidden;
    if (tape.value(x).size() != segs.input_dim) throw DimensionError("lstm_cell: input dim mismatch");
    if (tape.value(h_prev).size() != h || tape.value(c_prev).size() != h) {
        throw DimensionError("lstm_cell: state dim mismatch");
    }
    const Var pre = tape.add(tape.linear(segs.w_in, segs.bias, x),
                             tape.linear_no_bias(segs.w_rec, h_prev));
    const Var gate_in = tape.sigmoid(tape.slice(pre, 0, h));
    const Var gate_forget = tape.sigmoid(tape.slice(pre, h, h));
    const Var candidate = tape.tanh_elem(tape.slice(pre, 2 * h, h));
    const Var gate_out = tape.sigmoid(tape.slice(pre, 3 * h, h));
    const Var c = tape.add(tape.mul(gate_forget, c_prev), tape.mul(gate_in, candidate));
    const Var h_out = tape.mul(gate_out, tape.tanh_elem(c));
    return {h_out, c};
}

BiLstmSegments declare_bilstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                              std::size_t hidden) {
    BiLstmSegments segs;
    segs.fwd = declare_lstm(store, prefix + ".fwd", input_dim, hidden);
    segs.bwd = declare_lstm(store, prefix + ".bwd", input_dim, hidden);
    return segs;
}

void init_bilstm(ParamStore& store, const BiLstmSegments& segs, std::uint64_t root_seed) {
    init_lstm(store, segs.fwd, root_seed);
    init_lstm(store, segs.bwd, root_seed);
}

std::vector<Var> bilstm_encode(Tape& tape, std::span<const Var> inputs,
                               const BiLstmSegments& segs) {
    if (inputs.empty()) throw ArgumentError("bilstm_encode: empty sequence");
    const std::size_t n = inputs.size();
    const std::size_t h = segs.fwd.hidden;

    std::vector<Var> fwd_h(n), bwd_h(n);
    Var h_state = tape.zeros(h);
    Var c_state = tape.zeros(h);
    for (std::size_t i = 0; i < n; ++i) {
        std::tie(h_state, c_state) = lstm_cell(tape, inputs[i], h_state, c_state, segs.fwd);
        fwd_h[i] = h_state;
    }
    h_state = tape.zeros(h);
    c_state = tape.zeros(h);
    for (std::size_t i = n; i-- > 0;) {
        std::tie(h_state, c_state) = lstm_cell(tape, inputs[i], h_state, c_state, segs.bwd);
        bwd_h[i] = h_state;
    }

    std::vector<Var> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::array<Var, 2> parts{fwd_h[i], bwd_h[i]};
        out[i] = tape.concat(parts);
    }
    return out;
}

}  // namespace emograph
