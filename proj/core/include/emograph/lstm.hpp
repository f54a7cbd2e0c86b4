#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emograph/param_store.hpp"
#include "emograph/rng.hpp"
#include "emograph/tape.hpp"

namespace emograph {

// One LSTM direction. Gates are stacked row-wise in w_in / w_rec / bias:
// rows [0,h) input gate, [h,2h) forget gate, [2h,3h) candidate, [3h,4h)
// output gate.
struct LstmSegments {
    ParamStore::SegId w_in = 0;   // 4h x input_dim
    ParamStore::SegId w_rec = 0;  // 4h x h
    ParamStore::SegId bias = 0;   // 4h
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
};

LstmSegments declare_lstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                          std::size_t hidden);

// Xavier-uniform weights; biases zero except the forget gate's, which
// starts at 1. Each segment draws from its own name-keyed substream of
// root_seed, so identically named segments initialize identically across
// model variants.
void init_lstm(ParamStore& store, const LstmSegments& segs, std::uint64_t root_seed);

// Standard recurrence:
//   i,f,o = sigmoid(...), g = tanh(...)
//   c_t = f*c_prev + i*g,  h_t = o*tanh(c_t)
std::pair<Var, Var> lstm_cell(Tape& tape, Var x, Var h_prev, Var c_prev,
                              const LstmSegments& segs);

struct BiLstmSegments {
    LstmSegments fwd, bwd;
};

BiLstmSegments declare_bilstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                              std::size_t hidden);
void init_bilstm(ParamStore& store, const BiLstmSegments& segs, std::uint64_t root_seed);

// Contextual embeddings: output[i] = [forward hidden at i || backward
// hidden at i], length 2h. Initial states are zero in both directions.
std::vector<Var> bilstm_encode(Tape& tape, std::span<const Var> inputs,
                               const BiLstmSegments& segs);

}  // namespace emograph
