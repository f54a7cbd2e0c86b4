#include <benchmark/benchmark.h>

#include "emograph/model.hpp"
#include "emograph/optimizer.hpp"
#include "emograph/synthetic.hpp"
#include "emograph/trainer.hpp"

namespace {

using namespace emograph;

Dataset bench_dataset(std::size_t utterances) {
    SynthSpec spec;
    spec.conversations = 1;
    spec.min_len = utterances;
    spec.max_len = utterances;
    spec.classes = 3;
    spec.dim_text = 8;
    spec.dim_visual = 8;
    spec.dim_acoustic = 8;
    return generate_synthetic(spec, 99);
}

Model bench_model(const Dataset& ds, LayerKind layer) {
    ModelConfig cfg;
    cfg.dim_text = ds.dim_text;
    cfg.dim_visual = ds.dim_visual;
    cfg.dim_acoustic = ds.dim_acoustic;
    cfg.classes = ds.class_count();
    cfg.hidden = 16;
    cfg.gamma = 8;
    cfg.layer = layer;
    cfg.dropout = 0.0;
    Model model(cfg);
    model.init_params(3);
    return model;
}

void BM_ForwardBilevel(benchmark::State& state) {
    const Dataset ds = bench_dataset(static_cast<std::size_t>(state.range(0)));
    Model model = bench_model(ds, LayerKind::bilevel);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.forward_probs(ds.conversations[0]));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ForwardMeanGcn(benchmark::State& state) {
    const Dataset ds = bench_dataset(static_cast<std::size_t>(state.range(0)));
    Model model = bench_model(ds, LayerKind::mean_gcn);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.forward_probs(ds.conversations[0]));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_TrainStep(benchmark::State& state) {
    const Dataset ds = bench_dataset(static_cast<std::size_t>(state.range(0)));
    Model model = bench_model(ds, LayerKind::bilevel);
    AdamState adam(model.params().size());
    Tape tape(&model.params());
    for (auto _ : state) {
        tape.reset();
        const Var loss =
            model.conversation_loss(tape, ds.conversations[0], model.eval_dropout());
        tape.backward(loss);
        adam_step(model.params().values(), model.params().grads(), adam, 1e-4);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ForwardBilevel)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_ForwardMeanGcn)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_TrainStep)->Arg(8)->Arg(16);
