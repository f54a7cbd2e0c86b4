#include "emograph/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emograph/checkpoint.hpp"
#include "emograph/error.hpp"
#include "emograph/metrics.hpp"
#include "emograph/model.hpp"
#include "emograph/synthetic.hpp"
#include "emograph/trainer.hpp"

namespace emograph {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class LogLevel { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("EMOGRAPH_LOG");
        if (env == nullptr) return LogLevel::info;
        const std::string s(env);
        if (s == "debug") return LogLevel::debug;
        if (s == "info") return LogLevel::info;
        if (s == "warn") return LogLevel::warn;
        if (s == "error") return LogLevel::error;
        if (s == "off") return LogLevel::off;
        return LogLevel::info;
    }();
    return level;
}

void log(LogLevel lvl, const std::string& msg) {
    if (lvl >= log_level()) std::cerr << msg << '\n';
}

// ---------------------------------------------------------------------------
// Run configuration: JSON file plus command-line overrides; flags win.

struct RunConfig {
    std::string dataset;
    std::string splits;                       // optional splits file
    std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    // Optimization.
    double lr = 0.0009;
    std::size_t epochs = 1500;
    std::size_t patience = 100;
    double dropout = 0.5;

    // Architecture.
    std::size_t hidden = 16;
    std::size_t out_dim = 0;
    std::size_t classifier_hidden = 32;
    int gamma = 8;
    double rho = 0.3;
    std::string neighborhood = "cg+dg_filtered";
    std::string layer = "bilevel";
    std::size_t gcn_layers = 1;
    std::string modalities = "tva";

    std::vector<int> gamma_sweep{2, 4, 6, 8, 10};
};

RunConfig run_config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": must be a JSON object");

    static const std::set<std::string> known = {
        "dataset",    "splits",     "split_ratios", "out_dir",      "seed",
        "lr",         "epochs",     "patience",     "dropout",      "hidden",
        "out_dim",    "classifier_hidden", "gamma", "rho",          "neighborhood",
        "layer",      "gcn_layers", "modalities",   "gamma_sweep"};
    for (const auto& [key, _] : j.items()) {
        if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    }

    RunConfig cfg;
    try {
        const auto take = [&j](const char* key, auto& into) {
            if (j.contains(key)) into = j.at(key).get<std::decay_t<decltype(into)>>();
        };
        take("dataset", cfg.dataset);
        take("splits", cfg.splits);
        if (j.contains("split_ratios")) {
            const auto r = j.at("split_ratios").get<std::vector<double>>();
            if (r.size() != 3) throw ConfigError("config: split_ratios must have 3 entries");
            std::copy(r.begin(), r.end(), cfg.split_ratios.begin());
        }
        take("out_dir", cfg.out_dir);
        take("seed", cfg.seed);
        take("lr", cfg.lr);
        take("epochs", cfg.epochs);
        take("patience", cfg.patience);
        take("dropout", cfg.dropout);
        take("hidden", cfg.hidden);
        take("out_dim", cfg.out_dim);
        take("classifier_hidden", cfg.classifier_hidden);
        take("gamma", cfg.gamma);
        take("rho", cfg.rho);
        take("neighborhood", cfg.neighborhood);
        take("layer", cfg.layer);
        take("gcn_layers", cfg.gcn_layers);
        take("modalities", cfg.modalities);
        take("gamma_sweep", cfg.gamma_sweep);
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return cfg;
}

ModelConfig model_config_from(const RunConfig& run, const Dataset& ds) {
    ModelConfig cfg;
    cfg.dim_text = ds.dim_text;
    cfg.dim_visual = ds.dim_visual;
    cfg.dim_acoustic = ds.dim_acoustic;
    cfg.classes = ds.class_count();
    cfg.modalities = modality_set_from_string(run.modalities);
    cfg.hidden = run.hidden;
    cfg.out_dim = run.out_dim;
    cfg.classifier_hidden = run.classifier_hidden;
    cfg.gamma = run.gamma;
    cfg.rho = run.rho;
    cfg.neighborhood = neighborhood_config_from_string(run.neighborhood);
    cfg.layer = layer_kind_from_string(run.layer);
    cfg.gcn_layers = cfg.layer == LayerKind::mean_gcn ? run.gcn_layers : 1;
    cfg.dropout = run.dropout;
    cfg.validate();
    return cfg;
}

Dataset load_run_dataset(const RunConfig& run) {
    if (run.dataset.empty()) throw ConfigError("no dataset configured");
    Dataset ds = load_dataset(run.dataset);
    if (!run.splits.empty()) {
        load_splits(ds, run.splits);
    } else {
        assign_splits(ds, run.split_ratios, run.seed);
    }
    return ds;
}

Split report_split(const Dataset& ds) {
    if (ds.has_split(Split::test)) return Split::test;
    if (ds.has_split(Split::val)) return Split::val;
    return Split::train;
}

void write_history_csv(const std::vector<EpochRecord>& history, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "epoch,train_loss,val_weighted_f1\n";
    for (const EpochRecord& r : history) {
        out << r.epoch << ',' << format_double(r.train_loss) << ',';
        if (r.has_val) out << format_double(r.val_weighted_f1);
        out << '\n';
    }
}

void write_metrics_json(const Metrics& m, Split split, const fs::path& path) {
    json j = json::parse(metrics_to_json_string(m));
    j["split"] = split_name(split);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

void write_text(const std::string& text, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

// ---------------------------------------------------------------------------
// Subcommands.

struct TrainOutcome {
    Metrics final_metrics;
    Split reported_split = Split::train;
    std::size_t best_epoch = 0;
};

TrainOutcome run_training(const RunConfig& run, Model& model, Dataset& ds,
                          const std::string& tag) {
    TrainConfig tc;
    tc.lr = run.lr;
    tc.epochs = run.epochs;
    tc.patience = run.patience;
    tc.seed = run.seed;

    model.init_params(run.seed);
    const TrainResult result = train(model, ds, tc);

    TrainOutcome outcome;
    outcome.best_epoch = result.best_epoch;
    outcome.reported_split = report_split(ds);
    outcome.final_metrics = evaluate(model, ds, outcome.reported_split);
    log(LogLevel::info, tag + "trained " + std::to_string(result.history.size()) + " epochs" +
                            (result.early_stopped ? " (early stop)" : "") + ", " +
                            split_name(outcome.reported_split) + " weighted F1 " +
                            format_double(outcome.final_metrics.weighted_f1));
    return outcome;
}

int cmd_train(const RunConfig& run) {
    Dataset ds = load_run_dataset(run);
    Model model(model_config_from(run, ds));
    log(LogLevel::info, "training on " + std::to_string(ds.split_indices(Split::train).size()) +
                            " conversations, " + std::to_string(model.params().size()) +
                            " parameters");

    const fs::path out_dir(run.out_dir);
    fs::create_directories(out_dir);

    TrainConfig tc;
    tc.lr = run.lr;
    tc.epochs = run.epochs;
    tc.patience = run.patience;
    tc.seed = run.seed;

    model.init_params(run.seed);
    const TrainResult result = train(model, ds, tc);
    write_history_csv(result.history, out_dir / "history.csv");

    const Split split = report_split(ds);
    const Metrics final_metrics = evaluate(model, ds, split);
    write_metrics_json(final_metrics, split, out_dir / "metrics.json");
    save_checkpoint(out_dir / "checkpoint.json", model, ds.labels, result.best_epoch,
                    &final_metrics);
    save_splits(ds, out_dir / "splits.json");

    log(LogLevel::info, "final " + std::string(split_name(split)) + " weighted F1 " +
                            format_double(final_metrics.weighted_f1) + " (accuracy " +
                            format_double(final_metrics.accuracy) + ")");
    std::cout << "weighted_f1 " << format_double(final_metrics.weighted_f1) << '\n';
    return 0;
}

std::vector<std::size_t> eval_slice(const Dataset& ds, const std::string& split) {
    if (split == "all") {
        std::vector<std::size_t> all(ds.conversations.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    for (const Split s : {Split::train, Split::val, Split::test}) {
        if (split == split_name(s)) {
            if (!ds.has_split(s)) {
                throw ArgumentError("dataset has no " + split + " split; pass --splits or use "
                                    "--split all");
            }
            return {ds.split_indices(s).begin(), ds.split_indices(s).end()};
        }
    }
    throw ArgumentError("unknown split '" + split + "'");
}

int cmd_eval(const std::string& checkpoint_path, const std::string& dataset_path,
             const std::string& splits_path, const std::string& split,
             const std::string& out_dir_path) {
    LoadedCheckpoint ckpt = load_checkpoint(checkpoint_path);
    Dataset ds = load_dataset(dataset_path);
    if (!splits_path.empty()) load_splits(ds, splits_path);
    check_compatible(ckpt.model, ckpt.labels, ds);

    const Metrics m = evaluate(ckpt.model, ds, eval_slice(ds, split));

    const fs::path out_dir(out_dir_path);
    fs::create_directories(out_dir);
    Split tag = Split::train;
    for (const Split s : {Split::train, Split::val, Split::test}) {
        if (split == split_name(s)) tag = s;
    }
    write_metrics_json(m, tag, out_dir / "metrics.json");
    std::ostringstream confusion, per_class;
    write_confusion_csv(m, confusion);
    write_per_class_csv(m, per_class);
    write_text(confusion.str(), out_dir / "confusion.csv");
    write_text(per_class.str(), out_dir / "per_class.csv");

    std::cout << "weighted_f1 " << format_double(m.weighted_f1) << '\n';
    return 0;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& dataset_path,
                const std::string& splits_path, const std::string& split,
                const std::string& out_path, const std::string& dump_graph_path) {
    LoadedCheckpoint ckpt = load_checkpoint(checkpoint_path);
    Dataset ds = load_dataset(dataset_path);
    if (!splits_path.empty()) load_splits(ds, splits_path);
    check_compatible(ckpt.model, ckpt.labels, ds);

    const std::vector<std::size_t> slice = eval_slice(ds, split);
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write " + out_path);
    out << "conversation_id,utterance_id,gold_label,predicted_label\n";
    std::size_t correct = 0, total = 0;
    for (const std::size_t ci : slice) {
        const Conversation& conv = ds.conversations[ci];
        const std::vector<std::size_t> preds = ckpt.model.predict_labels(conv);
        for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
            const Utterance& u = conv.utterances[i];
            out << conv.id << ',' << u.id << ',' << ds.labels[u.label] << ','
                << ds.labels[preds[i]] << '\n';
            correct += preds[i] == u.label ? 1 : 0;
            total += 1;
        }
    }

    if (!dump_graph_path.empty()) {
        json dump;
        for (const std::size_t ci : slice) {
            const Conversation& conv = ds.conversations[ci];
            const ConversationGraph g = ConversationGraph::build(conv.utterances.size(),
                                                                 ckpt.model.config().modalities);
            dump[conv.id] = json::parse(g.to_json_string());
        }
        write_text(dump.dump(2) + "\n", dump_graph_path);
    }

    std::cout << "accuracy " << format_double(total == 0 ? 0.0
                                                         : static_cast<double>(correct) /
                                                               static_cast<double>(total))
              << '\n';
    return 0;
}

int cmd_gen(const std::string& spec_path, std::uint64_t seed, const std::string& out_path) {
    std::ifstream in(spec_path);
    if (!in) throw ConfigError("cannot open spec file " + spec_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const SynthSpec spec = synth_spec_from_json_string(buffer.str());
    const Dataset ds = generate_synthetic(spec, seed);
    save_dataset(ds, out_path);
    log(LogLevel::info, "wrote " + std::to_string(ds.conversations.size()) + " conversations (" +
                            std::to_string(ds.utterance_count()) + " utterances) to " + out_path);
    return 0;
}

int cmd_ablate(const RunConfig& base, const std::string& axis, bool dump_assignments) {
    Dataset ds = load_run_dataset(base);
    const fs::path out_dir(base.out_dir);
    fs::create_directories(out_dir);

    struct Variant {
        std::string label;
        RunConfig run;
    };
    std::vector<Variant> variants;
    if (axis == "neighborhood") {
        for (const NeighborhoodConfig& nc : neighborhood_study_variants()) {
            RunConfig run = base;
            run.neighborhood = to_string(nc);
            variants.push_back({run.neighborhood, run});
        }
    } else if (axis == "gamma") {
        for (const int g : base.gamma_sweep) {
            RunConfig run = base;
            run.gamma = g;
            variants.push_back({"gamma_" + std::to_string(g), run});
        }
    } else if (axis == "layers") {
        variants.push_back({"bilevel", base});
        variants.back().run.layer = "bilevel";
        for (std::size_t k = 1; k <= 4; ++k) {
            RunConfig run = base;
            run.layer = "mean_gcn";
            run.gcn_layers = k;
            variants.push_back({"gcn_" + std::to_string(k), run});
        }
    } else if (axis == "modality") {
        for (const char* m : {"t", "v", "a", "tv", "ta", "va", "tva"}) {
            RunConfig run = base;
            run.modalities = m;
            variants.push_back({m, run});
        }
    } else {
        throw ArgumentError("unknown ablation axis '" + axis +
                            "' (expected neighborhood, gamma, layers or modality)");
    }

    std::ofstream csv(out_dir / ("ablation_" + axis + ".csv"));
    if (!csv) throw ConfigError("cannot write ablation CSV");
    csv << "variant,weighted_f1,accuracy\n";

    for (const Variant& variant : variants) {
        Model model(model_config_from(variant.run, ds));
        const TrainOutcome outcome = run_training(variant.run, model, ds, "[" + variant.label + "] ");
        csv << variant.label << ',' << format_double(outcome.final_metrics.weighted_f1) << ','
            << format_double(outcome.final_metrics.accuracy) << '\n';

        if (dump_assignments && model.config().layer == LayerKind::bilevel) {
            const std::vector<std::size_t> slice = {eval_slice(ds, "all").front()};
            const Conversation& conv = ds.conversations[slice.front()];
            Tape tape(&model.params());
            const std::vector<Var> features = model.encode(tape, conv);
            std::vector<Vector> values;
            for (const Var f : features) values.push_back(tape.value(f));
            const ConversationGraph g =
                ConversationGraph::build(conv.utterances.size(), model.config().modalities);
            json dump;
            dump["conversation"] = conv.id;
            dump["targets"] = json::array();
            for (std::uint32_t o = 0; o < g.node_count(); ++o) {
                const ClusterAssignment a =
                    build_clusters(g, o, values, model.config().cluster_config());
                dump["targets"].push_back(json::parse(assignment_to_json_string(a, g)));
            }
            write_text(dump.dump(2) + "\n",
                       out_dir / ("assignments_" + variant.label + ".json"));
        }
    }
    return 0;
}

int cmd_gradcheck(const std::string& config_path, double eps, double tolerance,
                  double corrupt) {
    // Micro-model fixture: 2 conversations x 3 utterances, 2 classes,
    // distinct raw dims per modality.
    SynthSpec spec;
    spec.task = SynthTask::prototype;
    spec.conversations = 2;
    spec.min_len = 3;
    spec.max_len = 3;
    spec.classes = 2;
    spec.dim_text = 3;
    spec.dim_visual = 4;
    spec.dim_acoustic = 5;
    spec.noise = 0.5;
    spec.separation = 2.0;
    Dataset ds = generate_synthetic(spec, 20240601);

    RunConfig run;
    run.hidden = 4;
    run.gamma = 2;
    run.dropout = 0.0;
    run.classifier_hidden = 8;
    if (!config_path.empty()) {
        run = run_config_from_file(config_path);
        if (run.dropout != 0.0) {
            std::cerr << "gradcheck: refusing dropout-on config (stochastic loss is not "
                         "finite-difference checkable)\n";
            return 2;
        }
    }
    Model model(model_config_from(run, ds));
    model.init_params(7);

    std::vector<std::size_t> convs(ds.conversations.size());
    for (std::size_t i = 0; i < convs.size(); ++i) convs[i] = i;

    const GradCheckReport report = grad_check_model(model, ds, convs, eps, corrupt);
    const bool pass = report.max_rel_error < tolerance;
    std::cout << "parameters " << model.params().size() << '\n';
    std::cout << "max_rel_error " << format_double(report.max_rel_error) << '\n';
    std::cout << "worst_segment " << report.worst_segment << " (coordinate "
              << report.worst_coordinate << ", analytic "
              << format_double(report.analytic_at_worst) << ", numeric "
              << format_double(report.numeric_at_worst) << ")\n";
    std::cout << (pass ? "PASS" : "FAIL") << " tolerance " << format_double(tolerance) << '\n';
    return pass ? 0 : 1;
}

void add_run_options(CLI::App* cmd, RunConfig& run, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON run configuration");
    cmd->add_option("--dataset", run.dataset, "dataset JSONL path");
    cmd->add_option("--splits", run.splits, "splits JSON path");
    cmd->add_option("--out", run.out_dir, "output directory");
    cmd->add_option("--seed", run.seed, "root random seed");
    cmd->add_option("--lr", run.lr, "learning rate");
    cmd->add_option("--epochs", run.epochs, "max training epochs");
    cmd->add_option("--patience", run.patience, "early-stop patience (validation epochs)");
    cmd->add_option("--dropout", run.dropout, "dropout rate");
    cmd->add_option("--hidden", run.hidden, "LSTM hidden size per direction");
    cmd->add_option("--gamma", run.gamma, "cluster granularity");
    cmd->add_option("--rho", run.rho, "similarity filter threshold");
    cmd->add_option("--neighborhood", run.neighborhood, "neighborhood mode, e.g. cg+dg_filtered");
    cmd->add_option("--layer", run.layer, "graph layer: bilevel or mean_gcn");
    cmd->add_option("--gcn-layers", run.gcn_layers, "stacked mean_gcn layers");
    cmd->add_option("--modalities", run.modalities, "active modalities, e.g. tva");
}

// File values first, then any flag the user actually passed.
RunConfig merged_run_config(const CLI::App* cmd, const RunConfig& flag_values,
                            const std::string& config_path) {
    if (config_path.empty()) return flag_values;
    RunConfig merged = run_config_from_file(config_path);
    const auto keep_flag = [&](const char* flag, auto member) {
        if (cmd->count(flag) > 0) merged.*member = flag_values.*member;
    };
    keep_flag("--dataset", &RunConfig::dataset);
    keep_flag("--splits", &RunConfig::splits);
    keep_flag("--out", &RunConfig::out_dir);
    keep_flag("--seed", &RunConfig::seed);
    keep_flag("--lr", &RunConfig::lr);
    keep_flag("--epochs", &RunConfig::epochs);
    keep_flag("--patience", &RunConfig::patience);
    keep_flag("--dropout", &RunConfig::dropout);
    keep_flag("--hidden", &RunConfig::hidden);
    keep_flag("--gamma", &RunConfig::gamma);
    keep_flag("--rho", &RunConfig::rho);
    keep_flag("--neighborhood", &RunConfig::neighborhood);
    keep_flag("--layer", &RunConfig::layer);
    keep_flag("--gcn-layers", &RunConfig::gcn_layers);
    keep_flag("--modalities", &RunConfig::modalities);
    return merged;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"conversation emotion recognition on modality graphs"};
    app.require_subcommand(1);

    // train / ablate share the run-config plumbing.
    RunConfig train_run, ablate_run;
    std::string train_config, ablate_config;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model and write artifacts");
    add_run_options(train_cmd, train_run, train_config);

    std::string eval_checkpoint, eval_dataset, eval_splits, eval_split = "test",
                                                            eval_out = "eval_out";
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint JSON")->required();
    eval_cmd->add_option("--dataset", eval_dataset, "dataset JSONL path")->required();
    eval_cmd->add_option("--splits", eval_splits, "splits JSON path");
    eval_cmd->add_option("--split", eval_split, "train|val|test|all (default test)");
    eval_cmd->add_option("--out", eval_out, "output directory");

    std::string pred_checkpoint, pred_dataset, pred_splits, pred_split = "all", pred_out,
                                                            pred_graph;
    CLI::App* pred_cmd = app.add_subcommand("predict", "write per-utterance predictions");
    pred_cmd->add_option("--checkpoint", pred_checkpoint, "checkpoint JSON")->required();
    pred_cmd->add_option("--dataset", pred_dataset, "dataset JSONL path")->required();
    pred_cmd->add_option("--splits", pred_splits, "splits JSON path");
    pred_cmd->add_option("--split", pred_split, "train|val|test|all (default all)");
    pred_cmd->add_option("--out", pred_out, "predictions CSV path")->required();
    pred_cmd->add_option("--dump-graph", pred_graph, "write conversation graphs as JSON");

    std::string gen_spec, gen_out;
    std::uint64_t gen_seed = 1;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
    gen_cmd->add_option("--spec", gen_spec, "synthetic spec JSON")->required();
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output JSONL path")->required();

    std::string ablate_axis;
    bool ablate_dump = false;
    CLI::App* ablate_cmd = app.add_subcommand("ablate", "train/evaluate variants along one axis");
    add_run_options(ablate_cmd, ablate_run, ablate_config);
    ablate_cmd->add_option("--axis", ablate_axis, "neighborhood|gamma|layers|modality")
        ->required();
    ablate_cmd->add_flag("--dump-assignments", ablate_dump,
                         "write per-target cluster assignments per variant");

    std::string gc_config;
    double gc_eps = 1e-5, gc_tol = 1e-4, gc_corrupt = 0.0;
    CLI::App* gc_cmd = app.add_subcommand("gradcheck",
                                          "finite-difference check of the full model gradient");
    gc_cmd->add_option("--config", gc_config, "run config overriding the micro-model");
    gc_cmd->add_option("--eps", gc_eps, "finite-difference step");
    gc_cmd->add_option("--tolerance", gc_tol, "max relative error to pass");
    gc_cmd->add_option("--test-corrupt-gradient", gc_corrupt,
                       "verification hook: offset added to one analytic gradient entry");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(merged_run_config(train_cmd, train_run, train_config));
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_checkpoint, eval_dataset, eval_splits, eval_split, eval_out);
        }
        if (pred_cmd->parsed()) {
            return cmd_predict(pred_checkpoint, pred_dataset, pred_splits, pred_split, pred_out,
                               pred_graph);
        }
        if (gen_cmd->parsed()) return cmd_gen(gen_spec, gen_seed, gen_out);
        if (ablate_cmd->parsed()) {
            return cmd_ablate(merged_run_config(ablate_cmd, ablate_run, ablate_config),
                              ablate_axis, ablate_dump);
        }
        if (gc_cmd->parsed()) return cmd_gradcheck(gc_config, gc_eps, gc_tol, gc_corrupt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace emograph
