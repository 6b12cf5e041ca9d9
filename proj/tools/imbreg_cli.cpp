// Command-line harness: dataset generation, relevance scoring, resampling,
// MLP training, evaluation, ensembles, and the full benchmark protocol.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "imbreg/imbreg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(imbreg::ErrorKind kind) {
    switch (kind) {
        case imbreg::ErrorKind::config: return 2;
        case imbreg::ErrorKind::applicability: return 3;
        case imbreg::ErrorKind::data: return 4;
        case imbreg::ErrorKind::io: return 4;
        case imbreg::ErrorKind::degenerate: return 5;
        case imbreg::ErrorKind::progress: return 6;
        case imbreg::ErrorKind::numeric: return 7;
    }
    return 1;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("IMBREG_OUT")) return env;
    return "imbreg_out";
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw imbreg::Error(imbreg::ErrorKind::io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

struct RunContext {
    fs::path out_dir;
    std::string command;
    std::string config_echo;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    fs::path emit(const std::string& name) {
        outputs.push_back(name);
        return out_dir / name;
    }

    void finish() {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                          .count();
        json manifest{{"command", command},
                      {"config", config_echo},
                      {"seed", seed},
                      {"version", IMBREG_VERSION},
                      {"wall_time_s", wall},
                      {"outputs", outputs}};
        write_json_file(out_dir / "manifest.json", manifest);
    }
};

imbreg::Dataset load_input(const std::string& path, const std::string& target,
                           const std::vector<std::string>& categorical,
                           std::size_t* dropped = nullptr) {
    std::set<std::string> cats(categorical.begin(), categorical.end());
    auto result = imbreg::load_csv(path, target, cats);
    if (dropped) *dropped = result.rows_dropped;
    if (result.rows_dropped > 0)
        std::cerr << "note: dropped " << result.rows_dropped << " rows with missing values\n";
    return std::move(result.data);
}

imbreg::RelevanceModel fit_relevance(const std::string& name,
                                     std::span<const double> targets, std::size_t bins,
                                     double alpha, double ratio_cap) {
    using imbreg::RelevanceFunction;
    auto fn = imbreg::relevance_function_from_string(name);
    switch (fn) {
        case RelevanceFunction::histogram:
            return imbreg::RelevanceModel::fit_histogram(targets, bins);
        case RelevanceFunction::denseweight:
            return imbreg::RelevanceModel::fit_denseweight(targets, alpha);
        case RelevanceFunction::density_ratio:
            return imbreg::RelevanceModel::fit_density_ratio(targets, {}, ratio_cap);
        default:
            return imbreg::RelevanceModel::fit(fn, targets);
    }
}

imbreg::DatasetSpec parse_dataset_spec(const std::string& text, std::size_t n, double noise) {
    // "csv:<path>:<target>[:cat1|cat2...]" or a synthetic generator name.
    if (text.rfind("csv:", 0) == 0) {
        std::string rest = text.substr(4);
        auto c1 = rest.find(':');
        if (c1 == std::string::npos)
            throw imbreg::Error(imbreg::ErrorKind::config,
                                "csv dataset spec needs csv:<path>:<target>");
        std::string path = rest.substr(0, c1);
        std::string tail = rest.substr(c1 + 1);
        auto c2 = tail.find(':');
        std::string target = c2 == std::string::npos ? tail : tail.substr(0, c2);
        std::set<std::string> cats;
        if (c2 != std::string::npos) {
            std::string cat_list = tail.substr(c2 + 1);
            std::size_t start = 0;
            while (start <= cat_list.size()) {
                auto bar = cat_list.find('|', start);
                std::string token = cat_list.substr(
                    start, bar == std::string::npos ? std::string::npos : bar - start);
                if (!token.empty()) cats.insert(token);
                if (bar == std::string::npos) break;
                start = bar + 1;
            }
        }
        return imbreg::DatasetSpec::csv(path, target, cats);
    }
    return imbreg::DatasetSpec::generator(text, n, noise);
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto pos = text.find(sep, start);
        std::string token =
            text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        if (!token.empty()) out.push_back(token);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// ---- subcommand payloads ---------------------------------------------------

struct GenerateArgs {
    std::string name;
    std::size_t n = 1000;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string output = "";
};

struct RelevanceArgs {
    std::string input, target, function = "kde";
    std::vector<std::string> categorical;
    std::size_t bins = 10;
    double alpha = 1.0, ratio_cap = 20.0;
    std::string output = "relevance.csv";
};

struct ResampleArgs {
    std::string input, target;
    std::vector<std::string> categorical;
    std::string method = "crbsmogn", relevance = "density_ratio";
    bool undersample = false;
    double threshold = 0.8, delta_n = 0.01, over_rate = 0.5, under_rate = 0.5;
    double wsmoter_ratio = 3.0, ratio_cap = 20.0, under_rate_composed = 0.5;
    std::size_t k = 5, wsmoter_k = 10, bins = 10, n_sample = 0;
    std::int64_t delta_b = 1;
    std::uint64_t seed = 0;
    std::string output = "resampled.csv";
};

struct TrainArgs {
    std::string input, target;
    std::vector<std::string> categorical;
    std::string loss = "mse", relevance = "";
    std::size_t hidden_layers = 2, hidden_units = 128, batch = 16, epochs = 1000, patience = 20;
    double lr = 0.001;
    std::uint64_t seed = 0;
    bool no_scaling = false;
    std::string output = "model.json";
};

struct EvaluateArgs {
    std::string input, target, model;
    std::vector<std::string> categorical;
    std::string predictions = "predictions.csv", report = "evaluation.json";
};

struct EnsembleArgs {
    std::string model_imbalanced, model_normal, input, target;
    std::vector<std::string> categorical;
    std::string mode = "mean", relevance = "", fit_csv = "";
    double threshold = 0.5;
    std::string output = "ensemble_predictions.csv";
};

struct BenchmarkArgs {
    std::vector<std::string> datasets;
    std::string strategies = "crbsmogn:density_ratio";
    std::size_t n = 1000;
    double noise = 0.0;
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    std::size_t workers = 1, candidates = 100;
    double alpha = 0.05, train_fraction = 0.7;
    bool ensemble = false;
    std::size_t hidden_layers = 2, hidden_units = 64, batch = 16, epochs = 1000, patience = 20;
    double lr = 0.001;
};

json model_file_json(const imbreg::TrainedModel& model, const imbreg::ScalingRecord& rec,
                     bool scaled) {
    return {{"model", model.to_json()}, {"scaling", rec.to_json()}, {"scaled", scaled}};
}

void run_generate(RunContext& ctx, const GenerateArgs& a) {
    auto data = imbreg::generate_synthetic(a.name, a.n, a.noise, a.seed);
    std::string file = a.output.empty() ? a.name + ".csv" : a.output;
    imbreg::write_csv(data, ctx.emit(file).string());
}

void run_relevance(RunContext& ctx, const RelevanceArgs& a) {
    auto data = load_input(a.input, a.target, a.categorical);
    auto model = fit_relevance(a.function, data.targets(), a.bins, a.alpha, a.ratio_cap);
    auto rel = model.values_for(data.targets());
    std::ofstream out(ctx.emit(a.output), std::ios::binary);
    out.precision(17);
    out << "index,target,relevance\n";
    for (std::size_t i = 0; i < rel.values.size(); ++i)
        out << i << ',' << data.target(i) << ',' << rel.values[i] << '\n';
}

void run_resample(RunContext& ctx, const ResampleArgs& a) {
    using imbreg::MitigationMethod;
    auto data = load_input(a.input, a.target, a.categorical);

    imbreg::StrategySpec spec;
    spec.kind = imbreg::StrategySpec::Kind::sampler;
    spec.method = imbreg::mitigation_method_from_string(a.method);
    spec.relevance = imbreg::relevance_function_from_string(a.relevance);
    spec.with_undersampling = a.undersample;
    imbreg::StrategySpec::check_applicability(spec);

    auto rel_model = fit_relevance(a.relevance, data.targets(), a.bins, 1.0, a.ratio_cap);
    auto rel = rel_model.values_for(data.targets());
    double mir_before = imbreg::compute_mir(data.targets());

    imbreg::ResampleOutcome outcome = [&] {
        switch (spec.method) {
            case MitigationMethod::smoter:
                return imbreg::smoter(data, rel, a.threshold, a.k, a.seed);
            case MitigationMethod::smogn:
                return imbreg::smogn(data, rel, a.threshold, a.k, a.delta_n, a.seed,
                                     a.undersample);
            case MitigationMethod::wercs:
                return imbreg::wercs(data, rel, a.over_rate,
                                     a.undersample ? a.under_rate : 0.0, a.seed);
            case MitigationMethod::wsmoter:
                return imbreg::wsmoter(data, rel, a.wsmoter_k, a.wsmoter_ratio, a.seed);
            case MitigationMethod::csmogn:
                return imbreg::csmogn(data, rel, a.bins, a.delta_b, a.n_sample, a.delta_n, a.k,
                                      a.seed);
            case MitigationMethod::crbsmogn:
                return imbreg::crbsmogn(data, rel, a.bins, a.delta_b, a.delta_n, a.seed);
        }
        throw imbreg::Error(imbreg::ErrorKind::config, "unknown method");
    }();

    bool sampler_has_own_under = spec.method == MitigationMethod::smogn ||
                                 spec.method == MitigationMethod::wercs;
    if (a.undersample && !sampler_has_own_under) {
        auto rel_after = rel_model.values_for(outcome.data.targets());
        auto under = imbreg::undersample_ratio(outcome.data, rel_after, a.under_rate_composed,
                                               imbreg::mix_seed(a.seed, 1));
        outcome.data = std::move(under.data);
        outcome.n_dropped += under.n_dropped;
    }
    double mir_after = imbreg::compute_mir(outcome.data.targets());

    imbreg::write_csv(outcome.data, ctx.emit(a.output).string());
    json provenance{{"method", a.method},
                    {"relevance", a.relevance},
                    {"with_undersampling", a.undersample},
                    {"seed", a.seed},
                    {"rows_in", data.n_rows()},
                    {"rows_out", outcome.data.n_rows()},
                    {"n_interpolated", outcome.n_interpolated},
                    {"n_noise", outcome.n_noise},
                    {"n_replicated", outcome.n_replicated},
                    {"n_dropped", outcome.n_dropped},
                    {"mir_before", mir_before},
                    {"mir_after", mir_after}};
    write_json_file(ctx.emit(a.output + ".provenance.json"), provenance);
}

void run_train(RunContext& ctx, const TrainArgs& a) {
    auto raw = load_input(a.input, a.target, a.categorical);
    imbreg::ScalingRecord record;
    imbreg::Dataset data = raw;
    if (!a.no_scaling) {
        auto scaled = imbreg::minmax_scale(raw);
        data = std::move(scaled.data);
        record = std::move(scaled.record);
    }

    imbreg::MlpConfig cfg;
    cfg.hidden_layers = a.hidden_layers;
    cfg.hidden_units = a.hidden_units;
    cfg.learning_rate = a.lr;
    cfg.batch_size = a.batch;
    cfg.max_epochs = a.epochs;
    cfg.early_stopping_patience = a.patience;
    cfg.seed = a.seed;

    imbreg::LossSpec loss{imbreg::loss_from_string(a.loss)};
    std::optional<imbreg::RelevanceVector> rel;
    if (loss.needs_weights()) {
        if (a.relevance.empty())
            throw imbreg::Error(imbreg::ErrorKind::config,
                                a.loss + " loss requires --relevance");
        rel = fit_relevance(a.relevance, data.targets(), 10, 1.0, 20.0)
                  .values_for(data.targets());
    }
    auto model = imbreg::train_mlp(data, cfg, loss, rel);
    write_json_file(ctx.emit(a.output), model_file_json(model, record, !a.no_scaling));
    std::cerr << "trained " << model.training_log.size()
              << " epochs, best validation loss " << model.best_validation_loss << '\n';
}

struct LoadedModel {
    imbreg::TrainedModel model;
    imbreg::ScalingRecord record;
    bool scaled = false;
};

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw imbreg::Error(imbreg::ErrorKind::io, "cannot open model file: " + path);
    json j = json::parse(in);
    LoadedModel lm;
    lm.model = imbreg::TrainedModel::from_json(j.at("model"));
    lm.record = imbreg::ScalingRecord::from_json(j.at("scaling"));
    lm.scaled = j.at("scaled").get<bool>();
    return lm;
}

void run_evaluate(RunContext& ctx, const EvaluateArgs& a) {
    auto lm = load_model(a.model);
    auto raw = load_input(a.input, a.target, a.categorical);
    imbreg::Dataset data = lm.scaled ? imbreg::apply_scaling(raw, lm.record) : raw;

    auto preds = imbreg::predict(lm.model, data);
    auto report = imbreg::bin_errors(data.targets(), preds);

    std::ofstream out(ctx.emit(a.predictions), std::ios::binary);
    out.precision(17);
    out << "index,target,prediction\n";
    for (std::size_t i = 0; i < preds.size(); ++i)
        out << i << ',' << raw.target(i) << ','
            << (lm.scaled ? imbreg::invert_target(preds[i], lm.record) : preds[i]) << '\n';

    double mse = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        double e = preds[i] - data.target(i);
        mse += e * e;
    }
    mse /= static_cast<double>(preds.size());

    json bins = json::array();
    for (std::size_t b = 0; b < imbreg::kBinCount; ++b)
        bins.push_back({{"label", imbreg::to_string(report.labels[b])},
                        {"count", report.counts[b]},
                        {"mse", report.errors[b] ? json(*report.errors[b]) : json(nullptr)}});
    write_json_file(ctx.emit(a.report), json{{"mse", mse},
                                             {"edges", report.edges},
                                             {"bins", bins}});
}

void run_ensemble(RunContext& ctx, const EnsembleArgs& a) {
    auto imb = load_model(a.model_imbalanced);
    auto norm = load_model(a.model_normal);
    if (imb.scaled != norm.scaled ||
        std::abs(imb.record.target.min - norm.record.target.min) > 1e-12 ||
        std::abs(imb.record.target.max - norm.record.target.max) > 1e-12)
        throw imbreg::Error(imbreg::ErrorKind::config,
                            "models were trained with different target scalings");

    auto raw = load_input(a.input, a.target, a.categorical);
    imbreg::Dataset data = imb.scaled ? imbreg::apply_scaling(raw, imb.record) : raw;

    imbreg::EnsembleConfig cfg;
    cfg.mode = imbreg::ensemble_mode_from_string(a.mode);
    cfg.threshold = a.threshold;

    std::function<double(double)> rel_of;
    if (cfg.mode != imbreg::EnsembleMode::mean) {
        if (a.relevance.empty())
            throw imbreg::Error(imbreg::ErrorKind::config,
                                a.mode + " ensemble requires --relevance");
        std::string fit_path = a.fit_csv.empty() ? a.input : a.fit_csv;
        auto fit_raw = load_input(fit_path, a.target, a.categorical);
        imbreg::Dataset fit_data =
            imb.scaled ? imbreg::apply_scaling(fit_raw, imb.record) : fit_raw;
        auto model = fit_relevance(a.relevance, fit_data.targets(), 10, 1.0, 20.0);
        rel_of = [model](double y) { return model.evaluate(y); };
    }

    auto preds = imbreg::ensemble_predict(imb.model, norm.model, data, cfg, rel_of);
    std::ofstream out(ctx.emit(a.output), std::ios::binary);
    out.precision(17);
    out << "index,prediction\n";
    for (std::size_t i = 0; i < preds.size(); ++i)
        out << i << ','
            << (imb.scaled ? imbreg::invert_target(preds[i], imb.record) : preds[i]) << '\n';
}

void run_benchmark_cmd(RunContext& ctx, const BenchmarkArgs& a) {
    imbreg::BenchmarkConfig cfg;
    if (a.datasets.empty())
        throw imbreg::Error(imbreg::ErrorKind::config, "benchmark needs at least one --dataset");
    for (const auto& text : a.datasets)
        for (const auto& item : split_list(text))
            cfg.datasets.push_back(parse_dataset_spec(item, a.n, a.noise));
    for (const auto& item : split_list(a.strategies))
        cfg.strategies.push_back(imbreg::StrategySpec::parse(item));
    cfg.repetitions = a.reps;
    cfg.master_seed = a.seed;
    cfg.workers = a.workers;
    cfg.alpha = a.alpha;
    cfg.train_fraction = a.train_fraction;
    cfg.split_candidates = a.candidates;
    cfg.with_mean_ensemble = a.ensemble;
    cfg.mlp.hidden_layers = a.hidden_layers;
    cfg.mlp.hidden_units = a.hidden_units;
    cfg.mlp.learning_rate = a.lr;
    cfg.mlp.batch_size = a.batch;
    cfg.mlp.max_epochs = a.epochs;
    cfg.mlp.early_stopping_patience = a.patience;

    auto report = imbreg::run_benchmark(cfg);
    write_json_file(ctx.emit("report.json"), report.to_json());
    report.write_bin_errors_csv(ctx.emit("bin_errors.csv").string());
    report.write_bin_wins_csv(ctx.emit("bin_wins.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imbalanced-regression toolkit: relevance functions, resampling and "
                 "cost-sensitive mitigation, and a statistical benchmark harness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI config file");
    std::string out_dir = default_out_dir();
    app.add_option("--out-dir", out_dir, "Output directory (env IMBREG_OUT)")
        ->envname("IMBREG_OUT");

    GenerateArgs gen;
    auto* cmd_gen = app.add_subcommand("generate", "Generate a synthetic dataset CSV");
    cmd_gen->add_option("--name", gen.name, "Generator id")->required();
    cmd_gen->add_option("--n", gen.n, "Sample count");
    cmd_gen->add_option("--noise", gen.noise, "Feature noise sd as fraction of feature sd");
    cmd_gen->add_option("--seed", gen.seed, "RNG seed");
    cmd_gen->add_option("--output", gen.output, "Output CSV name");

    RelevanceArgs rel;
    auto* cmd_rel = app.add_subcommand("relevance", "Score per-sample relevance of a CSV");
    cmd_rel->add_option("--input", rel.input)->required();
    cmd_rel->add_option("--target", rel.target)->required();
    cmd_rel->add_option("--categorical", rel.categorical, "Categorical column names");
    cmd_rel->add_option("--function", rel.function, "Relevance function id");
    cmd_rel->add_option("--bins", rel.bins);
    cmd_rel->add_option("--alpha", rel.alpha, "DenseWeight alpha");
    cmd_rel->add_option("--ratio-cap", rel.ratio_cap);
    cmd_rel->add_option("--output", rel.output);

    ResampleArgs res;
    auto* cmd_res = app.add_subcommand("resample", "Resample a CSV with a mitigation method");
    cmd_res->add_option("--input", res.input)->required();
    cmd_res->add_option("--target", res.target)->required();
    cmd_res->add_option("--categorical", res.categorical);
    cmd_res->add_option("--method", res.method)->required();
    cmd_res->add_option("--relevance", res.relevance)->required();
    cmd_res->add_flag("--under", res.undersample, "Also under-sample");
    cmd_res->add_option("--threshold", res.threshold);
    cmd_res->add_option("--k", res.k);
    cmd_res->add_option("--delta-n", res.delta_n);
    cmd_res->add_option("--over-rate", res.over_rate);
    cmd_res->add_option("--under-rate", res.under_rate);
    cmd_res->add_option("--wsmoter-k", res.wsmoter_k);
    cmd_res->add_option("--wsmoter-ratio", res.wsmoter_ratio);
    cmd_res->add_option("--bins", res.bins);
    cmd_res->add_option("--delta-b", res.delta_b);
    cmd_res->add_option("--n-sample", res.n_sample);
    cmd_res->add_option("--ratio-cap", res.ratio_cap);
    cmd_res->add_option("--seed", res.seed);
    cmd_res->add_option("--output", res.output);

    TrainArgs train;
    auto* cmd_train = app.add_subcommand("train", "Train an MLP regressor");
    cmd_train->add_option("--input", train.input)->required();
    cmd_train->add_option("--target", train.target)->required();
    cmd_train->add_option("--categorical", train.categorical);
    cmd_train->add_option("--loss", train.loss, "mse|dense|prob|bmc");
    cmd_train->add_option("--relevance", train.relevance);
    cmd_train->add_option("--hidden-layers", train.hidden_layers);
    cmd_train->add_option("--hidden-units", train.hidden_units);
    cmd_train->add_option("--lr", train.lr);
    cmd_train->add_option("--batch", train.batch);
    cmd_train->add_option("--epochs", train.epochs);
    cmd_train->add_option("--patience", train.patience);
    cmd_train->add_option("--seed", train.seed);
    cmd_train->add_flag("--no-scaling", train.no_scaling, "Skip minmax scaling");
    cmd_train->add_option("--output", train.output);

    EvaluateArgs eval;
    auto* cmd_eval = app.add_subcommand("evaluate", "Evaluate a model on a CSV");
    cmd_eval->add_option("--input", eval.input)->required();
    cmd_eval->add_option("--target", eval.target)->required();
    cmd_eval->add_option("--categorical", eval.categorical);
    cmd_eval->add_option("--model", eval.model)->required();
    cmd_eval->add_option("--predictions", eval.predictions);
    cmd_eval->add_option("--report", eval.report);

    EnsembleArgs ens;
    auto* cmd_ens = app.add_subcommand("ensemble", "Combine two trained models");
    cmd_ens->add_option("--model-imbalanced", ens.model_imbalanced)->required();
    cmd_ens->add_option("--model-normal", ens.model_normal)->required();
    cmd_ens->add_option("--input", ens.input)->required();
    cmd_ens->add_option("--target", ens.target)->required();
    cmd_ens->add_option("--categorical", ens.categorical);
    cmd_ens->add_option("--mode", ens.mode, "mean|weighted|ratio_weighted|threshold");
    cmd_ens->add_option("--threshold", ens.threshold);
    cmd_ens->add_option("--relevance", ens.relevance);
    cmd_ens->add_option("--fit", ens.fit_csv, "CSV whose targets fit the relevance function");
    cmd_ens->add_option("--output", ens.output);

    BenchmarkArgs bench;
    auto* cmd_bench = app.add_subcommand("benchmark", "Run the benchmark protocol");
    cmd_bench->add_option("--dataset", bench.datasets,
                          "Generator id or csv:<path>:<target>[:cat1|cat2] (repeatable, "
                          "comma lists accepted)");
    cmd_bench->add_option("--strategies", bench.strategies,
                          "Comma list of method:relevance[:under] specs");
    cmd_bench->add_option("--n", bench.n, "Synthetic sample count");
    cmd_bench->add_option("--noise", bench.noise, "Synthetic feature noise fraction");
    cmd_bench->add_option("--reps", bench.reps);
    cmd_bench->add_option("--seed", bench.seed);
    cmd_bench->add_option("--workers", bench.workers);
    cmd_bench->add_option("--candidates", bench.candidates, "Split candidates");
    cmd_bench->add_option("--alpha", bench.alpha);
    cmd_bench->add_option("--train-fraction", bench.train_fraction);
    cmd_bench->add_flag("--ensemble", bench.ensemble, "Also evaluate the mean ensemble");
    cmd_bench->add_option("--hidden-layers", bench.hidden_layers);
    cmd_bench->add_option("--hidden-units", bench.hidden_units);
    cmd_bench->add_option("--lr", bench.lr);
    cmd_bench->add_option("--batch", bench.batch);
    cmd_bench->add_option("--epochs", bench.epochs);
    cmd_bench->add_option("--patience", bench.patience);

    CLI11_PARSE(app, argc, argv);

    RunContext ctx;
    ctx.out_dir = out_dir;
    try {
        fs::create_directories(ctx.out_dir);
        ctx.config_echo = app.config_to_str(true, false);

        if (app.got_subcommand(cmd_gen)) {
            ctx.command = "generate";
            ctx.seed = gen.seed;
            run_generate(ctx, gen);
        } else if (app.got_subcommand(cmd_rel)) {
            ctx.command = "relevance";
            run_relevance(ctx, rel);
        } else if (app.got_subcommand(cmd_res)) {
            ctx.command = "resample";
            ctx.seed = res.seed;
            run_resample(ctx, res);
        } else if (app.got_subcommand(cmd_train)) {
            ctx.command = "train";
            ctx.seed = train.seed;
            run_train(ctx, train);
        } else if (app.got_subcommand(cmd_eval)) {
            ctx.command = "evaluate";
            run_evaluate(ctx, eval);
        } else if (app.got_subcommand(cmd_ens)) {
            ctx.command = "ensemble";
            run_ensemble(ctx, ens);
        } else if (app.got_subcommand(cmd_bench)) {
            ctx.command = "benchmark";
            ctx.seed = bench.seed;
            run_benchmark_cmd(ctx, bench);
        }
        ctx.finish();
    } catch (const imbreg::Error& e) {
        json err{{"error", imbreg::to_string(e.kind())}, {"message", e.what()}};
        std::cerr << "error (" << imbreg::to_string(e.kind()) << "): " << e.what() << '\n';
        std::error_code ignore;
        if (fs::exists(ctx.out_dir, ignore)) write_json_file(ctx.out_dir / "error.json", err);
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
