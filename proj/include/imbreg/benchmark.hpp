#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "imbreg/csv.hpp"
#include "imbreg/dataset.hpp"
#include "imbreg/ensemble.hpp"
#include "imbreg/metrics.hpp"
#include "imbreg/mlp.hpp"
#include "imbreg/relevance.hpp"
#include "imbreg/resampling.hpp"
#include "imbreg/scaling.hpp"
#include "imbreg/split.hpp"
#include "imbreg/stats.hpp"
#include "imbreg/synthetic.hpp"

namespace imbreg {

// A mitigation strategy: a sampling method or a weighted loss, paired with
// the relevance function feeding it.
struct StrategySpec {
    enum class Kind { sampler, loss_weighted };
    Kind kind = Kind::sampler;
    MitigationMethod method = MitigationMethod::crbsmogn;
    LossId loss = LossId::dense;
    std::optional<RelevanceFunction> relevance;
    bool with_undersampling = false;
    double undersampling_rate = 0.5;

    std::string name() const {
        std::string out = kind == Kind::sampler ? to_string(method) : loss_label(loss);
        if (relevance) out += std::string(":") + to_string(*relevance);
        if (with_undersampling) out += ":under";
        return out;
    }

    static const char* loss_label(LossId id) {
        switch (id) {
            case LossId::dense: return "denseloss";
            case LossId::prob: return "probloss";
            case LossId::bmc: return "bmc";
            case LossId::mse: return "mse";
        }
        return "?";
    }

    // "method:relevance[:under]", e.g. "crbsmogn:density_ratio",
    // "smogn:density_distance:under", "denseloss:kde", "bmc".
    static StrategySpec parse(const std::string& text) {
        std::vector<std::string> tokens;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t colon = text.find(':', start);
            if (colon == std::string::npos) {
                tokens.push_back(text.substr(start));
                break;
            }
            tokens.push_back(text.substr(start, colon - start));
            start = colon + 1;
        }
        if (tokens.empty() || tokens[0].empty())
            throw Error(ErrorKind::config, "empty strategy spec");

        StrategySpec spec;
        const std::string& head = tokens[0];
        if (head == "denseloss" || head == "probloss" || head == "bmc") {
            spec.kind = Kind::loss_weighted;
            spec.loss = head == "denseloss" ? LossId::dense
                        : head == "probloss" ? LossId::prob
                                             : LossId::bmc;
        } else {
            spec.kind = Kind::sampler;
            spec.method = mitigation_method_from_string(head);
        }
        std::size_t t = 1;
        if (t < tokens.size() && tokens[t] != "under" && !tokens[t].empty())
            spec.relevance = relevance_function_from_string(tokens[t++]);
        if (t < tokens.size() && tokens[t] == "under") {
            spec.with_undersampling = true;
            ++t;
        }
        if (t < tokens.size())
            throw Error(ErrorKind::config, "malformed strategy spec: " + text);
        check_applicability(spec);
        return spec;
    }

    // Applicability grid: bounded-input samplers take the bounded relevance
    // functions, WSMOTER takes DenseWeight, crbSMOGN takes density-ratio, the
    // probabilistic loss rejects ratio relevance, BMC takes none.
    static void check_applicability(const StrategySpec& spec) {
        static const std::set<RelevanceFunction> bounded = {
            RelevanceFunction::pchip, RelevanceFunction::histogram, RelevanceFunction::lds,
            RelevanceFunction::kde, RelevanceFunction::density_distance};
        auto reject = [&](const std::string& why) {
            throw Error(ErrorKind::applicability, "strategy " + spec.name() + ": " + why);
        };
        if (spec.kind == Kind::loss_weighted) {
            if (spec.loss == LossId::bmc) {
                if (spec.relevance) reject("bmc does not take a relevance function");
                if (spec.with_undersampling) reject("bmc has no sampling step");
                return;
            }
            if (!spec.relevance) reject("weighted losses need a relevance function");
            if (spec.loss == LossId::prob && *spec.relevance == RelevanceFunction::density_ratio)
                reject("probabilistic loss does not accept ratio-scale relevance");
            if (spec.with_undersampling) reject("weighted losses have no sampling step");
            return;
        }
        if (!spec.relevance) reject("sampling methods need a relevance function");
        switch (spec.method) {
            case MitigationMethod::smoter:
            case MitigationMethod::smogn:
            case MitigationMethod::wercs:
            case MitigationMethod::csmogn:
                if (!bounded.count(*spec.relevance))
                    reject("requires a relevance function bounded in [eps,1]");
                break;
            case MitigationMethod::wsmoter:
                if (*spec.relevance != RelevanceFunction::denseweight)
                    reject("wsmoter pairs with denseweight relevance");
                if (spec.with_undersampling)
                    reject("wsmoter does not include under-sampling");
                break;
            case MitigationMethod::crbsmogn:
                if (*spec.relevance != RelevanceFunction::density_ratio)
                    reject("crbsmogn requires ratio-scale (density-ratio) relevance");
                break;
        }
    }
};

struct DatasetSpec {
    std::string id;
    std::string source;  // generator name or CSV path
    bool is_csv = false;
    std::string target_column = "y";
    std::set<std::string> categorical;
    std::size_t n = 1000;
    double noise = 0.0;

    static DatasetSpec generator(const std::string& name, std::size_t n, double noise) {
        DatasetSpec s;
        s.id = name;
        s.source = name;
        s.n = n;
        s.noise = noise;
        return s;
    }
    static DatasetSpec csv(const std::string& path, const std::string& target,
                           std::set<std::string> categorical = {}) {
        DatasetSpec s;
        s.id = path;
        s.source = path;
        s.is_csv = true;
        s.target_column = target;
        s.categorical = std::move(categorical);
        return s;
    }
};

struct BenchmarkConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<StrategySpec> strategies;
    std::size_t repetitions = 10;
    std::uint64_t master_seed = 0;
    MlpConfig mlp;
    double alpha = 0.05;
    double train_fraction = 0.7;
    std::size_t split_candidates = 100;
    std::size_t workers = 1;
    bool with_mean_ensemble = false;  // also evaluate the mean ensemble per strategy
};

struct StrategyOutcome {
    std::string strategy;
    std::array<std::optional<double>, kBinCount> mean_errors{};
    std::array<std::optional<double>, kBinCount> normalized_errors{};
    std::array<std::vector<double>, kBinCount> rep_errors{};  // empty when bin absent
    std::array<std::optional<double>, kBinCount> p_values{};  // vs baseline
    std::optional<double> mir_after;                          // samplers, mean over reps
    std::vector<std::string> failures;
};

struct DatasetOutcome {
    std::string dataset;
    double mir_before = 0.0;
    double split_dissimilarity = 0.0;
    std::array<double, kBinCount + 1> edges{};
    std::array<std::size_t, kBinCount> train_counts{};
    std::array<BinLabel, kBinCount> labels{};
    StrategyOutcome baseline;
    std::vector<StrategyOutcome> strategies;
};

struct BenchmarkReport {
    std::vector<DatasetOutcome> datasets;
    // Aggregates are label-ordered: index 0 = very rare ... 4 = very frequent.
    std::vector<std::pair<std::string, std::array<BinTallyEntry, kBinCount>>> tallies;
    std::vector<std::pair<std::string, std::array<std::optional<double>, kBinCount>>>
        mean_normalized_by_label;
    std::size_t repetitions = 0;
    std::uint64_t master_seed = 0;

    nlohmann::json to_json() const;
    void write_bin_errors_csv(const std::string& path) const;
    void write_bin_wins_csv(const std::string& path) const;
};

namespace detail {

struct PreparedDataset {
    std::string id;
    Dataset train;
    Dataset test;
    double mir_before = 0.0;
    double dissimilarity = 0.0;
    std::array<double, kBinCount + 1> edges{};
    std::array<std::size_t, kBinCount> train_counts{};
    std::array<BinLabel, kBinCount> labels{};
    std::uint64_t holdout_seed = 0;  // shared across the dataset's repetitions
};

inline Dataset load_benchmark_dataset(const DatasetSpec& spec, std::uint64_t seed) {
    if (spec.is_csv) return load_csv(spec.source, spec.target_column, spec.categorical).data;
    return generate_synthetic(spec.source, spec.n, spec.noise, seed);
}

inline PreparedDataset prepare_dataset(const DatasetSpec& spec, const BenchmarkConfig& cfg,
                                       std::size_t dataset_idx) {
    Dataset raw = load_benchmark_dataset(spec, mix_seed(cfg.master_seed, 1000 + dataset_idx));
    ScaledDataset scaled = minmax_scale(raw);
    SplitPair split = select_split(scaled.data, cfg.train_fraction, cfg.split_candidates,
                                   mix_seed(cfg.master_seed, 2000 + dataset_idx));
    PreparedDataset prep{spec.id, std::move(split.train), std::move(split.test)};
    prep.dissimilarity = split.dissimilarity;
    auto [lo, hi] = min_max(scaled.data.targets());
    prep.edges = equal_width_edges(lo, hi);
    auto counts = histogram_counts(prep.train.targets(), lo, hi, kBinCount);
    for (std::size_t b = 0; b < kBinCount; ++b)
        prep.train_counts[b] = static_cast<std::size_t>(counts[b]);
    prep.labels = assign_rank_labels(prep.train_counts);
    prep.mir_before = compute_mir(prep.train.targets());
    prep.holdout_seed = mix_seed(cfg.master_seed, 4000 + dataset_idx);
    return prep;
}

struct CellResult {
    std::vector<double> test_pred;
    std::optional<double> mir_after;
    std::string error;
};

// One (dataset, strategy, repetition) unit: resample-and-train or
// loss-weighted training, then predict the test set. `rep_seed` is shared by
// the baseline and every strategy of the same repetition, so paired
// comparisons see the same model initialization (common random numbers);
// sampler streams stay strategy-specific via `strategy_slot`.
inline CellResult run_cell(const PreparedDataset& prep, const StrategySpec* strategy,
                           const BenchmarkConfig& cfg, std::uint64_t rep_seed,
                           std::size_t strategy_slot) {
    CellResult result;
    try {
        MlpConfig mlp_cfg = cfg.mlp;
        mlp_cfg.seed = mix_seed(rep_seed, 1);
        if (mlp_cfg.holdout_seed == 0) mlp_cfg.holdout_seed = prep.holdout_seed;

        if (strategy == nullptr) {  // baseline: no mitigation
            TrainedModel model = train_mlp(prep.train, mlp_cfg, LossSpec{LossId::mse});
            result.test_pred = predict(model, prep.test);
            return result;
        }

        if (strategy->kind == StrategySpec::Kind::loss_weighted) {
            LossSpec loss{strategy->loss};
            std::optional<RelevanceVector> rel;
            if (loss.needs_weights())
                rel = RelevanceModel::fit(*strategy->relevance, prep.train.targets())
                          .values_for(prep.train.targets());
            TrainedModel model = train_mlp(prep.train, mlp_cfg, loss, rel);
            result.test_pred = predict(model, prep.test);
            return result;
        }

        RelevanceModel rel_model =
            RelevanceModel::fit(*strategy->relevance, prep.train.targets());
        RelevanceVector rel = rel_model.values_for(prep.train.targets());
        std::uint64_t sampler_seed = mix_seed(rep_seed, 100 + strategy_slot);
        ResampleOutcome outcome = [&] {
            switch (strategy->method) {
                case MitigationMethod::smoter:
                    return smoter(prep.train, rel, 0.8, 5, sampler_seed);
                case MitigationMethod::smogn:
                    return smogn(prep.train, rel, 0.8, 5, 0.01, sampler_seed,
                                 /*with_undersampling=*/strategy->with_undersampling);
                case MitigationMethod::wercs:
                    return wercs(prep.train, rel, 0.5,
                                 strategy->with_undersampling ? 0.5 : 0.0, sampler_seed);
                case MitigationMethod::wsmoter:
                    return wsmoter(prep.train, rel, 10, 3.0, sampler_seed);
                case MitigationMethod::csmogn:
                    return csmogn(prep.train, rel, 10, 1, 0, 0.01, 5, sampler_seed);
                case MitigationMethod::crbsmogn:
                    return crbsmogn(prep.train, rel, 10, 1, 0.01, sampler_seed);
            }
            throw Error(ErrorKind::config, "unknown mitigation method");
        }();

        Dataset resampled = std::move(outcome.data);
        bool sampler_has_own_under = strategy->method == MitigationMethod::smogn ||
                                     strategy->method == MitigationMethod::wercs;
        if (strategy->with_undersampling && !sampler_has_own_under) {
            RelevanceVector rel_after = rel_model.values_for(resampled.targets());
            ResampleOutcome under = undersample_ratio(resampled, rel_after,
                                                      strategy->undersampling_rate,
                                                      mix_seed(rep_seed, 200 + strategy_slot));
            resampled = std::move(under.data);
        }
        result.mir_after = compute_mir(resampled.targets());

        TrainedModel model = train_mlp(resampled, mlp_cfg, LossSpec{LossId::mse});
        result.test_pred = predict(model, prep.test);
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

}  // namespace detail

// Full protocol: distribution-matched split per dataset, repeated training of
// a baseline and every strategy, per-bin test errors, cross-strategy
// normalization, and Wilcoxon win/loss tallies against the baseline. Each
// cell owns an RNG stream derived from (master seed, cell index), so reruns
// with the same config are identical regardless of worker count.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.datasets.empty()) throw Error(ErrorKind::config, "benchmark needs datasets");
    if (cfg.repetitions < 1) throw Error(ErrorKind::config, "benchmark needs repetitions >= 1");
    for (const auto& s : cfg.strategies) StrategySpec::check_applicability(s);

    std::vector<detail::PreparedDataset> prepared;
    prepared.reserve(cfg.datasets.size());
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di)
        prepared.push_back(detail::prepare_dataset(cfg.datasets[di], cfg, di));

    const std::size_t n_strategies = cfg.strategies.size();
    const std::size_t per_dataset = (1 + n_strategies) * cfg.repetitions;
    const std::size_t n_cells = cfg.datasets.size() * per_dataset;

    std::vector<detail::CellResult> results(n_cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t cell = next.fetch_add(1);
            if (cell >= n_cells) break;
            std::size_t di = cell / per_dataset;
            std::size_t rest = cell % per_dataset;
            std::size_t si = rest / cfg.repetitions;  // 0 = baseline, 1.. = strategies
            std::size_t rep = rest % cfg.repetitions;
            const StrategySpec* strategy = si == 0 ? nullptr : &cfg.strategies[si - 1];
            std::uint64_t rep_seed = mix_seed(mix_seed(cfg.master_seed, 3000 + di), rep);
            results[cell] = detail::run_cell(prepared[di], strategy, cfg, rep_seed, si);
        }
    };
    std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.workers, n_cells));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_workers; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    auto cell_at = [&](std::size_t di, std::size_t si, std::size_t rep) -> const detail::CellResult& {
        return results[di * per_dataset + si * cfg.repetitions + rep];
    };

    BenchmarkReport report;
    report.repetitions = cfg.repetitions;
    report.master_seed = cfg.master_seed;

    // Label-ordered aggregation inputs for tallies and mean normalized errors.
    std::vector<std::string> agg_names;
    for (const auto& s : cfg.strategies) agg_names.push_back(s.name());
    if (cfg.with_mean_ensemble)
        for (const auto& s : cfg.strategies) agg_names.push_back(s.name() + "+ensemble");
    std::vector<std::vector<std::array<std::optional<PairedSeries>, kBinCount>>> paired(
        agg_names.size());
    std::vector<std::array<std::vector<double>, kBinCount>> normalized_by_label(
        agg_names.size() + 1);  // + baseline at the end

    for (std::size_t di = 0; di < prepared.size(); ++di) {
        const auto& prep = prepared[di];
        DatasetOutcome outcome;
        outcome.dataset = prep.id;
        outcome.mir_before = prep.mir_before;
        outcome.split_dissimilarity = prep.dissimilarity;
        outcome.edges = prep.edges;
        outcome.train_counts = prep.train_counts;
        outcome.labels = prep.labels;

        std::vector<double> y_test(prep.test.targets().begin(), prep.test.targets().end());

        // Collect per-rep bin reports for baseline, strategies, ensembles.
        const std::size_t n_columns = 1 + n_strategies + (cfg.with_mean_ensemble ? n_strategies : 0);
        std::vector<StrategyOutcome> columns(n_columns);
        columns[0].strategy = "baseline";
        for (std::size_t si = 0; si < n_strategies; ++si)
            columns[1 + si].strategy = cfg.strategies[si].name();
        if (cfg.with_mean_ensemble)
            for (std::size_t si = 0; si < n_strategies; ++si)
                columns[1 + n_strategies + si].strategy = cfg.strategies[si].name() + "+ensemble";

        std::vector<double> mir_after_sum(n_strategies, 0.0);
        std::vector<std::size_t> mir_after_count(n_strategies, 0);

        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            const auto& base_cell = cell_at(di, 0, rep);
            if (!base_cell.error.empty()) {
                columns[0].failures.push_back("rep " + std::to_string(rep) + ": " +
                                              base_cell.error);
                continue;
            }
            BinReport base_report = bin_errors(y_test, base_cell.test_pred, prep.edges);
            for (std::size_t b = 0; b < kBinCount; ++b)
                if (base_report.errors[b])
                    columns[0].rep_errors[b].push_back(*base_report.errors[b]);

            for (std::size_t si = 0; si < n_strategies; ++si) {
                const auto& cell = cell_at(di, 1 + si, rep);
                if (!cell.error.empty()) {
                    columns[1 + si].failures.push_back("rep " + std::to_string(rep) + ": " +
                                                       cell.error);
                    continue;
                }
                if (cell.mir_after) {
                    mir_after_sum[si] += *cell.mir_after;
                    ++mir_after_count[si];
                }
                BinReport rep_report = bin_errors(y_test, cell.test_pred, prep.edges);
                for (std::size_t b = 0; b < kBinCount; ++b)
                    if (rep_report.errors[b])
                        columns[1 + si].rep_errors[b].push_back(*rep_report.errors[b]);

                if (cfg.with_mean_ensemble) {
                    auto combined = ensemble_combine(cell.test_pred, base_cell.test_pred,
                                                     EnsembleConfig{EnsembleMode::mean});
                    BinReport ens_report = bin_errors(y_test, combined, prep.edges);
                    for (std::size_t b = 0; b < kBinCount; ++b)
                        if (ens_report.errors[b])
                            columns[1 + n_strategies + si].rep_errors[b].push_back(
                                *ens_report.errors[b]);
                }
            }
        }

        // Mean errors per column, then per-bin normalization across columns.
        std::vector<BinReport> mean_reports(n_columns);
        for (std::size_t c = 0; c < n_columns; ++c) {
            mean_reports[c].edges = prep.edges;
            mean_reports[c].labels = prep.labels;
            for (std::size_t b = 0; b < kBinCount; ++b) {
                const auto& series = columns[c].rep_errors[b];
                if (!series.empty()) {
                    columns[c].mean_errors[b] = mean_of(series);
                    mean_reports[c].errors[b] = columns[c].mean_errors[b];
                }
            }
        }
        auto normalized = normalize_bin_errors(mean_reports);
        for (std::size_t c = 0; c < n_columns; ++c) columns[c].normalized_errors = normalized[c];

        // Wilcoxon p-values against the baseline, paired over repetitions.
        for (std::size_t c = 1; c < n_columns; ++c) {
            for (std::size_t b = 0; b < kBinCount; ++b) {
                const auto& s = columns[c].rep_errors[b];
                const auto& base = columns[0].rep_errors[b];
                if (s.empty() || s.size() != base.size()) continue;
                columns[c].p_values[b] = wilcoxon_signed_rank(s, base).p_value;
            }
        }
        for (std::size_t si = 0; si < n_strategies; ++si)
            if (mir_after_count[si] > 0)
                columns[1 + si].mir_after =
                    mir_after_sum[si] / static_cast<double>(mir_after_count[si]);

        // Label-ordered aggregation across datasets.
        for (std::size_t c = 1; c < n_columns; ++c) {
            std::array<std::optional<PairedSeries>, kBinCount> by_label;
            for (std::size_t b = 0; b < kBinCount; ++b) {
                std::size_t rank = static_cast<std::size_t>(prep.labels[b]);
                const auto& s = columns[c].rep_errors[b];
                const auto& base = columns[0].rep_errors[b];
                if (s.empty() || s.size() != base.size()) continue;
                by_label[rank] = PairedSeries{s, base};
            }
            paired[c - 1].push_back(by_label);
        }
        for (std::size_t c = 0; c < n_columns; ++c) {
            std::size_t agg_slot = c == 0 ? agg_names.size() : c - 1;
            for (std::size_t b = 0; b < kBinCount; ++b)
                if (columns[c].normalized_errors[b]) {
                    std::size_t rank = static_cast<std::size_t>(prep.labels[b]);
                    normalized_by_label[agg_slot][rank].push_back(
                        *columns[c].normalized_errors[b]);
                }
        }

        outcome.baseline = std::move(columns[0]);
        outcome.strategies.assign(std::make_move_iterator(columns.begin() + 1),
                                  std::make_move_iterator(columns.end()));
        report.datasets.push_back(std::move(outcome));
    }

    for (std::size_t a = 0; a < agg_names.size(); ++a)
        report.tallies.emplace_back(agg_names[a], bin_win_tally(paired[a], cfg.alpha));

    auto summarize = [&](std::size_t slot) {
        std::array<std::optional<double>, kBinCount> out;
        for (std::size_t b = 0; b < kBinCount; ++b)
            if (!normalized_by_label[slot][b].empty())
                out[b] = mean_of(normalized_by_label[slot][b]);
        return out;
    };
    report.mean_normalized_by_label.emplace_back("baseline", summarize(agg_names.size()));
    for (std::size_t a = 0; a < agg_names.size(); ++a)
        report.mean_normalized_by_label.emplace_back(agg_names[a], summarize(a));

    return report;
}

inline nlohmann::json BenchmarkReport::to_json() const {
    nlohmann::json j;
    j["repetitions"] = repetitions;
    j["master_seed"] = master_seed;

    auto opt_arr = [](const auto& arr) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& v : arr) {
            if (v) out.push_back(*v);
            else out.push_back(nullptr);
        }
        return out;
    };
    auto strategy_json = [&](const StrategyOutcome& s) {
        nlohmann::json sj;
        sj["strategy"] = s.strategy;
        sj["mean_errors"] = opt_arr(s.mean_errors);
        sj["normalized_errors"] = opt_arr(s.normalized_errors);
        sj["p_values"] = opt_arr(s.p_values);
        sj["rep_errors"] = s.rep_errors;
        if (s.mir_after) sj["mir_after"] = *s.mir_after;
        sj["failures"] = s.failures;
        return sj;
    };

    j["datasets"] = nlohmann::json::array();
    for (const auto& d : datasets) {
        nlohmann::json dj;
        dj["dataset"] = d.dataset;
        dj["mir_before"] = d.mir_before;
        dj["split_dissimilarity"] = d.split_dissimilarity;
        dj["edges"] = d.edges;
        dj["train_counts"] = d.train_counts;
        nlohmann::json labels = nlohmann::json::array();
        for (auto l : d.labels) labels.push_back(to_string(l));
        dj["labels"] = labels;
        dj["baseline"] = strategy_json(d.baseline);
        dj["strategies"] = nlohmann::json::array();
        for (const auto& s : d.strategies) dj["strategies"].push_back(strategy_json(s));
        j["datasets"].push_back(dj);
    }

    j["tallies"] = nlohmann::json::array();
    for (const auto& [name, tally] : tallies) {
        nlohmann::json tj;
        tj["strategy"] = name;
        tj["bins"] = nlohmann::json::array();
        for (std::size_t b = 0; b < kBinCount; ++b)
            tj["bins"].push_back({{"label", to_string(static_cast<BinLabel>(b))},
                                  {"wins", tally[b].wins},
                                  {"significant_wins", tally[b].significant_wins},
                                  {"losses", tally[b].losses},
                                  {"significant_losses", tally[b].significant_losses}});
        j["tallies"].push_back(tj);
    }

    j["mean_normalized_by_label"] = nlohmann::json::array();
    for (const auto& [name, arr] : mean_normalized_by_label)
        j["mean_normalized_by_label"].push_back({{"strategy", name}, {"bins", opt_arr(arr)}});
    return j;
}

inline void BenchmarkReport::write_bin_errors_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
    out << "dataset,strategy,bin_index,bin_label,train_count,mean_error,normalized_error\n";
    out.precision(17);
    auto emit = [&](const std::string& dataset, const DatasetOutcome& d,
                    const StrategyOutcome& s) {
        for (std::size_t b = 0; b < kBinCount; ++b) {
            if (!s.mean_errors[b]) continue;
            out << dataset << ',' << s.strategy << ',' << b << ','
                << to_string(d.labels[b]) << ',' << d.train_counts[b] << ','
                << *s.mean_errors[b] << ',';
            if (s.normalized_errors[b]) out << *s.normalized_errors[b];
            out << '\n';
        }
    };
    for (const auto& d : datasets) {
        emit(d.dataset, d, d.baseline);
        for (const auto& s : d.strategies) emit(d.dataset, d, s);
    }
}

inline void BenchmarkReport::write_bin_wins_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
    out << "strategy,bin_label,wins,significant_wins,losses,significant_losses\n";
    for (const auto& [name, tally] : tallies)
        for (std::size_t b = 0; b < kBinCount; ++b)
            out << name << ',' << to_string(static_cast<BinLabel>(b)) << ',' << tally[b].wins
                << ',' << tally[b].significant_wins << ',' << tally[b].losses << ','
                << tally[b].significant_losses << '\n';
}

}  // namespace imbreg
