#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "imbreg/error.hpp"
#include "imbreg/mlp.hpp"

namespace imbreg {

enum class EnsembleMode { mean, weighted, ratio_weighted, threshold };

inline const char* to_string(EnsembleMode m) {
    switch (m) {
        case EnsembleMode::mean: return "mean";
        case EnsembleMode::weighted: return "weighted";
        case EnsembleMode::ratio_weighted: return "ratio_weighted";
        case EnsembleMode::threshold: return "threshold";
    }
    return "?";
}

inline EnsembleMode ensemble_mode_from_string(const std::string& s) {
    if (s == "mean") return EnsembleMode::mean;
    if (s == "weighted") return EnsembleMode::weighted;
    if (s == "ratio_weighted") return EnsembleMode::ratio_weighted;
    if (s == "threshold") return EnsembleMode::threshold;
    throw Error(ErrorKind::config, "unknown ensemble mode: " + s);
}

struct EnsembleConfig {
    EnsembleMode mode = EnsembleMode::mean;
    // Model-selection threshold: 0.5 for bounded relevance, 1.0 for
    // ratio-scale relevance (the balance point of either scale).
    double threshold = 0.5;
};

// Combine per-sample predictions of the mitigation-trained model and the
// plain model. Relevance is evaluated at the mean prediction, since the true
// target is unknown at inference time.
inline std::vector<double> ensemble_combine(std::span<const double> pred_imbalanced,
                                            std::span<const double> pred_normal,
                                            const EnsembleConfig& cfg,
                                            const std::function<double(double)>& relevance_of = {}) {
    if (pred_imbalanced.size() != pred_normal.size())
        throw Error(ErrorKind::config, "ensemble needs predictions of equal length");
    if (cfg.mode != EnsembleMode::mean && !relevance_of)
        throw Error(ErrorKind::config,
                    std::string(to_string(cfg.mode)) + " ensemble requires a relevance function");

    std::vector<double> out(pred_normal.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double a = pred_imbalanced[i];
        double b = pred_normal[i];
        double mean = 0.5 * (a + b);
        switch (cfg.mode) {
            case EnsembleMode::mean:
                out[i] = mean;
                break;
            case EnsembleMode::weighted: {
                double w = relevance_of(mean);
                if (w < 0.0 || w > 1.0)
                    throw Error(ErrorKind::applicability,
                                "weighted ensemble needs relevance bounded in [0,1]");
                out[i] = w * a + (1.0 - w) * b;
                break;
            }
            case EnsembleMode::ratio_weighted: {
                double w = relevance_of(mean);
                if (!(w >= 0.0))
                    throw Error(ErrorKind::applicability,
                                "ratio-weighted ensemble needs nonnegative relevance");
                out[i] = (w * a + b) / (w + 1.0);
                break;
            }
            case EnsembleMode::threshold:
                out[i] = relevance_of(mean) < cfg.threshold ? b : a;
                break;
        }
    }
    return out;
}

inline std::vector<double> ensemble_predict(const TrainedModel& model_imbalanced,
                                            const TrainedModel& model_normal, const Dataset& X,
                                            const EnsembleConfig& cfg,
                                            const std::function<double(double)>& relevance_of = {}) {
    return ensemble_combine(predict(model_imbalanced, X), predict(model_normal, X), cfg,
                            relevance_of);
}

}  // namespace imbreg
