#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "imbreg/error.hpp"

namespace imbreg {

enum class LossId { mse, dense, prob, bmc };

inline const char* to_string(LossId id) {
    switch (id) {
        case LossId::mse: return "mse";
        case LossId::dense: return "dense";
        case LossId::prob: return "prob";
        case LossId::bmc: return "bmc";
    }
    return "?";
}

inline LossId loss_from_string(const std::string& s) {
    if (s == "mse") return LossId::mse;
    if (s == "dense") return LossId::dense;
    if (s == "prob") return LossId::prob;
    if (s == "bmc") return LossId::bmc;
    throw Error(ErrorKind::config, "unknown loss: " + s);
}

struct LossSpec {
    LossId id = LossId::mse;
    double prob_epsilon = 1e-9;   // differentiability guard in the prob loss
    double bmc_sigma_noise = 0.1; // tau = 2 * sigma^2
    double bmc_tau() const { return 2.0 * bmc_sigma_noise * bmc_sigma_noise; }
    bool needs_weights() const { return id == LossId::dense || id == LossId::prob; }
};

// Relevance-weighted mean of a per-sample loss metric (squared error here).
inline double dense_loss(std::span<const double> pred, std::span<const double> y,
                         std::span<const double> w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double e = pred[i] - y[i];
        sum += w[i] * e * e;
    }
    return sum / static_cast<double>(pred.size());
}

// L2 loss regularized with a relevance-weighted absolute-error term; assumes
// targets scaled to [0,1].
inline double prob_loss(std::span<const double> pred, std::span<const double> y,
                        std::span<const double> w, double eps = 1e-9) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double e = y[i] - pred[i];
        sum += e * e + std::sqrt(e * e + eps) * w[i];
    }
    return sum / static_cast<double>(pred.size());
}

// Batch-softmax loss over squared distances with temperature tau, stabilized
// with log-sum-exp.
inline double bmc_loss(std::span<const double> pred, std::span<const double> y, double tau) {
    if (!(tau > 0.0)) throw Error(ErrorKind::config, "bmc temperature must be positive");
    const std::size_t n = pred.size();
    double total = 0.0;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double zmax = -1e300;
        for (std::size_t j = 0; j < n; ++j) {
            double diff = pred[i] - y[j];
            z[j] = -diff * diff / tau;
            zmax = std::max(zmax, z[j]);
        }
        double lse = 0.0;
        for (std::size_t j = 0; j < n; ++j) lse += std::exp(z[j] - zmax);
        lse = zmax + std::log(lse);
        total += -(z[i] - lse);
    }
    return total / static_cast<double>(n);
}

// Loss value and gradient with respect to the predictions, evaluated over one
// batch. `w` may be empty (treated as all ones) for unweighted losses.
inline double loss_with_pred_grad(const LossSpec& spec, std::span<const double> pred,
                                  std::span<const double> y, std::span<const double> w,
                                  std::span<double> grad) {
    const std::size_t n = pred.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    switch (spec.id) {
        case LossId::mse: {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double e = pred[i] - y[i];
                sum += e * e;
                grad[i] = 2.0 * e * inv_n;
            }
            return sum * inv_n;
        }
        case LossId::dense: {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double e = pred[i] - y[i];
                sum += w[i] * e * e;
                grad[i] = 2.0 * w[i] * e * inv_n;
            }
            return sum * inv_n;
        }
        case LossId::prob: {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double e = pred[i] - y[i];
                double root = std::sqrt(e * e + spec.prob_epsilon);
                sum += e * e + root * w[i];
                grad[i] = (2.0 * e + w[i] * e / root) * inv_n;
            }
            return sum * inv_n;
        }
        case LossId::bmc: {
            const double tau = spec.bmc_tau();
            double total = 0.0;
            std::vector<double> z(n), p(n);
            for (std::size_t i = 0; i < n; ++i) grad[i] = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double zmax = -1e300;
                for (std::size_t j = 0; j < n; ++j) {
                    double diff = pred[i] - y[j];
                    z[j] = -diff * diff / tau;
                    zmax = std::max(zmax, z[j]);
                }
                double lse = 0.0;
                for (std::size_t j = 0; j < n; ++j) lse += std::exp(z[j] - zmax);
                lse = zmax + std::log(lse);
                total += -(z[i] - lse);
                // dz_ij/dpred_i = -2 (pred_i - y_j) / tau
                double g = 2.0 * (pred[i] - y[i]) / tau;
                for (std::size_t j = 0; j < n; ++j) {
                    p[j] = std::exp(z[j] - lse);
                    g -= p[j] * 2.0 * (pred[i] - y[j]) / tau;
                }
                grad[i] += g * inv_n;
            }
            return total * inv_n;
        }
    }
    throw Error(ErrorKind::config, "unknown loss");
}

}  // namespace imbreg
