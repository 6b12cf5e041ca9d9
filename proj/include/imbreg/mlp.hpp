#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "imbreg/dataset.hpp"
#include "imbreg/encoding.hpp"
#include "imbreg/error.hpp"
#include "imbreg/losses.hpp"
#include "imbreg/relevance.hpp"
#include "imbreg/rng.hpp"

namespace imbreg {

struct MlpConfig {
    std::size_t hidden_layers = 2;
    std::size_t hidden_units = 128;
    double learning_rate = 0.001;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 1000;
    std::size_t early_stopping_patience = 20;
    double validation_fraction = 0.1;
    std::uint64_t seed = 0;
    // When nonzero, the validation holdout is drawn from this separate
    // stream, so repeated trainings with different model seeds share one
    // holdout (keeps paired repetitions on the same effective training set).
    std::uint64_t holdout_seed = 0;
    // Plateau schedule: multiply the learning rate by lr_decay_factor after
    // lr_decay_patience epochs without validation improvement. A factor of 1
    // disables the schedule.
    double lr_decay_factor = 0.5;
    std::size_t lr_decay_patience = 10;

    void validate() const {
        if (hidden_layers < 1 || hidden_units < 1 || batch_size < 1 || max_epochs < 1)
            throw Error(ErrorKind::config, "mlp counts must be >= 1");
        if (!(learning_rate > 0.0))
            throw Error(ErrorKind::config, "learning rate must be positive");
    }
};

// Fully connected net with ReLU hidden layers and a scalar linear output.
// Parameters live in one flat vector (weights then bias per layer), which
// keeps the optimizer and finite-difference checks simple.
class MlpNet {
public:
    MlpNet() = default;

    MlpNet(std::size_t input_dim, std::size_t hidden_layers, std::size_t hidden_units, Rng& rng) {
        dims_.push_back(input_dim);
        for (std::size_t l = 0; l < hidden_layers; ++l) dims_.push_back(hidden_units);
        dims_.push_back(1);
        init_offsets();
        params_.assign(n_params_, 0.0);
        // He-style init for the ReLU stack.
        for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
            double sd = std::sqrt(2.0 / static_cast<double>(dims_[l]));
            double* w = weights(l);
            for (std::size_t i = 0; i < dims_[l + 1] * dims_[l]; ++i) w[i] = normal(rng, 0.0, sd);
        }
    }

    static MlpNet from_dims(std::vector<std::size_t> dims, std::vector<double> params) {
        MlpNet net;
        net.dims_ = std::move(dims);
        net.init_offsets();
        if (params.size() != net.n_params_)
            throw Error(ErrorKind::config, "parameter vector does not match layer dims");
        net.params_ = std::move(params);
        return net;
    }

    std::size_t input_dim() const { return dims_.front(); }
    std::size_t n_layers() const { return dims_.size() - 1; }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }
    std::size_t n_params() const { return n_params_; }

    double forward(std::span<const double> x) const {
        thread_local std::vector<double> a, next;
        a.assign(x.begin(), x.end());
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const std::size_t in = dims_[l], out = dims_[l + 1];
            next.assign(out, 0.0);
            const double* w = weights(l);
            const double* b = biases(l);
            for (std::size_t o = 0; o < out; ++o) {
                double z = b[o];
                const double* wrow = w + o * in;
                for (std::size_t c = 0; c < in; ++c) z += wrow[c] * a[c];
                next[o] = (l + 1 < n_layers()) ? std::max(z, 0.0) : z;
            }
            a.swap(next);
        }
        return a[0];
    }

    std::vector<double> forward_batch(const Matrix& X) const {
        std::vector<double> out(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) out[i] = forward(X.row(i));
        return out;
    }

    // Forward pass for one sample keeping post-activation values per layer,
    // then backward accumulation of parameter gradients given dL/dprediction.
    // `acts` is scratch owned by the caller (reused across samples).
    double forward_store(std::span<const double> x, std::vector<std::vector<double>>& acts) const {
        acts.resize(n_layers() + 1);
        acts[0].assign(x.begin(), x.end());
        for (std::size_t l = 0; l < n_layers(); ++l) {
            const std::size_t in = dims_[l], out = dims_[l + 1];
            acts[l + 1].assign(out, 0.0);
            const double* w = weights(l);
            const double* b = biases(l);
            for (std::size_t o = 0; o < out; ++o) {
                double z = b[o];
                const double* wrow = w + o * in;
                for (std::size_t c = 0; c < in; ++c) z += wrow[c] * acts[l][c];
                acts[l + 1][o] = (l + 1 < n_layers()) ? std::max(z, 0.0) : z;
            }
        }
        return acts[n_layers()][0];
    }

    void backward_accumulate(const std::vector<std::vector<double>>& acts, double dloss_dpred,
                             std::span<double> grad) const {
        thread_local std::vector<double> delta, prev_delta;
        delta.assign(1, dloss_dpred);
        for (std::size_t l = n_layers(); l-- > 0;) {
            const std::size_t in = dims_[l], out = dims_[l + 1];
            const double* w = weights(l);
            double* gw = grad.data() + w_offset_[l];
            double* gb = grad.data() + b_offset_[l];
            const auto& a_in = acts[l];
            for (std::size_t o = 0; o < out; ++o) {
                double dz = delta[o];
                double* gwrow = gw + o * in;
                for (std::size_t c = 0; c < in; ++c) gwrow[c] += dz * a_in[c];
                gb[o] += dz;
            }
            if (l == 0) break;
            prev_delta.assign(in, 0.0);
            for (std::size_t o = 0; o < out; ++o) {
                double dz = delta[o];
                const double* wrow = w + o * in;
                for (std::size_t c = 0; c < in; ++c) prev_delta[c] += wrow[c] * dz;
            }
            // ReLU mask: layer l's stored activation is zero exactly where the
            // unit was inactive.
            for (std::size_t c = 0; c < in; ++c)
                if (acts[l][c] <= 0.0) prev_delta[c] = 0.0;
            delta.swap(prev_delta);
        }
    }

    const double* weights(std::size_t l) const { return params_.data() + w_offset_[l]; }
    double* weights(std::size_t l) { return params_.data() + w_offset_[l]; }
    const double* biases(std::size_t l) const { return params_.data() + b_offset_[l]; }
    double* biases(std::size_t l) { return params_.data() + b_offset_[l]; }

private:
    void init_offsets() {
        w_offset_.clear();
        b_offset_.clear();
        std::size_t off = 0;
        for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
            w_offset_.push_back(off);
            off += dims_[l + 1] * dims_[l];
            b_offset_.push_back(off);
            off += dims_[l + 1];
        }
        n_params_ = off;
    }

    std::vector<std::size_t> dims_;
    std::vector<std::size_t> w_offset_, b_offset_;
    std::vector<double> params_;
    std::size_t n_params_ = 0;
};

// Batch loss + flat parameter gradient; shared by the training loop and the
// finite-difference tests.
inline double loss_with_param_grads(const MlpNet& net, const Matrix& X, std::span<const double> y,
                                    std::span<const double> w, const LossSpec& spec,
                                    std::vector<double>& grad) {
    grad.assign(net.n_params(), 0.0);
    const std::size_t n = X.rows;
    std::vector<double> preds(n), pred_grad(n);
    std::vector<std::vector<std::vector<double>>> acts(n);
    for (std::size_t i = 0; i < n; ++i) preds[i] = net.forward_store(X.row(i), acts[i]);
    double loss = loss_with_pred_grad(spec, preds, y, w, pred_grad);
    for (std::size_t i = 0; i < n; ++i) net.backward_accumulate(acts[i], pred_grad[i], grad);
    return loss;
}

struct TrainedModel {
    MlpNet net;
    FeatureEncoder encoder;
    MlpConfig config;
    LossSpec loss;
    std::vector<double> training_log;    // mean batch loss per epoch
    std::vector<double> validation_log;  // validation loss per epoch
    double best_validation_loss = 0.0;
    std::string target_name;

    nlohmann::json to_json() const {
        return {
            {"dims", net.dims()},
            {"params", net.params()},
            {"encoder", encoder.to_json()},
            {"config",
             {{"hidden_layers", config.hidden_layers},
              {"hidden_units", config.hidden_units},
              {"learning_rate", config.learning_rate},
              {"batch_size", config.batch_size},
              {"max_epochs", config.max_epochs},
              {"early_stopping_patience", config.early_stopping_patience},
              {"validation_fraction", config.validation_fraction},
              {"seed", config.seed}}},
            {"loss",
             {{"id", to_string(loss.id)},
              {"prob_epsilon", loss.prob_epsilon},
              {"bmc_sigma_noise", loss.bmc_sigma_noise}}},
            {"training_log", training_log},
            {"validation_log", validation_log},
            {"best_validation_loss", best_validation_loss},
            {"target_name", target_name},
        };
    }

    static TrainedModel from_json(const nlohmann::json& j) {
        TrainedModel m;
        m.net = MlpNet::from_dims(j.at("dims").get<std::vector<std::size_t>>(),
                                  j.at("params").get<std::vector<double>>());
        m.encoder = FeatureEncoder::from_json(j.at("encoder"));
        const auto& c = j.at("config");
        m.config.hidden_layers = c.at("hidden_layers").get<std::size_t>();
        m.config.hidden_units = c.at("hidden_units").get<std::size_t>();
        m.config.learning_rate = c.at("learning_rate").get<double>();
        m.config.batch_size = c.at("batch_size").get<std::size_t>();
        m.config.max_epochs = c.at("max_epochs").get<std::size_t>();
        m.config.early_stopping_patience = c.at("early_stopping_patience").get<std::size_t>();
        m.config.validation_fraction = c.at("validation_fraction").get<double>();
        m.config.seed = c.at("seed").get<std::uint64_t>();
        m.loss.id = loss_from_string(j.at("loss").at("id").get<std::string>());
        m.loss.prob_epsilon = j.at("loss").at("prob_epsilon").get<double>();
        m.loss.bmc_sigma_noise = j.at("loss").at("bmc_sigma_noise").get<double>();
        m.training_log = j.at("training_log").get<std::vector<double>>();
        m.validation_log = j.at("validation_log").get<std::vector<double>>();
        m.best_validation_loss = j.at("best_validation_loss").get<double>();
        m.target_name = j.at("target_name").get<std::string>();
        return m;
    }
};

// Adam-driven mini-batch training with a validation holdout for early
// stopping. The returned model carries the parameters of the best validation
// epoch, never the last one.
inline TrainedModel train_mlp(const Dataset& train, const MlpConfig& cfg, const LossSpec& loss,
                              const std::optional<RelevanceVector>& rel = {}) {
    cfg.validate();
    if (loss.needs_weights() && !rel)
        throw Error(ErrorKind::config,
                    std::string(to_string(loss.id)) + " loss requires a relevance vector");
    if (rel && rel->values.size() != train.n_rows())
        throw Error(ErrorKind::config, "relevance vector length does not match dataset rows");

    TrainedModel model;
    model.encoder = FeatureEncoder(train);
    model.config = cfg;
    model.loss = loss;
    model.target_name = train.target_name();

    Matrix X = model.encoder.encode(train);
    const std::size_t n = X.rows;
    std::vector<double> y(train.targets().begin(), train.targets().end());
    std::vector<double> w(n, 1.0);
    if (rel) w = rel->values;

    Rng rng = make_rng(cfg.seed);
    model.net = MlpNet(X.cols, cfg.hidden_layers, cfg.hidden_units, rng);

    // Validation holdout.
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    if (cfg.holdout_seed != 0) {
        Rng holdout_rng = make_rng(cfg.holdout_seed);
        shuffle_in_place(holdout_rng, indices);
    } else {
        shuffle_in_place(rng, indices);
    }
    auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction *
                                                     static_cast<double>(n)));
    if (n_val >= n) n_val = n - 1;
    std::vector<std::size_t> val_idx(indices.begin(), indices.begin() + n_val);
    std::vector<std::size_t> train_idx(indices.begin() + n_val, indices.end());

    auto gather = [&](std::span<const std::size_t> rows, Matrix& Xs, std::vector<double>& ys,
                      std::vector<double>& ws) {
        Xs.rows = rows.size();
        Xs.cols = X.cols;
        Xs.data.resize(rows.size() * X.cols);
        ys.resize(rows.size());
        ws.resize(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto r = X.row(rows[i]);
            std::copy(r.begin(), r.end(), Xs.data.begin() + static_cast<long>(i * X.cols));
            ys[i] = y[rows[i]];
            ws[i] = w[rows[i]];
        }
    };

    Matrix X_val;
    std::vector<double> y_val, w_val;
    gather(val_idx, X_val, y_val, w_val);

    const std::size_t np = model.net.n_params();
    std::vector<double> grad(np), m1(np, 0.0), m2(np, 0.0);
    const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
    double beta1_t = 1.0, beta2_t = 1.0;

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> best_params = model.net.params();
    std::size_t patience_count = 0;
    std::size_t plateau_count = 0;
    double lr = cfg.learning_rate;

    Matrix Xb;
    std::vector<double> yb, wb;
    std::vector<std::size_t> batch_rows;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        shuffle_in_place(rng, train_idx);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += cfg.batch_size) {
            std::size_t stop = std::min(start + cfg.batch_size, train_idx.size());
            batch_rows.assign(train_idx.begin() + static_cast<long>(start),
                              train_idx.begin() + static_cast<long>(stop));
            gather(batch_rows, Xb, yb, wb);
            double batch_loss = loss_with_param_grads(model.net, Xb, yb, wb, loss, grad);
            if (!std::isfinite(batch_loss))
                throw Error(ErrorKind::numeric,
                            "non-finite training loss at epoch " + std::to_string(epoch));
            epoch_loss += batch_loss;
            ++n_batches;

            beta1_t *= beta1;
            beta2_t *= beta2;
            auto& params = model.net.params();
            for (std::size_t p = 0; p < np; ++p) {
                m1[p] = beta1 * m1[p] + (1.0 - beta1) * grad[p];
                m2[p] = beta2 * m2[p] + (1.0 - beta2) * grad[p] * grad[p];
                double mhat = m1[p] / (1.0 - beta1_t);
                double vhat = m2[p] / (1.0 - beta2_t);
                params[p] -= lr * mhat / (std::sqrt(vhat) + adam_eps);
            }
        }
        model.training_log.push_back(epoch_loss / static_cast<double>(n_batches));

        double val_loss;
        if (n_val > 0) {
            auto preds = model.net.forward_batch(X_val);
            std::vector<double> dummy(preds.size());
            val_loss = loss_with_pred_grad(loss, preds, y_val, w_val, dummy);
        } else {
            val_loss = model.training_log.back();
        }
        if (!std::isfinite(val_loss))
            throw Error(ErrorKind::numeric,
                        "non-finite validation loss at epoch " + std::to_string(epoch));
        model.validation_log.push_back(val_loss);

        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = model.net.params();
            patience_count = 0;
            plateau_count = 0;
        } else {
            if (++patience_count >= cfg.early_stopping_patience) break;
            if (cfg.lr_decay_factor < 1.0 && ++plateau_count >= cfg.lr_decay_patience) {
                lr *= cfg.lr_decay_factor;
                plateau_count = 0;
            }
        }
    }

    model.net.params() = best_params;
    model.best_validation_loss = best_val;
    return model;
}

inline std::vector<double> predict(const TrainedModel& model, const Matrix& X) {
    if (X.rows > 0 && X.cols != model.net.input_dim())
        throw Error(ErrorKind::config, "feature width does not match model input");
    return model.net.forward_batch(X);
}

inline std::vector<double> predict(const TrainedModel& model, const Dataset& queries) {
    return predict(model, model.encoder.encode(queries));
}

}  // namespace imbreg
