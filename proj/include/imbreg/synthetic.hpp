#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "imbreg/dataset.hpp"
#include "imbreg/error.hpp"
#include "imbreg/mlp.hpp"
#include "imbreg/rng.hpp"

namespace imbreg {

// Closed-form targets of the synthetic generators; exposed separately so the
// formulas can be checked on chosen inputs.
namespace synth {

inline double euclidean(double a, double b) { return std::sqrt(a * a + b * b); }

inline double nernst(double r, double t, double z, double f, double a1, double a2) {
    return (r * t) / (z * f) * std::log(a1 / a2);
}

inline double stribeck(double mu1, double mu2, double force, double theta1, double theta2,
                       double delta) {
    return mu1 * force +
           (mu2 * force + mu1 * force) * std::exp(-std::pow(std::abs(theta1 / theta2), delta));
}

inline double arctan(double x) { return std::atan(x); }

inline double friedman1(std::span<const double> x) {
    return 10.0 * std::sin(std::numbers::pi * x[0] * x[1]) + 20.0 * (x[2] - 0.5) * (x[2] - 0.5) +
           10.0 * x[3] + 5.0 * x[4];
}

inline double friedman2(std::span<const double> x) {
    double inner = x[1] * x[2] - 1.0 / (x[1] * x[3]);
    return std::sqrt(x[0] * x[0] + inner * inner);
}

inline double friedman3(std::span<const double> x) {
    double inner = x[1] * x[2] - 1.0 / (x[1] * x[3]);
    return std::atan(inner / x[0]);
}

}  // namespace synth

inline const std::vector<std::string>& synthetic_generator_names() {
    static const std::vector<std::string> names = {
        "euclidean",         "nernst",    "stribeck",  "arctan",    "random_linear",
        "sparse_uncorrelated", "friedman1", "friedman2", "friedman3", "random_mlp"};
    return names;
}

// Draw `n` samples from a named generator. Feature sampling ranges are fixed
// library defaults (the formulas determine the target, the ranges are
// configuration). When noise_sd_fraction > 0, each feature is perturbed with
// Gaussian noise of that fraction of the feature's standard deviation before
// the targets are computed, so the target stays an exact function of the
// recorded features and noisy results stay comparable to clean ones.
inline Dataset generate_synthetic(const std::string& name, std::size_t n,
                                  double noise_sd_fraction = 0.0, std::uint64_t seed = 0) {
    if (n < 1) throw Error(ErrorKind::config, "need n >= 1 samples");
    Rng rng = make_rng(seed);

    std::vector<std::string> feature_names;
    std::vector<std::pair<double, double>> uniform_ranges;  // empty -> standard normal
    enum class Family { closed_form, random_linear, sparse_uncorrelated, random_mlp } family =
        Family::closed_form;

    double (*closed)(std::span<const double>) = nullptr;
    if (name == "euclidean") {
        feature_names = {"a", "b"};
        uniform_ranges = {{0.0, 1.0}, {0.0, 1.0}};
        closed = [](std::span<const double> x) { return synth::euclidean(x[0], x[1]); };
    } else if (name == "nernst") {
        // Gas constant, charge number, and Faraday constant (in 10^4 C/mol)
        // are physical constants; temperature varies around lab conditions
        // and the two activities carry the skew of the log concentration
        // ratio.
        feature_names = {"r", "t", "z", "f", "a1", "a2"};
        uniform_ranges = {{8.314, 8.314}, {290.0, 310.0}, {2.0, 2.0},
                          {9.6485, 9.6485}, {0.05, 1.0}, {0.05, 1.0}};
        closed = [](std::span<const double> x) {
            return synth::nernst(x[0], x[1], x[2], x[3], x[4], x[5]);
        };
    } else if (name == "stribeck") {
        // Fixed rig: unit normal force, fixed kinetic friction coefficient
        // and reference velocity; the static coefficient, sliding velocity,
        // and shape exponent vary.
        feature_names = {"mu1", "mu2", "force", "theta1", "theta2", "delta"};
        uniform_ranges = {{0.25, 0.25}, {0.2, 0.8}, {1.0, 1.0},
                          {0.0, 10.0}, {2.5, 2.5}, {0.5, 2.0}};
        closed = [](std::span<const double> x) {
            return synth::stribeck(x[0], x[1], x[2], x[3], x[4], x[5]);
        };
    } else if (name == "arctan") {
        feature_names = {"x"};
        uniform_ranges = {{-5.0, 5.0}};
        closed = [](std::span<const double> x) { return synth::arctan(x[0]); };
    } else if (name == "friedman1") {
        feature_names = {"x1", "x2", "x3", "x4", "x5"};
        uniform_ranges.assign(5, {0.0, 1.0});
        closed = [](std::span<const double> x) { return synth::friedman1(x); };
    } else if (name == "friedman2" || name == "friedman3") {
        feature_names = {"x1", "x2", "x3", "x4"};
        uniform_ranges = {{0.0, 100.0},
                          {40.0 * std::numbers::pi, 560.0 * std::numbers::pi},
                          {0.0, 1.0},
                          {1.0, 11.0}};
        closed = name == "friedman2"
                     ? [](std::span<const double> x) { return synth::friedman2(x); }
                     : [](std::span<const double> x) { return synth::friedman3(x); };
    } else if (name == "random_linear") {
        feature_names = {"x1", "x2", "x3"};
        uniform_ranges.assign(3, {-1.0, 1.0});
        family = Family::random_linear;
    } else if (name == "sparse_uncorrelated") {
        feature_names = {"x1", "x2", "x3", "x4"};
        family = Family::sparse_uncorrelated;
    } else if (name == "random_mlp") {
        feature_names = {"x1", "x2", "x3", "x4"};
        uniform_ranges.assign(4, {-2.0, 2.0});
        family = Family::random_mlp;
    } else {
        throw Error(ErrorKind::config, "unknown synthetic generator: " + name);
    }

    const std::size_t d = feature_names.size();

    // Generator-specific state comes out of the stream first.
    std::vector<double> coefs;
    MlpNet net;
    if (family == Family::random_linear) {
        coefs.resize(d);
        for (double& c : coefs) c = 100.0 * uniform01(rng);
    } else if (family == Family::random_mlp) {
        net = MlpNet(d, 2, 16, rng);
    }

    std::vector<double> cells(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            cells[i * d + j] = uniform_ranges.empty()
                                   ? normal(rng)
                                   : uniform_in(rng, uniform_ranges[j].first,
                                                uniform_ranges[j].second);

    if (noise_sd_fraction > 0.0) {
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = cells[i * d + j];
            double sd = noise_sd_fraction * sample_std(col);
            if (sd > 0.0)
                for (std::size_t i = 0; i < n; ++i) {
                    double v = cells[i * d + j] + normal(rng, 0.0, sd);
                    // Noisy values stay inside the declared feature range so
                    // formula domains (logs, divisions) remain valid.
                    if (!uniform_ranges.empty())
                        v = std::clamp(v, uniform_ranges[j].first, uniform_ranges[j].second);
                    cells[i * d + j] = v;
                }
        }
    }

    std::vector<double> targets(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<const double> x(cells.data() + i * d, d);
        switch (family) {
            case Family::closed_form:
                targets[i] = closed(x);
                break;
            case Family::random_linear: {
                double y = 0.0;
                for (std::size_t j = 0; j < d; ++j) y += coefs[j] * x[j];
                targets[i] = y;
                break;
            }
            case Family::sparse_uncorrelated:
                targets[i] = normal(rng, x[0] + 2.0 * x[1] - 2.0 * x[2] - 1.5 * x[3], 1.0);
                break;
            case Family::random_mlp:
                targets[i] = net.forward(x);
                break;
        }
    }

    std::vector<ColumnMeta> columns;
    for (const auto& fname : feature_names)
        columns.push_back(ColumnMeta{fname, ColumnKind::numeric, {}});
    return Dataset(std::move(targets), std::move(cells), std::move(columns), "y");
}

}  // namespace imbreg
