#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbreg/density.hpp"
#include "imbreg/error.hpp"
#include "imbreg/util.hpp"

namespace imbreg {

// bounded01 relevance lives in [epsilon, 1]; ratio relevance is positive with
// 1 as the nominal balance point.
enum class RelevanceScale { bounded01, ratio };

enum class RelevanceFunction {
    pchip,
    histogram,
    lds,
    kde,
    denseweight,
    density_distance,
    density_ratio,
};

inline const char* to_string(RelevanceFunction f) {
    switch (f) {
        case RelevanceFunction::pchip: return "pchip";
        case RelevanceFunction::histogram: return "histogram";
        case RelevanceFunction::lds: return "lds";
        case RelevanceFunction::kde: return "kde";
        case RelevanceFunction::denseweight: return "denseweight";
        case RelevanceFunction::density_distance: return "density_distance";
        case RelevanceFunction::density_ratio: return "density_ratio";
    }
    return "?";
}

inline RelevanceFunction relevance_function_from_string(const std::string& s) {
    if (s == "pchip") return RelevanceFunction::pchip;
    if (s == "histogram") return RelevanceFunction::histogram;
    if (s == "lds") return RelevanceFunction::lds;
    if (s == "kde") return RelevanceFunction::kde;
    if (s == "denseweight") return RelevanceFunction::denseweight;
    if (s == "density_distance") return RelevanceFunction::density_distance;
    if (s == "density_ratio") return RelevanceFunction::density_ratio;
    throw Error(ErrorKind::config, "unknown relevance function: " + s);
}

constexpr double kDefaultRelevanceEpsilon = 1e-6;
constexpr double kDefaultRatioCap = 20.0;

struct ControlPoint {
    double y = 0.0;
    double relevance = 0.0;
    double derivative = 0.0;  // control points are local extrema
};

// Per-sample relevance values plus the metadata that mitigation methods need
// to validate their inputs.
struct RelevanceVector {
    std::vector<double> values;
    RelevanceScale scale = RelevanceScale::bounded01;
    double epsilon = kDefaultRelevanceEpsilon;
    RelevanceFunction function_id = RelevanceFunction::kde;
    std::optional<DensityModel> domain_relevance;
};

namespace detail {

// Cubic Hermite evaluation over a strictly increasing control-point sequence.
// Outside the first/last point the boundary relevance is held constant.
inline double hermite_eval(std::span<const ControlPoint> pts, double y) {
    if (y <= pts.front().y) return pts.front().relevance;
    if (y >= pts.back().y) return pts.back().relevance;
    std::size_t seg = 0;
    while (seg + 2 < pts.size() && y > pts[seg + 1].y) ++seg;
    const ControlPoint& a = pts[seg];
    const ControlPoint& b = pts[seg + 1];
    double h = b.y - a.y;
    double t = (y - a.y) / h;
    double t2 = t * t, t3 = t2 * t;
    return a.relevance * (2 * t3 - 3 * t2 + 1) + a.derivative * h * (t3 - 2 * t2 + t) +
           b.relevance * (-2 * t3 + 3 * t2) + b.derivative * h * (t3 - t2);
}

}  // namespace detail

// DenseWeight weighting from an already max-normalized density evaluated per
// sample: w' = max(1 - alpha * p', eps), then divided by mean(w').
inline std::vector<double> denseweight_weights(std::span<const double> normalized_density,
                                               double alpha,
                                               double eps = kDefaultRelevanceEpsilon) {
    std::vector<double> w(normalized_density.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = std::max(1.0 - alpha * normalized_density[i], eps);
    double mean = mean_of(w);
    for (double& v : w) v /= mean;
    return w;
}

// A fitted relevance function: evaluable at any target value, so the same
// model serves per-sample weighting at train time and prediction-relevance
// lookups in ensembles.
class RelevanceModel {
public:
    double operator()(double y) const { return evaluate(y); }

    double evaluate(double y) const {
        switch (function_) {
            case RelevanceFunction::pchip: {
                double v = detail::hermite_eval(control_points_, y);
                return std::clamp(v, epsilon_, 1.0);
            }
            case RelevanceFunction::histogram:
                return std::max(1.0 - fx_->evaluate(y), epsilon_);
            case RelevanceFunction::lds:
            case RelevanceFunction::kde:
                return std::max(1.0 - fx_->evaluate(y) / max_density_, epsilon_);
            case RelevanceFunction::denseweight:
                return std::max(1.0 - alpha_ * fx_->evaluate(y) / max_density_, epsilon_) /
                       mean_weight_;
            case RelevanceFunction::density_distance: {
                if (distance_degenerate_) return 0.5;
                double lambda = fx_->evaluate(y) - fr_->evaluate(y);
                double scaled;
                if (lambda < 0.0)
                    scaled = 0.5 - 0.5 * lambda / (min_lambda_ < 0.0 ? min_lambda_ : 1.0);
                else
                    scaled = 0.5 + 0.5 * lambda / (max_lambda_ > 0.0 ? max_lambda_ : 1.0);
                scaled = std::clamp(scaled, 0.0, 1.0);
                return std::max(1.0 - scaled, epsilon_);
            }
            case RelevanceFunction::density_ratio: {
                double fx = fx_->evaluate(y);
                double fr = fr_->evaluate(y);
                double w = fx > 0.0 ? fr / fx : ratio_cap_;
                return std::clamp(w, 1.0 / ratio_cap_, ratio_cap_);
            }
        }
        return epsilon_;
    }

    RelevanceScale scale() const {
        return (function_ == RelevanceFunction::denseweight ||
                function_ == RelevanceFunction::density_ratio)
                   ? RelevanceScale::ratio
                   : RelevanceScale::bounded01;
    }
    RelevanceFunction function_id() const { return function_; }
    double epsilon() const { return epsilon_; }
    const std::vector<ControlPoint>& control_points() const { return control_points_; }
    const std::optional<DensityModel>& domain_relevance() const { return fr_; }

    RelevanceVector values_for(std::span<const double> targets) const {
        RelevanceVector rv;
        rv.values.resize(targets.size());
        for (std::size_t i = 0; i < targets.size(); ++i) rv.values[i] = evaluate(targets[i]);
        rv.scale = scale();
        rv.epsilon = epsilon_;
        rv.function_id = function_;
        rv.domain_relevance = fr_;
        return rv;
    }

    // ---- fitting -----------------------------------------------------------

    // Boxplot-derived control points (adjacent values at 1.5 * IQR whiskers)
    // unless explicit points are given. Degenerate boxplots are an error: the
    // method is not applicable to such distributions.
    static RelevanceModel fit_pchip(std::span<const double> targets,
                                    std::optional<std::vector<ControlPoint>> points = {},
                                    double eps = kDefaultRelevanceEpsilon) {
        RelevanceModel m(RelevanceFunction::pchip, eps);
        if (points) {
            m.control_points_ = std::move(*points);
        } else {
            std::vector<double> sorted(targets.begin(), targets.end());
            std::sort(sorted.begin(), sorted.end());
            double q1 = detail::quantile_sorted(sorted, 0.25);
            double med = detail::quantile_sorted(sorted, 0.50);
            double q3 = detail::quantile_sorted(sorted, 0.75);
            double iqr = q3 - q1;
            if (!(iqr > 0.0))
                throw Error(ErrorKind::degenerate,
                            "relevance function not applicable: zero IQR");
            double lo_fence = q1 - 1.5 * iqr, hi_fence = q3 + 1.5 * iqr;
            double adj_lo = sorted.back(), adj_hi = sorted.front();
            for (double v : sorted) {
                if (v >= lo_fence && v < adj_lo) adj_lo = v;
                if (v <= hi_fence && v > adj_hi) adj_hi = v;
            }
            m.control_points_ = {{adj_lo, 1.0, 0.0}, {med, 0.0, 0.0}, {adj_hi, 1.0, 0.0}};
        }
        if (m.control_points_.size() < 2)
            throw Error(ErrorKind::config, "pchip needs at least 2 control points");
        for (std::size_t i = 0; i + 1 < m.control_points_.size(); ++i)
            if (!(m.control_points_[i].y < m.control_points_[i + 1].y))
                throw Error(ErrorKind::degenerate,
                            "relevance function not applicable: control points not "
                            "strictly increasing");
        for (const auto& cp : m.control_points_)
            if (cp.relevance < 0.0 || cp.relevance > 1.0)
                throw Error(ErrorKind::config, "control point relevance outside [0,1]");
        return m;
    }

    static RelevanceModel fit_histogram(std::span<const double> targets, std::size_t k = 10,
                                        double eps = kDefaultRelevanceEpsilon) {
        RelevanceModel m(RelevanceFunction::histogram, eps);
        m.fx_ = imbreg::fit_histogram(targets, k);
        return m;
    }

    static RelevanceModel fit_lds(std::span<const double> targets, std::size_t k = 50,
                                  std::size_t kernel_width_bins = 5, double kernel_var_bins = 4.0,
                                  double eps = kDefaultRelevanceEpsilon) {
        RelevanceModel m(RelevanceFunction::lds, eps);
        m.fx_ = fit_smoothed_histogram(targets, k, kernel_width_bins, kernel_var_bins);
        m.max_density_ = *std::max_element(m.fx_->bin_values().begin(),
                                           m.fx_->bin_values().end());
        return m;
    }

    static RelevanceModel fit_kde(std::span<const double> targets, double bandwidth = 0.0,
                                  double eps = kDefaultRelevanceEpsilon) {
        RelevanceModel m(RelevanceFunction::kde, eps);
        m.fx_ = imbreg::fit_kde(targets, bandwidth);
        m.max_density_ = max_over(*m.fx_, targets);
        return m;
    }

    static RelevanceModel fit_denseweight(std::span<const double> targets, double alpha = 1.0,
                                          double eps = kDefaultRelevanceEpsilon) {
        if (alpha < 0.0) throw Error(ErrorKind::config, "denseweight alpha must be >= 0");
        RelevanceModel m(RelevanceFunction::denseweight, eps);
        m.fx_ = imbreg::fit_kde(targets);
        m.max_density_ = max_over(*m.fx_, targets);
        m.alpha_ = alpha;
        m.mean_weight_ = 1.0;
        std::vector<double> pre(targets.size());
        for (std::size_t i = 0; i < targets.size(); ++i) pre[i] = m.evaluate(targets[i]);
        m.mean_weight_ = mean_of(pre);
        return m;
    }

    static RelevanceModel fit_density_distance(std::span<const double> targets,
                                               std::optional<DensityModel> domain_relevance = {},
                                               double eps = kDefaultRelevanceEpsilon) {
        RelevanceModel m(RelevanceFunction::density_distance, eps);
        m.fx_ = imbreg::fit_kde(targets);
        m.fr_ = domain_relevance ? std::move(*domain_relevance)
                                 : default_uniform(targets);
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (double y : targets) {
            double lambda = m.fx_->evaluate(y) - m.fr_->evaluate(y);
            if (first) { lo = hi = lambda; first = false; }
            lo = std::min(lo, lambda);
            hi = std::max(hi, lambda);
        }
        m.min_lambda_ = lo;
        m.max_lambda_ = hi;
        m.distance_degenerate_ = !(hi > lo);
        return m;
    }

    static RelevanceModel fit_density_ratio(std::span<const double> targets,
                                            std::optional<DensityModel> domain_relevance = {},
                                            double ratio_cap = kDefaultRatioCap) {
        if (!(ratio_cap > 1.0)) throw Error(ErrorKind::config, "ratio cap must be > 1");
        RelevanceModel m(RelevanceFunction::density_ratio, kDefaultRelevanceEpsilon);
        m.fx_ = imbreg::fit_kde(targets);
        m.fr_ = domain_relevance ? std::move(*domain_relevance)
                                 : default_uniform(targets);
        m.ratio_cap_ = ratio_cap;
        for (double y : targets)
            if (!(m.fr_->evaluate(y) > 0.0))
                throw Error(ErrorKind::degenerate,
                            "domain relevance density is zero at a sample point");
        return m;
    }

    static RelevanceModel fit(RelevanceFunction f, std::span<const double> targets) {
        switch (f) {
            case RelevanceFunction::pchip: return fit_pchip(targets);
            case RelevanceFunction::histogram: return fit_histogram(targets);
            case RelevanceFunction::lds: return fit_lds(targets);
            case RelevanceFunction::kde: return fit_kde(targets);
            case RelevanceFunction::denseweight: return fit_denseweight(targets);
            case RelevanceFunction::density_distance: return fit_density_distance(targets);
            case RelevanceFunction::density_ratio: return fit_density_ratio(targets);
        }
        throw Error(ErrorKind::config, "unknown relevance function");
    }

private:
    RelevanceModel(RelevanceFunction f, double eps) : function_(f), epsilon_(eps) {}

    static DensityModel default_uniform(std::span<const double> targets) {
        auto [lo, hi] = min_max(targets);
        if (!(hi > lo))
            throw Error(ErrorKind::degenerate, "constant targets: no density support");
        return uniform_density(lo, hi);
    }

    static double max_over(const DensityModel& f, std::span<const double> targets) {
        double best = 0.0;
        for (double y : targets) best = std::max(best, f.evaluate(y));
        if (!(best > 0.0)) throw Error(ErrorKind::degenerate, "density vanished at all samples");
        return best;
    }

    RelevanceFunction function_;
    double epsilon_;
    std::vector<ControlPoint> control_points_;
    std::optional<DensityModel> fx_;
    std::optional<DensityModel> fr_;
    double max_density_ = 1.0;
    double alpha_ = 1.0;
    double mean_weight_ = 1.0;
    double min_lambda_ = 0.0, max_lambda_ = 0.0;
    bool distance_degenerate_ = false;
    double ratio_cap_ = kDefaultRatioCap;
};

// Convenience wrappers returning per-sample vectors directly.

inline RelevanceVector relevance_pchip(std::span<const double> targets,
                                       std::optional<std::vector<ControlPoint>> points = {}) {
    return RelevanceModel::fit_pchip(targets, std::move(points)).values_for(targets);
}

inline RelevanceVector relevance_histogram(std::span<const double> targets, std::size_t k = 10) {
    return RelevanceModel::fit_histogram(targets, k).values_for(targets);
}

inline RelevanceVector relevance_lds(std::span<const double> targets, std::size_t k = 50,
                                     std::size_t width = 5, double variance = 4.0) {
    return RelevanceModel::fit_lds(targets, k, width, variance).values_for(targets);
}

inline RelevanceVector relevance_kde(std::span<const double> targets) {
    return RelevanceModel::fit_kde(targets).values_for(targets);
}

inline RelevanceVector relevance_denseweight(std::span<const double> targets, double alpha = 1.0) {
    return RelevanceModel::fit_denseweight(targets, alpha).values_for(targets);
}

inline RelevanceVector relevance_density_distance(
    std::span<const double> targets, std::optional<DensityModel> domain_relevance = {}) {
    return RelevanceModel::fit_density_distance(targets, std::move(domain_relevance))
        .values_for(targets);
}

inline RelevanceVector relevance_density_ratio(std::span<const double> targets,
                                               std::optional<DensityModel> domain_relevance = {},
                                               double ratio_cap = kDefaultRatioCap) {
    return RelevanceModel::fit_density_ratio(targets, std::move(domain_relevance), ratio_cap)
        .values_for(targets);
}

}  // namespace imbreg
