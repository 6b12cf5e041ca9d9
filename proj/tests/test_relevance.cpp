#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "imbreg/relevance.hpp"
#include "imbreg/rng.hpp"

using namespace imbreg;

namespace {

std::vector<double> counts_42211() {
    return {0.0, 0.05, 0.1, 0.15, 0.25, 0.3, 0.45, 0.5, 0.65, 1.0};
}

std::vector<double> skewed_sample(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<double> out(n);
    for (double& v : out) {
        double u = uniform01(rng);
        v = u * u;  // mass piles up near 0
    }
    return out;
}

void check_scale_contract(const RelevanceVector& rel) {
    if (rel.scale == RelevanceScale::bounded01) {
        for (double v : rel.values) {
            CHECK(v >= rel.epsilon);
            CHECK(v <= 1.0);
        }
    } else {
        for (double v : rel.values) CHECK(v > 0.0);
    }
}

}  // namespace

TEST_CASE("pchip relevance hits its boxplot control points", "[relevance]") {
    Rng rng = make_rng(5);
    std::vector<double> targets(500);
    for (double& v : targets) v = normal(rng);
    auto model = RelevanceModel::fit_pchip(targets);
    const auto& cps = model.control_points();
    REQUIRE(cps.size() == 3);
    CHECK(model.evaluate(cps[0].y) == 1.0);             // adjacent low value
    CHECK(model.evaluate(cps[1].y) == model.epsilon()); // median, clamped from 0
    CHECK(model.evaluate(cps[2].y) == 1.0);             // adjacent high value
    // Outside the whiskers the relevance saturates at 1.
    CHECK(model.evaluate(cps[0].y - 10.0) == 1.0);
    CHECK(model.evaluate(cps[2].y + 10.0) == 1.0);
}

TEST_CASE("pchip segments are monotone between control points", "[relevance]") {
    std::vector<ControlPoint> cps = {{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {2.0, 1.0, 0.0}};
    std::vector<double> targets = {0.0, 1.0, 2.0};
    auto model = RelevanceModel::fit_pchip(targets, cps);
    double prev = model.evaluate(0.0);
    for (int i = 1; i <= 100; ++i) {
        double v = model.evaluate(static_cast<double>(i) / 100.0);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    double mid = model.evaluate(0.5);
    CHECK(mid < 1.0);
    CHECK(mid > model.epsilon());
}

TEST_CASE("pchip reports degenerate boxplots as not applicable", "[relevance]") {
    std::vector<double> ties = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0};
    try {
        RelevanceModel::fit_pchip(ties);
        FAIL("expected degenerate error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate);
        CHECK(std::string(e.what()).find("not applicable") != std::string::npos);
    }
}

TEST_CASE("histogram relevance inverts the relative bin frequency", "[relevance]") {
    auto rel = relevance_histogram(counts_42211(), 5);
    std::vector<double> expected = {1e-6, 0.5, 0.5, 0.75, 0.75};
    // Samples sit in bins 0,0,0,0,1,1,2,2,3,4.
    std::vector<std::size_t> bin_of = {0, 0, 0, 0, 1, 1, 2, 2, 3, 4};
    for (std::size_t i = 0; i < rel.values.size(); ++i)
        CHECK(rel.values[i] == Catch::Approx(expected[bin_of[i]]));
    check_scale_contract(rel);
}

TEST_CASE("lds relevance gives the smoothed peak epsilon", "[relevance]") {
    auto targets = skewed_sample(400, 17);
    auto model = RelevanceModel::fit_lds(targets);
    auto rel = model.values_for(targets);
    check_scale_contract(rel);
    CHECK(*std::min_element(rel.values.begin(), rel.values.end()) ==
          Catch::Approx(model.epsilon()));
}

TEST_CASE("kde relevance is epsilon at the density peak and near 1 for outliers", "[relevance]") {
    auto targets = skewed_sample(300, 23);
    targets.push_back(25.0);  // far outlier
    auto rel = relevance_kde(targets);
    check_scale_contract(rel);
    CHECK(*std::min_element(rel.values.begin(), rel.values.end()) == Catch::Approx(1e-6));
    CHECK(rel.values.back() > 0.95);
}

TEST_CASE("denseweight formula matches the hand computation", "[relevance]") {
    std::vector<double> p_normalized = {0.0, 0.5, 1.0};
    auto w = denseweight_weights(p_normalized, 1.0, 1e-6);
    double mean_pre = (1.0 + 0.5 + 1e-6) / 3.0;
    CHECK(w[0] == Catch::Approx(1.0 / mean_pre));
    CHECK(w[1] == Catch::Approx(0.5 / mean_pre));
    CHECK(w[2] == Catch::Approx(1e-6 / mean_pre));
    CHECK((w[0] + w[1] + w[2]) / 3.0 == Catch::Approx(1.0));
}

TEST_CASE("denseweight with alpha 0 gives unit weights", "[relevance]") {
    auto targets = skewed_sample(150, 31);
    auto rel = relevance_denseweight(targets, 0.0);
    for (double v : rel.values) CHECK(v == Catch::Approx(1.0));
    CHECK(rel.scale == RelevanceScale::ratio);
}

TEST_CASE("denseweight is mean-normalized kde relevance at alpha 1", "[relevance]") {
    auto targets = skewed_sample(250, 37);
    auto kde_rel = relevance_kde(targets);
    auto dw_rel = relevance_denseweight(targets, 1.0);
    double mean = std::accumulate(dw_rel.values.begin(), dw_rel.values.end(), 0.0) /
                  static_cast<double>(dw_rel.values.size());
    CHECK(mean == Catch::Approx(1.0).epsilon(1e-12));
    double kde_mean = std::accumulate(kde_rel.values.begin(), kde_rel.values.end(), 0.0) /
                      static_cast<double>(kde_rel.values.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        CHECK(dw_rel.values[i] == Catch::Approx(kde_rel.values[i] / kde_mean).epsilon(1e-10));

    // Identical pre-normalization ordering.
    std::vector<std::size_t> order_kde(targets.size()), order_dw(targets.size());
    std::iota(order_kde.begin(), order_kde.end(), 0);
    order_dw = order_kde;
    std::sort(order_kde.begin(), order_kde.end(),
              [&](std::size_t a, std::size_t b) { return kde_rel.values[a] < kde_rel.values[b]; });
    std::sort(order_dw.begin(), order_dw.end(),
              [&](std::size_t a, std::size_t b) { return dw_rel.values[a] < dw_rel.values[b]; });
    CHECK(order_kde == order_dw);
}

TEST_CASE("density distance fixes the balance point at one half", "[relevance]") {
    auto targets = skewed_sample(300, 41);
    auto model = RelevanceModel::fit_density_distance(targets);
    auto rel = model.values_for(targets);
    check_scale_contract(rel);

    // The most over-represented sample gets epsilon, the most
    // under-represented gets 1.
    CHECK(*std::min_element(rel.values.begin(), rel.values.end()) ==
          Catch::Approx(model.epsilon()));
    CHECK(*std::max_element(rel.values.begin(), rel.values.end()) == Catch::Approx(1.0));

    // Every sample below the domain density has relevance >= 0.5, every
    // sample above it <= 0.5, and within a branch the ordering is the
    // reverse of the kde density ordering.
    auto fx = fit_kde(targets);
    auto [lo, hi] = min_max(std::span<const double>(targets));
    double uniform = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double lambda = fx.evaluate(targets[i]) - uniform;
        if (lambda < 0.0) CHECK(rel.values[i] >= 0.5);
        else CHECK(rel.values[i] <= 0.5 + 1e-12);
    }
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = i + 1; j < targets.size(); ++j) {
            double di = fx.evaluate(targets[i]), dj = fx.evaluate(targets[j]);
            if (di < dj) CHECK(rel.values[i] >= rel.values[j] - 1e-12);
        }
}

TEST_CASE("density ratio inverts the ratio and respects the cap", "[relevance]") {
    auto targets = skewed_sample(300, 43);
    auto model = RelevanceModel::fit_density_ratio(targets, {}, 20.0);
    auto rel = model.values_for(targets);
    CHECK(rel.scale == RelevanceScale::ratio);

    auto fx = fit_kde(targets);
    auto [lo, hi] = min_max(std::span<const double>(targets));
    double fr = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double ratio = fx.evaluate(targets[i]) / fr;
        double expected = std::clamp(1.0 / ratio, 1.0 / 20.0, 20.0);
        CHECK(rel.values[i] == Catch::Approx(expected).epsilon(1e-12));
        if (expected > 1.0 / 20.0 && expected < 20.0)
            CHECK(rel.values[i] * ratio == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("density ratio meaning: twice as frequent means relevance one half", "[relevance]") {
    std::vector<double> targets = {0.0, 1.0};
    auto model = RelevanceModel::fit_density_ratio(targets, uniform_density(0.0, 1.0));
    auto fx = fit_kde(targets);
    double y = 0.5;
    double ratio = fx.evaluate(y) / 1.0;
    CHECK(model.evaluate(y) == Catch::Approx(std::clamp(1.0 / ratio, 0.05, 20.0)));
}

TEST_CASE("scale contract holds for every function over random data", "[relevance]") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto targets = skewed_sample(120, seed);
        check_scale_contract(relevance_histogram(targets));
        check_scale_contract(relevance_lds(targets));
        check_scale_contract(relevance_kde(targets));
        check_scale_contract(relevance_denseweight(targets));
        check_scale_contract(relevance_density_distance(targets));
        check_scale_contract(relevance_density_ratio(targets));
    }
}
