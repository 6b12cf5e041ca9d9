#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "imbreg/density.hpp"
#include "imbreg/rng.hpp"

using namespace imbreg;

namespace {

// Targets giving histogram counts [4,2,2,1,1] over 5 bins on [0,1].
std::vector<double> counts_42211() {
    return {0.0, 0.05, 0.1, 0.15, 0.25, 0.3, 0.45, 0.5, 0.65, 1.0};
}

double trapezoid_integral(const DensityModel& f, double lo, double hi, std::size_t n) {
    double h = (hi - lo) / static_cast<double>(n - 1);
    double sum = 0.5 * (f.evaluate(lo) + f.evaluate(hi));
    for (std::size_t i = 1; i + 1 < n; ++i) sum += f.evaluate(lo + h * static_cast<double>(i));
    return sum * h;
}

}  // namespace

TEST_CASE("histogram relative frequencies follow the max-normalized counts", "[density]") {
    auto model = fit_histogram(counts_42211(), 5);
    std::vector<double> expected = {1.0, 0.5, 0.5, 0.25, 0.25};
    for (std::size_t b = 0; b < 5; ++b)
        CHECK(model.bin_values()[b] == Catch::Approx(expected[b]));
    CHECK(model.evaluate(0.05) == 1.0);
    CHECK(model.evaluate(0.9) == 0.25);
}

TEST_CASE("histogram assigns the maximum to the last bin", "[density]") {
    auto model = fit_histogram(counts_42211(), 5);
    CHECK(model.evaluate(1.0) == 0.25);  // in bin 4, not out of range
}

TEST_CASE("histogram with all samples in one bin", "[density]") {
    std::vector<double> targets = {0.0, 0.01, 0.02, 1.0};
    auto model = fit_histogram(targets, 4);
    CHECK(model.bin_values()[0] == 1.0);
    CHECK(model.bin_values()[1] == 0.0);
    CHECK(model.bin_values()[3] == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("histogram rejects constant targets and tiny bin counts", "[density]") {
    std::vector<double> constant = {2.0, 2.0, 2.0};
    CHECK_THROWS_AS(fit_histogram(constant, 5), Error);
    std::vector<double> fine = {0.0, 1.0};
    CHECK_THROWS_AS(fit_histogram(fine, 1), Error);
}

TEST_CASE("silverman bandwidth matches the formula on a normal sample", "[density]") {
    Rng rng = make_rng(7);
    std::vector<double> sample(1000);
    for (double& v : sample) v = normal(rng);
    double h = silverman_bandwidth(sample);
    // sigma ~ 1, IQR/1.34 ~ 1 for a standard normal, so h ~ 0.9 * N^(-1/5).
    CHECK(h == Catch::Approx(0.9 * std::pow(1000.0, -0.2)).epsilon(0.05));
}

TEST_CASE("silverman bandwidth scales linearly with the data", "[density]") {
    Rng rng = make_rng(8);
    std::vector<double> sample(400), scaled(400);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        sample[i] = normal(rng);
        scaled[i] = 3.5 * sample[i];
    }
    CHECK(silverman_bandwidth(scaled) ==
          Catch::Approx(3.5 * silverman_bandwidth(sample)).epsilon(1e-12));
}

TEST_CASE("silverman bandwidth handles minimal and degenerate inputs", "[density]") {
    std::vector<double> two = {1.0, 2.0};
    CHECK(silverman_bandwidth(two) > 0.0);
    std::vector<double> flat = {1.0, 1.0, 1.0};
    CHECK_THROWS_AS(silverman_bandwidth(flat), Error);
    std::vector<double> one = {1.0};
    CHECK_THROWS_AS(silverman_bandwidth(one), Error);
}

TEST_CASE("kde at a lone point peaks at the gaussian maximum", "[density]") {
    std::vector<double> targets = {2.0, 100.0};
    auto model = fit_kde(targets, 1.0);
    // Far-apart points: the peak is 1/(N h) * phi(0) per point plus a
    // negligible cross term.
    CHECK(model.evaluate(2.0) ==
          Catch::Approx(0.5 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("kde of a symmetric sample is symmetric", "[density]") {
    std::vector<double> targets = {-1.5, 1.5};
    auto model = fit_kde(targets, 0.7);
    CHECK(model.evaluate(0.4) == Catch::Approx(model.evaluate(-0.4)).epsilon(1e-12));
}

TEST_CASE("kde integrates to one", "[density]") {
    Rng rng = make_rng(11);
    std::vector<double> sample(300);
    for (double& v : sample) v = normal(rng, 0.0, 2.0) + (uniform01(rng) < 0.3 ? 6.0 : 0.0);
    auto model = fit_kde(sample);
    double h = model.bandwidth();
    double integral = trapezoid_integral(model, model.support_lo() - 4.0 * h,
                                         model.support_hi() + 4.0 * h, 4096);
    CHECK(integral == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("smoothed histogram conserves mass", "[density]") {
    // Single nonzero bin at the boundary: the truncated kernel renormalizes,
    // so the total smoothed count equals the original count.
    std::vector<double> targets;
    for (int i = 0; i < 7; ++i) targets.push_back(0.001 * i);
    targets.push_back(1.0);  // stretch the range
    auto model = fit_smoothed_histogram(targets, 50, 5, 4.0);
    double total = 0.0;
    for (double v : model.bin_values()) total += v;
    CHECK(total == Catch::Approx(8.0).margin(1e-9));
    for (double v : model.bin_values()) CHECK(v >= 0.0);
}

TEST_CASE("smoothing a uniform histogram stays uniform away from the edges", "[density]") {
    std::vector<double> targets;
    const std::size_t k = 20;
    for (std::size_t b = 0; b < k; ++b) {
        double center = (static_cast<double>(b) + 0.5) / static_cast<double>(k);
        for (int c = 0; c < 3; ++c) targets.push_back(center);
    }
    targets.front() = 0.0;
    targets.back() = 1.0;
    auto model = fit_smoothed_histogram(targets, k, 5, 4.0);
    // Interior bins (two half-windows away from either edge) keep the count.
    for (std::size_t b = 4; b + 4 < k; ++b)
        CHECK(model.bin_values()[b] == Catch::Approx(3.0).margin(1e-9));
}

TEST_CASE("smoothed histogram validates its parameters", "[density]") {
    std::vector<double> targets = {0.0, 0.5, 1.0};
    CHECK_THROWS_AS(fit_smoothed_histogram(targets, 10, 4, 4.0), Error);  // even window
    CHECK_THROWS_AS(fit_smoothed_histogram(targets, 10, 5, 0.0), Error);  // zero variance
    std::vector<double> flat = {1.0, 1.0};
    CHECK_THROWS_AS(fit_smoothed_histogram(flat, 10, 5, 4.0), Error);
}

TEST_CASE("uniform density evaluates to the reciprocal range", "[density]") {
    auto model = uniform_density(2.0, 6.0);
    CHECK(model.evaluate(3.0) == Catch::Approx(0.25));
    CHECK_THROWS_AS(uniform_density(1.0, 1.0), Error);
}
