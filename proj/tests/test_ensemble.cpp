#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "imbreg/ensemble.hpp"
#include "imbreg/rng.hpp"

using namespace imbreg;

TEST_CASE("all modes return the common prediction at a fixed point", "[ensemble]") {
    std::vector<double> p = {0.2, 0.5, 0.9};
    auto rel = [](double) { return 0.7; };
    for (EnsembleMode mode : {EnsembleMode::mean, EnsembleMode::weighted,
                              EnsembleMode::ratio_weighted, EnsembleMode::threshold}) {
        EnsembleConfig cfg{mode, 0.5};
        auto out = ensemble_combine(p, p, cfg, rel);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(out[i] == Catch::Approx(p[i]));
    }
}

TEST_CASE("mean mode averages and is symmetric", "[ensemble]") {
    std::vector<double> a = {1.0, 3.0}, b = {2.0, 5.0};
    EnsembleConfig cfg{EnsembleMode::mean};
    auto ab = ensemble_combine(a, b, cfg);
    CHECK(ab[0] == 1.5);
    CHECK(ab[1] == 4.0);
    auto ba = ensemble_combine(b, a, cfg);
    CHECK(ab == ba);
}

TEST_CASE("weighted mode endpoints", "[ensemble]") {
    std::vector<double> imb = {2.0}, norm = {4.0};
    EnsembleConfig cfg{EnsembleMode::weighted};
    auto all_imb = ensemble_combine(imb, norm, cfg, [](double) { return 1.0; });
    CHECK(all_imb[0] == 2.0);
    auto all_norm = ensemble_combine(imb, norm, cfg, [](double) { return 0.0; });
    CHECK(all_norm[0] == 4.0);
    auto mid = ensemble_combine(imb, norm, cfg, [](double) { return 0.25; });
    CHECK(mid[0] == Catch::Approx(0.25 * 2.0 + 0.75 * 4.0));
    // Not symmetric in its arguments.
    auto swapped = ensemble_combine(norm, imb, cfg, [](double) { return 0.25; });
    CHECK(swapped[0] != mid[0]);
}

TEST_CASE("ratio weighted mode at unit ratio is the arithmetic mean", "[ensemble]") {
    std::vector<double> imb = {2.0}, norm = {4.0};
    EnsembleConfig cfg{EnsembleMode::ratio_weighted};
    auto unit = ensemble_combine(imb, norm, cfg, [](double) { return 1.0; });
    CHECK(unit[0] == Catch::Approx(3.0));
    auto heavy = ensemble_combine(imb, norm, cfg, [](double) { return 3.0; });
    CHECK(heavy[0] == Catch::Approx((3.0 * 2.0 + 4.0) / 4.0));
}

TEST_CASE("threshold mode picks exactly one model", "[ensemble]") {
    std::vector<double> imb = {2.0, 2.0}, norm = {4.0, 4.0};
    EnsembleConfig cfg{EnsembleMode::threshold, 0.5};
    auto low = ensemble_combine(imb, norm, cfg, [](double) { return 0.3; });
    CHECK(low[0] == 4.0);  // below threshold: the normal model
    auto high = ensemble_combine(imb, norm, cfg, [](double) { return 0.8; });
    CHECK(high[0] == 2.0);
    auto at = ensemble_combine(imb, norm, cfg, [](double) { return 0.5; });
    CHECK(at[0] == 2.0);  // >= t selects the imbalance-trained model
}

TEST_CASE("every mode stays inside the two-model interval", "[ensemble]") {
    Rng rng = make_rng(3);
    std::vector<double> a(50), b(50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = normal(rng);
        b[i] = normal(rng);
    }
    auto rel01 = [](double y) { return std::abs(std::sin(y)); };
    auto rel_ratio = [](double y) { return 0.1 + std::abs(y); };
    std::vector<std::pair<EnsembleConfig, std::function<double(double)>>> cases = {
        {{EnsembleMode::mean, 0.5}, nullptr},
        {{EnsembleMode::weighted, 0.5}, rel01},
        {{EnsembleMode::ratio_weighted, 0.5}, rel_ratio},
        {{EnsembleMode::threshold, 0.5}, rel01},
    };
    for (auto& [cfg, rel] : cases) {
        auto out = ensemble_combine(a, b, cfg, rel);
        for (std::size_t i = 0; i < out.size(); ++i) {
            CHECK(out[i] >= std::min(a[i], b[i]) - 1e-12);
            CHECK(out[i] <= std::max(a[i], b[i]) + 1e-12);
        }
        if (cfg.mode == EnsembleMode::threshold)
            for (std::size_t i = 0; i < out.size(); ++i)
                CHECK((out[i] == a[i] || out[i] == b[i]));
    }
}

TEST_CASE("non-mean modes require a relevance function", "[ensemble]") {
    std::vector<double> a = {1.0}, b = {2.0};
    EnsembleConfig cfg{EnsembleMode::weighted};
    CHECK_THROWS_AS(ensemble_combine(a, b, cfg), Error);
}
