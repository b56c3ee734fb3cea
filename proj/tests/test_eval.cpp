#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hsad/eval.hpp"
#include "hsad/rng.hpp"
#include "oracles.hpp"

using namespace hsad;

namespace {

ScoreMap make_scores(int lines, int samples, const std::vector<double>& values) {
    ScoreMap map;
    map.lines = lines;
    map.samples = samples;
    map.scores = values;
    return map;
}

GroundTruthMask make_mask(int lines, int samples, const std::vector<std::uint8_t>& values) {
    GroundTruthMask mask;
    mask.lines = lines;
    mask.samples = samples;
    mask.mask = values;
    return mask;
}

} // namespace

TEST_CASE("perfectly separating scores give AUC 1 and pass through (0,1)") {
    auto scores = make_scores(1, 6, {0.1, 0.2, 0.9, 0.8, 0.15, 0.05});
    auto truth = make_mask(1, 6, {0, 0, 1, 1, 0, 0});
    auto curve = roc_curve(scores, truth);
    CHECK(curve.auc == 1.0);
    bool passes_corner = false;
    for (const auto& p : curve.points)
        if (p.far == 0.0 && p.td == 1.0) passes_corner = true;
    CHECK(passes_corner);
    CHECK(curve.points.front().far == 0.0);
    CHECK(curve.points.front().td == 0.0);
    CHECK(curve.points.back().far == 1.0);
    CHECK(curve.points.back().td == 1.0);
}

TEST_CASE("perfectly inverted scores give AUC 0") {
    auto scores = make_scores(1, 4, {0.9, 0.8, 0.1, 0.2});
    auto truth = make_mask(1, 4, {0, 0, 1, 1});
    CHECK(roc_curve(scores, truth).auc == 0.0);
}

TEST_CASE("roc_curve handles ties as single steps") {
    auto scores = make_scores(1, 4, {0.5, 0.5, 0.5, 0.5});
    auto truth = make_mask(1, 4, {1, 0, 1, 0});
    auto curve = roc_curve(scores, truth);
    // one step from (0,0) straight to (1,1); AUC = 1/2 by the tie convention
    CHECK(curve.auc == 0.5);
    CHECK(curve.points.size() == 2);
}

TEST_CASE("roc_curve matches the pairwise statistic bitwise") {
    Xoshiro256pp rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 50 + static_cast<int>(rng.next() % 950);
        std::vector<double> scores(n);
        std::vector<std::uint8_t> truth(n);
        bool has_pos = false, has_neg = false;
        for (int i = 0; i < n; ++i) {
            // quantized scores force plenty of ties
            scores[i] = std::floor(rng.uniform01() * 16.0) / 16.0;
            truth[i] = rng.uniform01() < 0.2 ? 1 : 0;
            (truth[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos) truth[0] = 1;
        if (!has_neg) truth[1] = 0;

        auto curve = roc_curve(make_scores(1, n, scores), make_mask(1, n, truth));
        auto pairwise = oracle::pairwise_auc(scores, truth);
        CHECK(curve.auc == pairwise.value); // bitwise
        CHECK(std::abs(auc(curve) - curve.auc) < 1e-12);

        // the curve marches monotonically from (0,0) to (1,1)
        CHECK(curve.points.front().far == 0.0);
        CHECK(curve.points.front().td == 0.0);
        CHECK(curve.points.back().far == 1.0);
        CHECK(curve.points.back().td == 1.0);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            CHECK(curve.points[i].far >= curve.points[i - 1].far);
            CHECK(curve.points[i].td >= curve.points[i - 1].td);
        }
    }
}

TEST_CASE("AUC is invariant under strictly increasing transforms") {
    Xoshiro256pp rng(8);
    std::vector<double> scores(300);
    std::vector<std::uint8_t> truth(300);
    for (int i = 0; i < 300; ++i) {
        scores[i] = rng.uniform01() * 10.0;
        truth[i] = i % 7 == 0 ? 1 : 0;
    }
    auto base = roc_curve(make_scores(1, 300, scores), make_mask(1, 300, truth));
    auto transformed = scores;
    for (auto& s : transformed) s = std::exp(0.3 * s) + 5.0;
    auto mapped = roc_curve(make_scores(1, 300, transformed), make_mask(1, 300, truth));
    CHECK(base.auc == mapped.auc);
}

TEST_CASE("roc_curve dimension and degeneracy errors") {
    auto scores = make_scores(1, 4, {1, 2, 3, 4});
    CHECK_THROWS_AS(roc_curve(scores, make_mask(2, 2, {1, 0, 0, 0})), Error);
    try {
        roc_curve(scores, make_mask(1, 4, {1, 1, 1, 1}));
        FAIL("expected DegenerateTruth");
    } catch (const Error& e) {
        CHECK(e.code() == errc::degenerate_truth);
    }
    CHECK_THROWS_AS(roc_curve(scores, make_mask(1, 4, {0, 0, 0, 0})), Error);
}

TEST_CASE("auc of hand-built curves") {
    RocCurve diagonal{{{0, 0}, {1, 1}}, 0.0};
    CHECK(auc(diagonal) == 0.5);
    RocCurve step{{{0, 0}, {0, 1}, {1, 1}}, 0.0};
    CHECK(auc(step) == 1.0);
    RocCurve mid{{{0, 0}, {0.5, 0.8}, {1, 1}}, 0.0};
    CHECK(auc(mid) == doctest::Approx(0.65).epsilon(1e-15));
}

TEST_CASE("adaptive_threshold implements tau = mean + z * sigma") {
    // 1x4 map with mean 10 and population stddev 2
    auto scores = make_scores(1, 4, {8, 12, 8, 12});
    auto result = adaptive_threshold(scores, 1.645);
    CHECK(result.tau == doctest::Approx(13.29).epsilon(1e-12));
    CHECK(result.z_alpha == 1.645);
    for (auto m : result.mask.mask) CHECK(m == 0); // nothing above 13.29

    auto at_mean = adaptive_threshold(scores, 0.0);
    CHECK(at_mean.tau == 10.0);
    CHECK(at_mean.mask.mask == std::vector<std::uint8_t>{0, 1, 0, 1});
}

TEST_CASE("adaptive_threshold on a constant map declares nothing") {
    auto scores = make_scores(2, 2, {3, 3, 3, 3});
    auto result = adaptive_threshold(scores, 1.645);
    CHECK(result.tau == 3.0);
    for (auto m : result.mask.mask) CHECK(m == 0);
}

TEST_CASE("adaptive_threshold mask shrinks weakly as z grows") {
    Xoshiro256pp rng(5);
    std::vector<double> values(400);
    for (auto& v : values) v = rng.uniform01() * 7.0;
    auto scores = make_scores(20, 20, values);
    std::size_t prev = 1u << 31;
    for (double z : {-1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
        auto result = adaptive_threshold(scores, z);
        const std::size_t declared = result.mask.positive_count();
        CHECK(declared <= prev);
        prev = declared;
    }
}

TEST_CASE("render_pgm stretches endpoints and rounds half away from zero") {
    SUBCASE("two-point stretch") {
        auto bytes = render_pgm(make_scores(1, 2, {0.0, 1.0}));
        const std::string header = "P5\n2 1\n255\n";
        REQUIRE(bytes.size() == header.size() + 2);
        CHECK(std::string(bytes.begin(), bytes.begin() + header.size()) == header);
        CHECK(bytes[header.size()] == 0);
        CHECK(bytes[header.size() + 1] == 255);
    }
    SUBCASE("constant map renders all zero") {
        auto bytes = render_pgm(make_scores(1, 3, {4, 4, 4}));
        CHECK(bytes[bytes.size() - 1] == 0);
        CHECK(bytes[bytes.size() - 2] == 0);
        CHECK(bytes[bytes.size() - 3] == 0);
    }
    SUBCASE("midpoint 127.5 rounds to 128") {
        auto bytes = render_pgm(make_scores(1, 3, {0, 5, 10}));
        CHECK(bytes[bytes.size() - 3] == 0);
        CHECK(bytes[bytes.size() - 2] == 128);
        CHECK(bytes[bytes.size() - 1] == 255);
    }
}

TEST_CASE("roc_to_csv format") {
    RocCurve curve{{{0, 0}, {0.25, 1.0}, {1, 1}}, 0.875};
    auto csv = roc_to_csv(curve);
    CHECK(csv.find("far,td\n") == 0);
    CHECK(csv.find("0.25,1\n") != std::string::npos);
    CHECK(csv.find("# auc=0.875\n") != std::string::npos);
    // 17-significant-digit values survive a text round trip
    RocCurve fine{{{0, 0}, {1.0 / 3.0, 2.0 / 3.0}, {1, 1}}, 1.0 / 7.0};
    auto text = roc_to_csv(fine);
    const auto pos = text.find("\n0.33333333333333331");
    CHECK(pos != std::string::npos);
}
