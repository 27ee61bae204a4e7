#include <doctest.h>

#include <random>

#include "warp/cca.hpp"
#include "warp/ctw.hpp"
#include "warp/dtw.hpp"
#include "warp/path.hpp"

using namespace warp;

namespace {

FeatureSequence random_seq(std::mt19937_64& rng, int d, int n) {
    std::normal_distribution<double> dist;
    FeatureSequence seq;
    seq.data.resize(d, n);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < n; ++c) seq.data(r, c) = dist(rng);
    return seq;
}

ProjectionPair identity_projections(int d) {
    ProjectionPair proj;
    proj.vx = Eigen::MatrixXd::Identity(d, d);
    proj.vy = Eigen::MatrixXd::Identity(d, d);
    proj.mean_x = Eigen::VectorXd::Zero(d);
    proj.mean_y = Eigen::VectorXd::Zero(d);
    proj.correlations.assign(std::size_t(d), 1.0);
    return proj;
}

}  // namespace

TEST_CASE("uniform_init: equal lengths give the diagonal") {
    const auto p = uniform_init(4, 4);
    REQUIRE(p.size() == 4);
    for (int k = 0; k < 4; ++k)
        CHECK(p.pairs[std::size_t(k)] == std::pair<int, int>{k, k});
}

TEST_CASE("uniform_init: 2x4 follows the rounded line and is valid") {
    const auto p = uniform_init(2, 4);
    CHECK(validate_path(p, 2, 4).ok);
    // i = round(k/3): 0, 0, 1, 1 over j = 0..3.
    REQUIRE(p.size() == 4);
    CHECK(p.pairs[0] == std::pair<int, int>{0, 0});
    CHECK(p.pairs[1] == std::pair<int, int>{0, 1});
    CHECK(p.pairs[2] == std::pair<int, int>{1, 2});
    CHECK(p.pairs[3] == std::pair<int, int>{1, 3});
}

TEST_CASE("uniform_init: degenerate source") {
    const auto p = uniform_init(1, 5);
    REQUIRE(p.size() == 5);
    for (int k = 0; k < 5; ++k)
        CHECK(p.pairs[std::size_t(k)] == std::pair<int, int>{0, k});
    CHECK(validate_path(p, 1, 5).ok);
}

TEST_CASE("uniform_init is always a valid path") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 50; ++rep) {
        const int nx = 1 + int(rng() % 40), ny = 1 + int(rng() % 40);
        CHECK(validate_path(uniform_init(nx, ny), nx, ny).ok);
    }
}

TEST_CASE("ctw_objective: identical setup scores zero") {
    std::mt19937_64 rng(2);
    const auto x = random_seq(rng, 3, 5);
    const auto proj = identity_projections(3);
    const auto obj = ctw_objective(x, x, proj, uniform_init(5, 5));
    CHECK(obj == doctest::Approx(0.0));
}

TEST_CASE("ctw_objective: hand-sized b=1 case") {
    FeatureSequence x, y;
    x.data.resize(1, 2);
    x.data << 1.0, 4.0;
    y.data.resize(1, 2);
    y.data << 2.0, 6.0;

    ProjectionPair proj = identity_projections(1);
    WarpingPath path;
    path.pairs = {{0, 0}, {1, 1}};
    // ((1-2)^2 + (4-6)^2) / 2
    CHECK(ctw_objective(x, y, proj, path) == doctest::Approx(2.5));
}

TEST_CASE("ctw_objective scales as c^2 in the projections") {
    std::mt19937_64 rng(3);
    const auto x = random_seq(rng, 3, 6);
    const auto y = random_seq(rng, 3, 6);
    auto proj = identity_projections(3);
    const auto path = uniform_init(6, 6);
    const double base = ctw_objective(x, y, proj, path);
    proj.vx *= 2.0;
    proj.vy *= 2.0;
    CHECK(ctw_objective(x, y, proj, path) == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("ctw_align: identical inputs converge to the diagonal") {
    std::mt19937_64 rng(4);
    const auto x = random_seq(rng, 4, 12);
    for (const auto init : {CtwInit::uniform, CtwInit::dtw}) {
        CtwConfig cfg;
        cfg.init = init;
        const auto res = ctw_align(x, x, cfg);
        CHECK(res.final_cost == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(validate_path(res.path, 12, 12).ok);
        REQUIRE(res.path.size() == 12);
        for (int k = 0; k < 12; ++k)
            CHECK(res.path.pairs[std::size_t(k)] == std::pair<int, int>{k, k});
    }
}

TEST_CASE("ctw_align with the identity test hook reduces to dtw_align") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 2 + int(rng() % 3);
        const auto x = random_seq(rng, d, 5 + int(rng() % 10));
        const auto y = random_seq(rng, d, 5 + int(rng() % 10));

        CtwConfig cfg;
        cfg.b = d;
        cfg.fixed_projections = identity_projections(d);
        const auto ctw = ctw_align(x, y, cfg);
        const auto dtw = dtw_align(x, y);
        CHECK(ctw.path.pairs == dtw.path.pairs);
        CHECK(ctw.final_cost ==
              doctest::Approx(dtw.final_cost / double(dtw.path.size())).epsilon(1e-9));
    }
}

TEST_CASE("ctw_align trace is non-increasing within slack; best <= first") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = random_seq(rng, 4, 10 + int(rng() % 20));
        const auto y = random_seq(rng, 4, 10 + int(rng() % 20));
        CtwConfig cfg;
        cfg.b = 3;
        cfg.max_iter = 8;
        const auto res = ctw_align(x, y, cfg);
        REQUIRE(!res.objective_trace.empty());
        for (std::size_t k = 1; k < res.objective_trace.size(); ++k)
            CHECK(res.objective_trace[k] <= res.objective_trace[k - 1] + 1e-6);
        CHECK(res.final_cost <= res.objective_trace.front() + 1e-12);
        CHECK(res.final_cost == doctest::Approx(res.objective_trace.back()));
        CHECK(validate_path(res.path, int(x.frames()), int(y.frames())).ok);
        REQUIRE(res.projections.has_value());
    }
}

TEST_CASE("ctw_align recovers the diagonal under an invertible feature map") {
    std::mt19937_64 rng(7);
    const int d = 4, n = 80;
    const auto x = random_seq(rng, d, n);

    Eigen::MatrixXd a;
    do {
        a = Eigen::MatrixXd::Random(d, d);
    } while (std::abs(a.determinant()) < 0.1);

    FeatureSequence y;
    y.data = a * x.data + 0.01 * Eigen::MatrixXd::Random(d, n);

    CtwConfig cfg;
    cfg.init = CtwInit::uniform;
    cfg.b = d;
    const auto ctw = ctw_align(x, y, cfg);
    const auto raw = dtw_align(x, y);

    auto diagonal_hits = [n](const WarpingPath& p) {
        int hits = 0;
        for (const auto& [i, j] : p.pairs) hits += i == j;
        return double(hits) / double(n);
    };
    CHECK(diagonal_hits(ctw.path) >= 0.95);
    CHECK(diagonal_hits(ctw.path) >= diagonal_hits(raw.path));
}

TEST_CASE("ctw_align is deterministic") {
    std::mt19937_64 rng(8);
    const auto x = random_seq(rng, 3, 25);
    const auto y = random_seq(rng, 3, 30);
    CtwConfig cfg;
    const auto a = ctw_align(x, y, cfg);
    const auto b = ctw_align(x, y, cfg);
    CHECK(a.path.pairs == b.path.pairs);
    CHECK(a.objective_trace == b.objective_trace);
}

TEST_CASE("ctw_align rejects bad configs") {
    std::mt19937_64 rng(9);
    const auto x = random_seq(rng, 3, 10);
    CtwConfig cfg;
    cfg.b = 5;
    CHECK_THROWS_AS(ctw_align(x, x, cfg), std::invalid_argument);
    cfg.b = 2;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(ctw_align(x, x, cfg), std::invalid_argument);
}
