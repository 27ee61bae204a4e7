#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>

#include "warp/cca.hpp"
#include "warp/io.hpp"

using namespace warp;

namespace {

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("warp_io_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

FeatureSequence random_features(std::mt19937_64& rng, int d, int n) {
    std::normal_distribution<double> dist;
    FeatureSequence seq;
    seq.data.resize(d, n);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < n; ++c) seq.data(r, c) = dist(rng);
    seq.hop_seconds = 0.005;
    seq.sample_rate = 16000;
    seq.label = "test";
    return seq;
}

}  // namespace

TEST_CASE("warping path CSV round-trip") {
    TempDir tmp;
    WarpingPath p;
    p.pairs = {{0, 0}, {1, 0}, {2, 1}, {2, 2}};
    write_path_csv(tmp.file("p.csv"), p);
    const auto back = read_path_csv(tmp.file("p.csv"));
    CHECK(back.pairs == p.pairs);

    std::ofstream(tmp.file("bad.csv")) << "x,y\n0,0\n";
    CHECK_THROWS_AS(read_path_csv(tmp.file("bad.csv")), IoError);
    CHECK_THROWS_AS(read_path_csv(tmp.file("missing.csv")), IoError);
}

TEST_CASE("F0 CSV round-trip preserves values and hop") {
    TempDir tmp;
    PitchContour c;
    c.hop_seconds = 0.005;
    c.f0_hz = {220.0, 0.0, 226.5, 231.25};
    write_f0_csv(tmp.file("f0.csv"), c);
    const auto back = read_f0_csv(tmp.file("f0.csv"));
    REQUIRE(back.size() == c.size());
    CHECK(back.hop_seconds == doctest::Approx(0.005));
    for (std::size_t k = 0; k < c.size(); ++k)
        CHECK(back.f0_hz[k] == doctest::Approx(c.f0_hz[k]));
}

TEST_CASE("binary feature file round-trip (f32 quantization only)") {
    TempDir tmp;
    std::mt19937_64 rng(1);
    const auto seq = random_features(rng, 7, 13);
    write_features_bin(tmp.file("a.feat"), seq);
    const auto back = read_features_bin(tmp.file("a.feat"));
    CHECK(back.dims() == 7);
    CHECK(back.frames() == 13);
    CHECK(back.hop_seconds == seq.hop_seconds);
    CHECK(back.sample_rate == seq.sample_rate);
    CHECK((back.data.cast<float>().cast<double>() - back.data).isZero());
    CHECK((back.data - seq.data).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("binary reader rejects corrupt headers") {
    TempDir tmp;
    std::ofstream(tmp.file("bad.feat"), std::ios::binary) << "NOTMAGIC blah";
    CHECK_THROWS_AS(read_features_bin(tmp.file("bad.feat")), IoError);
}

TEST_CASE("CSV feature file round-trip with sidecar metadata") {
    TempDir tmp;
    std::mt19937_64 rng(2);
    const auto seq = random_features(rng, 4, 9);
    write_features_csv(tmp.file("a.csv"), seq);
    CHECK(std::filesystem::exists(tmp.file("a.csv.json")));
    const auto back = read_features_csv(tmp.file("a.csv"));
    CHECK(back.dims() == 4);
    CHECK(back.frames() == 9);
    CHECK(back.hop_seconds == doctest::Approx(seq.hop_seconds));
    CHECK(back.label == "test");
    CHECK(back.data.isApprox(seq.data, 1e-9));
}

TEST_CASE("read_features_auto dispatches on magic") {
    TempDir tmp;
    std::mt19937_64 rng(3);
    const auto seq = random_features(rng, 3, 5);
    write_features_bin(tmp.file("a.feat"), seq);
    write_features_csv(tmp.file("a.csv"), seq);
    CHECK(read_features_auto(tmp.file("a.feat")).dims() == 3);
    CHECK(read_features_auto(tmp.file("a.csv")).frames() == 5);
}

TEST_CASE("projection JSON carries shapes and correlations") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd x(3, 30), y(3, 30);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 30; ++c) { x(r, c) = dist(rng); y(r, c) = dist(rng); }
    const auto proj = cca_fit(x, y, 2, 1e-4);
    const auto parsed = nlohmann::json::parse(projection_to_json(proj));
    CHECK(parsed["d"] == 3);
    CHECK(parsed["b"] == 2);
    CHECK(parsed["correlations"].size() == 2);
    CHECK(parsed["vx"].size() == 3);
    CHECK(parsed["vx"][0].size() == 2);
}

TEST_CASE("alignment report JSON includes the trace") {
    AlignmentResult res;
    res.path.pairs = {{0, 0}, {1, 1}};
    res.final_cost = 0.5;
    res.normalized_cost = 0.25;
    res.objective_trace = {1.0, 0.5};
    const auto parsed = nlohmann::json::parse(alignment_report_json(res, "p.csv"));
    CHECK(parsed["path_file"] == "p.csv");
    CHECK(parsed["final_cost"] == 0.5);
    CHECK(parsed["objective_trace"].size() == 2);
}
