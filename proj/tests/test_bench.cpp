#include <doctest.h>

#include <cmath>
#include <random>

#include "warp/bench.hpp"
#include "warp/features.hpp"
#include "warp/io.hpp"
#include "warp/path.hpp"

using namespace warp;

namespace {

WarpingPath make_path(std::initializer_list<std::pair<int, int>> pairs) {
    WarpingPath p;
    p.pairs = pairs;
    return p;
}

WarpingPath random_path(std::mt19937_64& rng, int nx, int ny) {
    WarpingPath p;
    int i = 0, j = 0;
    p.pairs.emplace_back(0, 0);
    while (i < nx - 1 || j < ny - 1) {
        const bool can_i = i < nx - 1, can_j = j < ny - 1;
        const int pick = int(rng() % 3);
        if (can_i && can_j && pick == 0) { ++i; ++j; }
        else if (can_i && (pick == 1 || !can_j)) { ++i; }
        else { ++j; }
        p.pairs.emplace_back(i, j);
    }
    return p;
}

}  // namespace

TEST_CASE("DistortionSpec validation") {
    DistortionSpec spec;
    spec.rates = {1.0};
    CHECK_NOTHROW(spec.validate());
    spec.rates = {1.0, 1.0};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.rates = {0.4};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec.rates = {1.0};
    spec.shift_semitones = 13;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("gt_path_from_warp: identity warp gives the diagonal") {
    const auto warp_fn = make_warp(1.0, {1.0});
    const auto p = gt_path_from_warp(warp_fn, 11, 11, 0.1);
    REQUIRE(p.size() == 11);
    for (int k = 0; k < 11; ++k)
        CHECK(p.pairs[std::size_t(k)] == std::pair<int, int>{k, k});
}

TEST_CASE("gt_path_from_warp: linear r=1.2 compresses the target axis") {
    const double hop = 0.005;
    const int n_x = 201;
    const int n_y = int(std::lround(200 / 1.2)) + 1;
    const auto warp_fn = make_warp(1.0, {1.2});
    const auto p = gt_path_from_warp(warp_fn, n_x, n_y, hop);
    CHECK(validate_path(p, n_x, n_y).ok);
    // Interior pairs follow j ~ i / 1.2.
    for (const auto& [i, j] : p.pairs)
        CHECK(std::abs(double(j) - double(i) / 1.2) <= 2.0);
}

TEST_CASE("gt_path_from_warp: 5-chunk warp changes slope at chunk boundaries") {
    const std::vector<double> rates{0.93, 1.08, 0.94, 0.80, 1.06};
    const auto warp_fn = make_warp(10.0, rates);
    const double hop = 0.005;
    const int n_x = 2001;
    const int n_y = int(std::lround(warp_fn.target_duration() / hop)) + 1;
    const auto p = gt_path_from_warp(warp_fn, n_x, n_y, hop);
    CHECK(validate_path(p, n_x, n_y).ok);

    // Average slope within each chunk tracks 1/r.
    for (int chunk = 0; chunk < 5; ++chunk) {
        const int i0 = chunk * 400 + 40, i1 = (chunk + 1) * 400 - 40;
        double j0 = -1, j1 = -1;
        for (const auto& [i, j] : p.pairs) {
            if (i == i0 && j0 < 0) j0 = j;
            if (i == i1) j1 = j;
        }
        const double slope = (j1 - j0) / double(i1 - i0);
        CHECK(slope == doctest::Approx(1.0 / rates[std::size_t(chunk)]).epsilon(0.02));
    }
}

TEST_CASE("gt_path_from_warp rejects a non-monotone warp") {
    TimeWarp bad;
    bad.t_break = {0.0, 1.0, 2.0};
    bad.u_break = {0.0, 1.5, 1.0};
    CHECK_THROWS_AS(gt_path_from_warp(bad, 10, 10, 0.1), std::invalid_argument);
}

TEST_CASE("alignment_error: identical paths score zero") {
    std::mt19937_64 rng(1);
    const auto p = random_path(rng, 12, 9);
    CHECK(alignment_error(p, p) == 0.0);
}

TEST_CASE("alignment_error hand case equals 3/7") {
    const auto est = make_path({{0, 0}, {1, 1}, {2, 2}});
    const auto gt = make_path({{0, 0}, {1, 0}, {2, 1}, {2, 2}});
    CHECK(alignment_error(est, gt) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(serial::alignment_error(est, gt) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("alignment_error is symmetric and matches the serial reference") {
    std::mt19937_64 rng(2);
    for (int rep = 0; rep < 30; ++rep) {
        const int nx = 3 + int(rng() % 30), ny = 3 + int(rng() % 30);
        const auto a = random_path(rng, nx, ny);
        const auto b = random_path(rng, nx, ny);
        const double fwd = alignment_error(a, b);
        CHECK(fwd == doctest::Approx(alignment_error(b, a)).epsilon(1e-12));
        CHECK(fwd == doctest::Approx(serial::alignment_error(a, b)).epsilon(1e-12));
        CHECK(fwd >= 0.0);
    }
}

TEST_CASE("alignment_error rejects mismatched extents") {
    const auto a = make_path({{0, 0}, {1, 1}});
    const auto b = make_path({{0, 0}, {1, 1}, {2, 2}});
    CHECK_THROWS_AS(alignment_error(a, b), std::invalid_argument);
}

TEST_CASE("synth_song is deterministic per seed") {
    const auto [audio_a, controls_a] = synth_song(42, 3.0);
    const auto [audio_b, controls_b] = synth_song(42, 3.0);
    CHECK(audio_a.samples == audio_b.samples);
    CHECK(controls_a.notes.size() == controls_b.notes.size());

    const auto [audio_c, controls_c] = synth_song(43, 3.0);
    CHECK(audio_a.samples != audio_c.samples);
}

TEST_CASE("extracted F0 on the render tracks the control curve") {
    const auto [audio, controls] = synth_song(7, 4.0);
    const auto f0 = f0_contour(audio);

    std::vector<double> ratios;
    for (std::size_t k = 0; k < f0.size(); ++k) {
        const double truth = controls.f0_at(double(k) * f0.hop_seconds);
        if (truth > 0.0 && f0.f0_hz[k] > 0.0) ratios.push_back(f0.f0_hz[k] / truth);
    }
    REQUIRE(ratios.size() > 100);
    std::sort(ratios.begin(), ratios.end());
    CHECK(ratios[ratios.size() / 2] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gap regions are reported unvoiced") {
    const auto [audio, controls] = synth_song(9, 4.0);
    const auto f0 = f0_contour(audio);

    int gap_frames = 0, gap_zero = 0;
    for (std::size_t k = 0; k < f0.size(); ++k) {
        const double t = double(k) * f0.hop_seconds;
        // Interior of a gap: the control F0 is 0 well clear of the boundary.
        if (controls.f0_at(t) == 0.0 && controls.f0_at(t - 0.03) == 0.0 &&
            controls.f0_at(t + 0.03) == 0.0) {
            ++gap_frames;
            gap_zero += f0.f0_hz[k] == 0.0;
        }
    }
    if (gap_frames > 0) CHECK(double(gap_zero) / gap_frames >= 0.9);
}

TEST_CASE("identity distortion reproduces the source render") {
    const auto controls = synth_song_controls(5, 3.0);
    RenderOptions plain;
    const auto source = render_song(controls, plain);

    const auto warp_fn = make_warp(3.0, {1.0});
    RenderOptions distorted = plain;
    distorted.warp = &warp_fn;
    const auto target = render_song(controls, distorted);

    REQUIRE(target.samples.size() == source.samples.size());
    for (std::size_t k = 0; k < source.samples.size(); ++k)
        CHECK(std::abs(target.samples[k] - source.samples[k]) < 1e-6);
}

TEST_CASE("r=1.2 shortens the target by the stretch rate") {
    const auto controls = synth_song_controls(5, 3.0);
    const auto warp_fn = make_warp(3.0, {1.2});
    RenderOptions opts;
    opts.warp = &warp_fn;
    const auto target = render_song(controls, opts);
    const double expected = 3.0 / 1.2 * 16000;
    CHECK(std::abs(double(target.samples.size()) - expected) <= 80.0);
}

TEST_CASE("s=+2 scales the tracked F0 by 2^(2/12)") {
    const auto controls = synth_song_controls(11, 3.0);
    RenderOptions plain;
    const auto source = render_song(controls, plain);
    RenderOptions shifted = plain;
    shifted.shift_semitones = 2.0;
    const auto target = render_song(controls, shifted);

    const auto f0_src = f0_contour(source);
    const auto f0_tgt = f0_contour(target);
    std::vector<double> ratios;
    for (std::size_t k = 0; k < std::min(f0_src.size(), f0_tgt.size()); ++k)
        if (f0_src.f0_hz[k] > 0.0 && f0_tgt.f0_hz[k] > 0.0)
            ratios.push_back(f0_tgt.f0_hz[k] / f0_src.f0_hz[k]);
    REQUIRE(ratios.size() > 50);
    std::sort(ratios.begin(), ratios.end());
    CHECK(ratios[ratios.size() / 2] ==
          doctest::Approx(std::pow(2.0, 2.0 / 12.0)).epsilon(0.01));
}

TEST_CASE("make_case produces consistent shapes and a valid gt path") {
    DistortionSpec spec;
    spec.rates = {1.1};
    spec.shift_semitones = 1;
    spec.task = Task::mono_to_poly;
    spec.seed = 3;
    const auto c = make_case(spec, 3.0);

    CHECK(c.source_features.dims() == 25);
    CHECK(c.target_features.dims() == 25);
    CHECK(validate_path(c.gt_path, int(c.source_features.frames()),
                        int(c.target_features.frames())).ok);
    CHECK(c.source_f0.size() == std::size_t(c.source_features.frames()));
    CHECK(c.target_f0.size() == std::size_t(c.target_features.frames()));
    for (double f : c.target_f0.f0_hz) {
        const bool ok = f == 0.0 || (f >= 40.0 && f <= 1500.0);
        CHECK(ok);
    }
}

TEST_CASE("full_grid shapes match the figure layout") {
    CHECK(full_grid("linear", Task::mono_to_mono).size() == 25);
    CHECK(full_grid("nonlinear", Task::mono_to_poly).size() == 5);
    CHECK_THROWS_AS(full_grid("other", Task::mono_to_mono), std::invalid_argument);
}

TEST_CASE("run_experiment: near-identity cell has sub-frame median error") {
    ExperimentConfig cfg;
    cfg.cells = {{"linear", Task::mono_to_mono, 1.0, 0}};
    cfg.n_songs = 2;
    cfg.duration_s = 4.0;
    cfg.seed = 17;
    const auto results = run_experiment(cfg);
    REQUIRE(results.size() == 3);
    for (const auto& r : results) {
        CHECK(r.failures.empty());
        REQUIRE(r.errors.size() == 2);
        CHECK(r.median_e <= 1.0);
    }
}

TEST_CASE("run_experiment output is byte-identical across runs") {
    ExperimentConfig cfg;
    cfg.methods = {Method::dtw};
    cfg.cells = {{"nonlinear", Task::mono_to_mono, 1.0, 1}};
    cfg.n_songs = 2;
    cfg.duration_s = 3.0;
    cfg.seed = 23;
    const auto a = results_to_json(run_experiment(cfg), cfg);
    const auto b = results_to_json(run_experiment(cfg), cfg);
    CHECK(a == b);
    CHECK(results_to_plot_csv(run_experiment(cfg)) ==
          results_to_plot_csv(run_experiment(cfg)));
}
