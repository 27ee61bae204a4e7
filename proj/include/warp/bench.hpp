// Synthetic alignment benchmark: distorted source/target pairs with known
// warping paths, scored by the symmetric mean point-to-path error e.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "warp/synth.hpp"
#include "warp/types.hpp"

namespace warp {

enum class Task { mono_to_mono, mono_to_poly };
enum class Method { dtw, ctw_uniform, ctw_dtw };

std::string to_string(Task t);
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct DistortionSpec {
    std::vector<double> rates;  // one rate = linear; five = nonlinear chunks
    int shift_semitones = 0;
    Task task = Task::mono_to_mono;
    uint64_t seed = 0;

    void validate() const;
    bool nonlinear() const { return rates.size() > 1; }
};

struct BenchmarkCase {
    FeatureSequence source_features;  // 25-dim MCEP
    FeatureSequence target_features;
    PitchContour source_f0;  // sampled from the control curves
    PitchContour target_f0;
    WarpingPath gt_path;
    DistortionSpec spec;
};

/// Rasterizes j = warp(i*hop)/hop into a valid unit-step path.
WarpingPath gt_path_from_warp(const TimeWarp& warp, int n_x, int n_y,
                              double hop_seconds);

/// Symmetric mean point-to-path distance in frames; 0 iff equal point sets.
double alignment_error(const WarpingPath& est, const WarpingPath& gt);

namespace serial {
double alignment_error(const WarpingPath& est, const WarpingPath& gt);
}

/// Renders source and target from one seeded song and extracts features.
BenchmarkCase make_case(const DistortionSpec& spec, double duration_s = 30.0,
                        int sample_rate = 16000, bool apply_znorm = true);

struct ExperimentCell {
    std::string scenario;  // "linear" or "nonlinear"
    Task task = Task::mono_to_mono;
    double rate = 1.0;  // linear scenario only
    int shift_semitones = 0;
};

struct ExperimentConfig {
    std::vector<Method> methods{Method::dtw, Method::ctw_uniform, Method::ctw_dtw};
    std::vector<ExperimentCell> cells;
    int n_songs = 30;
    uint64_t seed = 1;
    double duration_s = 30.0;
    int sample_rate = 16000;
    int ctw_b = 0;           // 0 = min(d, 10)
    double ctw_lambda = -1.0;
    int ctw_max_iter = 30;
    double ctw_tol = 1e-4;
    bool apply_znorm = true;
};

struct CellResult {
    Method method;
    ExperimentCell cell;
    std::vector<double> errors;       // per song, successful cases only
    std::vector<uint64_t> seeds;      // per song
    std::vector<std::string> failures;  // per-case error messages
    double median_e = 0.0;
    double iqr_e = 0.0;
};

/// The full evaluation grid: 5 rates x 5 shifts (linear) or 5 shifts (nonlinear).
std::vector<ExperimentCell> full_grid(const std::string& scenario, Task task);

/// Runs every (method, cell) over n_songs seeded songs; cases execute in
/// parallel, aggregation is keyed so results are deterministic.
std::vector<CellResult> run_experiment(const ExperimentConfig& cfg);

double median(std::vector<double> v);
double interquartile_range(std::vector<double> v);

}  // namespace warp
