// Core domain types shared by every module.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace warp {

// Thrown on malformed or unsupported files.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a covariance is numerically singular and no ridge was requested.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// d x n matrix of per-frame features (rows = dims, columns = frames).
struct FeatureSequence {
    Eigen::MatrixXd data;       // d rows, n columns
    double hop_seconds = 0.0;   // seconds per frame; 0 when feature-only
    int sample_rate = 0;        // Hz; 0 when synthetic/feature-only
    std::string label;

    Eigen::Index dims() const { return data.rows(); }
    Eigen::Index frames() const { return data.cols(); }
};

/// Ordered list of (source, target) frame index pairs, 0-based.
struct WarpingPath {
    std::vector<std::pair<int, int>> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

struct PathValidation {
    bool ok = false;
    std::string message;  // first violated constraint, empty on pass
    int index = -1;       // pair index of the violation, -1 when n/a
};

/// CCA projections for the two sequences plus fit diagnostics.
struct ProjectionPair {
    Eigen::MatrixXd vx;              // d x b
    Eigen::MatrixXd vy;              // d x b
    std::vector<double> correlations;  // descending, length b
    Eigen::VectorXd mean_x;
    Eigen::VectorXd mean_y;
    double lambda = 0.0;

    Eigen::Index embed_dim() const { return vx.cols(); }
};

struct AlignmentResult {
    WarpingPath path;
    double final_cost = 0.0;              // value of the optimized objective
    double normalized_cost = 0.0;         // final_cost / path length
    std::vector<double> objective_trace;  // per iteration; length 1 for DTW
    std::optional<ProjectionPair> projections;  // present for CTW
};

/// Per-frame F0 in Hz; 0 encodes unvoiced.
struct PitchContour {
    std::vector<double> f0_hz;
    double hop_seconds = 0.0;

    std::size_t size() const { return f0_hz.size(); }
};

struct AudioSignal {
    std::vector<double> samples;  // mono, in [-1, 1]
    int sample_rate = 0;

    double duration() const {
        return sample_rate > 0 ? double(samples.size()) / sample_rate : 0.0;
    }
};

}  // namespace warp
