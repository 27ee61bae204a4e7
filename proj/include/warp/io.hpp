// File formats: WARPFEAT binary features, CSV features + JSON sidecar,
// F0 CSV, warping-path CSV, and JSON reports.
#pragma once

#include <string>
#include <vector>

#include "warp/bench.hpp"
#include "warp/types.hpp"

namespace warp {

// --- Warping path: CSV with header `i,j`, one 0-based pair per row. ---
void write_path_csv(const std::string& path, const WarpingPath& wp);
WarpingPath read_path_csv(const std::string& path);

// --- F0: CSV `time_s,f0_hz`, 0 for unvoiced. ---
void write_f0_csv(const std::string& path, const PitchContour& contour);
PitchContour read_f0_csv(const std::string& path);

// --- Features, binary: magic WARPFEAT, version u8=1, u32 d, u32 n,
//     f64 hop_seconds, u32 sample_rate, n frames x d LE f32, frame-major. ---
void write_features_bin(const std::string& path, const FeatureSequence& seq);
FeatureSequence read_features_bin(const std::string& path);

// --- Features, CSV: one frame per row, d columns; metadata in a sidecar
//     JSON (path + ".json"). ---
void write_features_csv(const std::string& path, const FeatureSequence& seq);
FeatureSequence read_features_csv(const std::string& path);

/// Dispatches on the WARPFEAT magic, falling back to CSV.
FeatureSequence read_features_auto(const std::string& path);

// --- JSON serialization for diagnostics and results. ---
std::string projection_to_json(const ProjectionPair& proj);
std::string alignment_report_json(const AlignmentResult& result,
                                  const std::string& path_file);
std::string results_to_json(const std::vector<CellResult>& results,
                            const ExperimentConfig& cfg);
std::string results_to_plot_csv(const std::vector<CellResult>& results);

}  // namespace warp
