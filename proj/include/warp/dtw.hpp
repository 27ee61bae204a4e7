// Exact DTW over the {(1,0),(0,1),(1,1)} step set with squared Euclidean
// frame distances. The OpenMP cost-matrix kernel has a serial twin in
// warp::serial used by the tests and the kernel benchmark.
#pragma once

#include "warp/types.hpp"

namespace warp {

/// Pairwise squared Euclidean distances, n_x x n_y. OpenMP over source frames.
Eigen::MatrixXd cost_matrix(const FeatureSequence& x, const FeatureSequence& y);

/// Optimal alignment. band_radius < 0 disables the Sakoe-Chiba band.
AlignmentResult dtw_align(const FeatureSequence& x, const FeatureSequence& y,
                          int band_radius = -1);

/// Exhaustive enumeration oracle; refuses n_x * n_y > 100.
AlignmentResult dtw_brute(const FeatureSequence& x, const FeatureSequence& y);

/// Sum of squared frame distances along a path (re-scoring helper).
double path_cost(const FeatureSequence& x, const FeatureSequence& y,
                 const WarpingPath& path);

namespace serial {
Eigen::MatrixXd cost_matrix(const FeatureSequence& x, const FeatureSequence& y);
}

}  // namespace warp
