// Regularized CCA on frame-paired data via whitening + SVD.
#pragma once

#include "warp/types.hpp"

namespace warp {

/// Scale-aware default ridge: 1e-4 * trace(C)/d, computed per block.
double default_ridge(const Eigen::MatrixXd& centered, int m);

/// Fits projections maximizing canonical correlations of the centered pair.
/// Columns of paired_x/paired_y are in correspondence. lambda is added to
/// both auto-covariances. Sign convention: first nonzero element of each
/// vx column is positive (vy flips with it).
ProjectionPair cca_fit(const Eigen::MatrixXd& paired_x,
                       const Eigen::MatrixXd& paired_y, int b, double lambda);

enum class Side { source, target };

/// Applies V^T (seq - mean) for the chosen side; output has b rows.
FeatureSequence project(const FeatureSequence& seq, Side side,
                        const ProjectionPair& proj);

}  // namespace warp
