// Warping-path validation and selection-matrix views.
#pragma once

#include "warp/types.hpp"

namespace warp {

/// Checks boundary, monotonicity/continuity and length bounds against (n_x, n_y).
PathValidation validate_path(const WarpingPath& path, int n_x, int n_y);

/// Expands the pair list into the m x n_x / m x n_y binary selection matrices.
/// Row k has a single 1 at the k-th path pair's index.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> path_to_selection_matrices(
    const WarpingPath& path, int n_x, int n_y);

}  // namespace warp
