// Canonical time warping: alternate CCA on path-paired frames with DTW on
// the projected sequences until the normalized objective settles.
#pragma once

#include "warp/types.hpp"

namespace warp {

enum class CtwInit { dtw, uniform };

struct CtwConfig {
    CtwInit init = CtwInit::uniform;
    int b = 0;              // embedding dimension; 0 = min(d, 10)
    double lambda = -1.0;   // ridge; negative = scale-aware default per block
    int max_iter = 30;
    double tol = 1e-4;      // relative change of the normalized objective
    // Test hook: when set, CCA is skipped and these projections are used
    // unchanged every iteration.
    std::optional<ProjectionPair> fixed_projections;
};

/// Piecewise-constant rasterization of the straight line (0,0)..(n_x-1,n_y-1)
/// with L = max(n_x, n_y) anchors, completed to legal unit steps.
WarpingPath uniform_init(int n_x, int n_y);

/// ||Vx^T(X-mx)Wx^T - Vy^T(Y-my)Wy^T||_F^2 / m.
double ctw_objective(const FeatureSequence& x, const FeatureSequence& y,
                     const ProjectionPair& proj, const WarpingPath& path);

AlignmentResult ctw_align(const FeatureSequence& x, const FeatureSequence& y,
                          const CtwConfig& cfg);

}  // namespace warp
