// F0 remapping: warp the target contour onto source timing along a path.
#pragma once

#include "warp/types.hpp"

namespace warp {

struct RemapOptions {
    bool log_domain = false;  // average in log-Hz instead of Hz
    bool median3 = false;     // 3-frame median filter on the output
};

/// For each source frame, the mean of the voiced target F0 values paired
/// with it (0 if all paired frames are unvoiced). Output length is always
/// the source length.
PitchContour remap_f0(const PitchContour& source_f0, const PitchContour& target_f0,
                      const WarpingPath& path, const RemapOptions& opts = {});

}  // namespace warp
