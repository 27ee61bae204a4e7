#include "warp/remap.hpp"

#include <algorithm>
#include <cmath>

#include "warp/path.hpp"

namespace warp {

PitchContour remap_f0(const PitchContour& source_f0, const PitchContour& target_f0,
                      const WarpingPath& path, const RemapOptions& opts) {
    const int n_x = int(source_f0.size());
    const int n_y = int(target_f0.size());
    const auto verdict = validate_path(path, n_x, n_y);
    if (!verdict.ok)
        throw std::invalid_argument("invalid warping path: " + verdict.message);

    PitchContour out;
    out.hop_seconds = source_f0.hop_seconds;
    out.f0_hz.assign(std::size_t(n_x), 0.0);

    std::vector<double> sum(std::size_t(n_x), 0.0);
    std::vector<int> voiced(std::size_t(n_x), 0);
    for (const auto& [i, j] : path.pairs) {
        const double f0 = target_f0.f0_hz[std::size_t(j)];
        if (f0 > 0.0) {
            sum[std::size_t(i)] += opts.log_domain ? std::log(f0) : f0;
            ++voiced[std::size_t(i)];
        }
    }
    for (int i = 0; i < n_x; ++i) {
        if (voiced[i] == 0) continue;
        const double mean = sum[i] / voiced[i];
        out.f0_hz[std::size_t(i)] = opts.log_domain ? std::exp(mean) : mean;
    }

    if (opts.median3 && n_x >= 3) {
        std::vector<double> filtered = out.f0_hz;
        for (int i = 1; i + 1 < n_x; ++i) {
            double a = out.f0_hz[i - 1], b = out.f0_hz[i], c = out.f0_hz[i + 1];
            filtered[std::size_t(i)] = std::max(std::min(a, b), std::min(std::max(a, b), c));
        }
        out.f0_hz = std::move(filtered);
    }
    return out;
}

}  // namespace warp
