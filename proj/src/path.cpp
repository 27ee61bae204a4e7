#include "warp/path.hpp"

#include <algorithm>
#include <cstddef>

namespace warp {

PathValidation validate_path(const WarpingPath& path, int n_x, int n_y) {
    if (path.empty()) return {false, "path is empty", -1};

    const auto& p = path.pairs;
    if (p.front() != std::pair<int, int>{0, 0})
        return {false, "first pair is not (0,0)", 0};
    if (p.back() != std::pair<int, int>{n_x - 1, n_y - 1})
        return {false, "last pair is not (n_x-1, n_y-1)", int(p.size()) - 1};

    for (std::size_t k = 1; k < p.size(); ++k) {
        const int di = p[k].first - p[k - 1].first;
        const int dj = p[k].second - p[k - 1].second;
        const bool legal = (di == 1 && dj == 0) || (di == 0 && dj == 1) ||
                           (di == 1 && dj == 1);
        if (!legal)
            return {false, "illegal step (" + std::to_string(di) + "," +
                               std::to_string(dj) + ")",
                    int(k)};
    }

    const auto m = std::ptrdiff_t(p.size());
    if (m > n_x + n_y - 1)
        return {false, "path longer than n_x + n_y - 1", int(m) - 1};
    if (m < std::max(n_x, n_y))
        return {false, "path shorter than max(n_x, n_y)", int(m) - 1};

    return {true, "", -1};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> path_to_selection_matrices(
    const WarpingPath& path, int n_x, int n_y) {
    const auto verdict = validate_path(path, n_x, n_y);
    if (!verdict.ok)
        throw std::invalid_argument("invalid warping path: " + verdict.message);

    const auto m = Eigen::Index(path.size());
    Eigen::MatrixXd wx = Eigen::MatrixXd::Zero(m, n_x);
    Eigen::MatrixXd wy = Eigen::MatrixXd::Zero(m, n_y);
    for (Eigen::Index k = 0; k < m; ++k) {
        wx(k, path.pairs[k].first) = 1.0;
        wy(k, path.pairs[k].second) = 1.0;
    }
    return {std::move(wx), std::move(wy)};
}

}  // namespace warp
