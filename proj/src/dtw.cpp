#include "warp/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace warp {
namespace {

void check_dims(const FeatureSequence& x, const FeatureSequence& y) {
    if (x.dims() != y.dims())
        throw std::invalid_argument("feature dimension mismatch: " +
                                    std::to_string(x.dims()) + " vs " +
                                    std::to_string(y.dims()));
    if (x.frames() < 1 || y.frames() < 1)
        throw std::invalid_argument("empty sequence");
}

}  // namespace

namespace serial {

Eigen::MatrixXd cost_matrix(const FeatureSequence& x, const FeatureSequence& y) {
    check_dims(x, y);
    const Eigen::Index nx = x.frames(), ny = y.frames();
    Eigen::MatrixXd c(nx, ny);
    for (Eigen::Index i = 0; i < nx; ++i)
        for (Eigen::Index j = 0; j < ny; ++j)
            c(i, j) = (x.data.col(i) - y.data.col(j)).squaredNorm();
    return c;
}

}  // namespace serial

Eigen::MatrixXd cost_matrix(const FeatureSequence& x, const FeatureSequence& y) {
    check_dims(x, y);
    const Eigen::Index nx = x.frames(), ny = y.frames();
    Eigen::MatrixXd c(nx, ny);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < nx; ++i)
        for (Eigen::Index j = 0; j < ny; ++j)
            c(i, j) = (x.data.col(i) - y.data.col(j)).squaredNorm();
    return c;
}

double path_cost(const FeatureSequence& x, const FeatureSequence& y,
                 const WarpingPath& path) {
    double total = 0.0;
    for (const auto& [i, j] : path.pairs)
        total += (x.data.col(i) - y.data.col(j)).squaredNorm();
    return total;
}

AlignmentResult dtw_align(const FeatureSequence& x, const FeatureSequence& y,
                          int band_radius) {
    check_dims(x, y);
    const Eigen::Index nx = x.frames(), ny = y.frames();
    constexpr double kInf = std::numeric_limits<double>::infinity();

    // Backpointers: 0 = diag, 1 = from (i-1,j), 2 = from (i,j-1), 3 = start.
    std::vector<uint8_t> from(std::size_t(nx) * std::size_t(ny), 3);
    std::vector<double> prev(ny, kInf), curr(ny, kInf);

    // Squared norms of target frames let a cost row be one matrix-vector
    // product instead of ny column differences.
    Eigen::VectorXd ynorm(ny);
    for (Eigen::Index j = 0; j < ny; ++j) ynorm(j) = y.data.col(j).squaredNorm();

    Eigen::VectorXd costs(ny);
    const double slope = nx > 1 ? double(ny - 1) / double(nx - 1) : 0.0;

    for (Eigen::Index i = 0; i < nx; ++i) {
        const double xn = x.data.col(i).squaredNorm();
        costs.noalias() = -2.0 * (y.data.transpose() * x.data.col(i));
        costs.array() += ynorm.array() + xn;
        costs = costs.cwiseMax(0.0);  // clamp negative round-off

        Eigen::Index jlo = 0, jhi = ny - 1;
        if (band_radius >= 0) {
            const auto center = Eigen::Index(std::lround(slope * double(i)));
            jlo = std::max<Eigen::Index>(0, center - band_radius);
            jhi = std::min<Eigen::Index>(ny - 1, center + band_radius);
        }

        for (Eigen::Index j = 0; j < jlo; ++j) curr[j] = kInf;
        for (Eigen::Index j = jhi + 1; j < ny; ++j) curr[j] = kInf;
        for (Eigen::Index j = jlo; j <= jhi; ++j) {
            uint8_t step = 3;
            double best = kInf;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                const double diag = (i > 0 && j > 0) ? prev[j - 1] : kInf;
                const double up = i > 0 ? prev[j] : kInf;
                const double left = j > 0 ? curr[j - 1] : kInf;
                // tie-break order: diag, (1,0), (0,1)
                best = diag;
                step = 0;
                if (up < best) { best = up; step = 1; }
                if (left < best) { best = left; step = 2; }
            }
            curr[j] = best + costs(j);
            from[std::size_t(i) * ny + j] = step;
        }
        std::swap(prev, curr);
    }

    const double final_cost = prev[ny - 1];
    if (!std::isfinite(final_cost))
        throw std::runtime_error("band too narrow: no feasible path");

    WarpingPath path;
    Eigen::Index i = nx - 1, j = ny - 1;
    while (true) {
        path.pairs.emplace_back(int(i), int(j));
        const uint8_t step = from[std::size_t(i) * ny + j];
        if (step == 3) break;
        if (step == 0) { --i; --j; }
        else if (step == 1) { --i; }
        else { --j; }
    }
    std::reverse(path.pairs.begin(), path.pairs.end());

    AlignmentResult result;
    result.final_cost = final_cost;
    result.normalized_cost = final_cost / double(path.size());
    result.objective_trace = {final_cost};
    result.path = std::move(path);
    return result;
}

namespace {

void enumerate_paths(const Eigen::MatrixXd& cost, Eigen::Index i, Eigen::Index j,
                     WarpingPath& current, double running, double& best_cost,
                     WarpingPath& best_path) {
    running += cost(i, j);
    if (running >= best_cost) return;  // prune; costs are nonnegative
    current.pairs.emplace_back(int(i), int(j));
    if (i == cost.rows() - 1 && j == cost.cols() - 1) {
        best_cost = running;
        best_path = current;
    } else {
        if (i + 1 < cost.rows() && j + 1 < cost.cols())
            enumerate_paths(cost, i + 1, j + 1, current, running, best_cost, best_path);
        if (i + 1 < cost.rows())
            enumerate_paths(cost, i + 1, j, current, running, best_cost, best_path);
        if (j + 1 < cost.cols())
            enumerate_paths(cost, i, j + 1, current, running, best_cost, best_path);
    }
    current.pairs.pop_back();
}

}  // namespace

AlignmentResult dtw_brute(const FeatureSequence& x, const FeatureSequence& y) {
    check_dims(x, y);
    if (x.frames() * y.frames() > 100)
        throw std::invalid_argument("dtw_brute refuses n_x * n_y > 100");

    const Eigen::MatrixXd cost = serial::cost_matrix(x, y);
    WarpingPath current, best_path;
    double best_cost = std::numeric_limits<double>::infinity();
    enumerate_paths(cost, 0, 0, current, 0.0, best_cost, best_path);

    AlignmentResult result;
    result.final_cost = best_cost;
    result.normalized_cost = best_cost / double(best_path.size());
    result.objective_trace = {best_cost};
    result.path = std::move(best_path);
    return result;
}

}  // namespace warp
