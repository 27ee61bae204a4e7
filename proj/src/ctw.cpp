#include "warp/ctw.hpp"

#include <cmath>
#include <limits>

#include "warp/cca.hpp"
#include "warp/dtw.hpp"
#include "warp/path.hpp"

namespace warp {

WarpingPath uniform_init(int n_x, int n_y) {
    if (n_x < 1 || n_y < 1)
        throw std::invalid_argument("uniform_init needs n_x, n_y >= 1");

    WarpingPath path;
    const int len = std::max(n_x, n_y);
    if (len == 1) {
        path.pairs.emplace_back(0, 0);
        return path;
    }
    for (int k = 0; k < len; ++k) {
        const int i = int(std::lround(double(k) * (n_x - 1) / (len - 1)));
        const int j = int(std::lround(double(k) * (n_y - 1) / (len - 1)));
        if (!path.pairs.empty() && path.pairs.back() == std::pair<int, int>{i, j})
            continue;
        path.pairs.emplace_back(i, j);
    }
    return path;
}

double ctw_objective(const FeatureSequence& x, const FeatureSequence& y,
                     const ProjectionPair& proj, const WarpingPath& path) {
    const auto verdict = validate_path(path, int(x.frames()), int(y.frames()));
    if (!verdict.ok)
        throw std::invalid_argument("invalid warping path: " + verdict.message);
    if (x.dims() != proj.vx.rows() || y.dims() != proj.vy.rows())
        throw std::invalid_argument("projection dims do not match sequences");

    double total = 0.0;
    for (const auto& [i, j] : path.pairs) {
        const Eigen::VectorXd px = proj.vx.transpose() * (x.data.col(i) - proj.mean_x);
        const Eigen::VectorXd py = proj.vy.transpose() * (y.data.col(j) - proj.mean_y);
        total += (px - py).squaredNorm();
    }
    return total / double(path.size());
}

namespace {

// Expands the current path into column-paired matrices for the CCA step.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> pair_frames(
    const FeatureSequence& x, const FeatureSequence& y, const WarpingPath& path) {
    const auto m = Eigen::Index(path.size());
    Eigen::MatrixXd px(x.dims(), m), py(y.dims(), m);
    for (Eigen::Index k = 0; k < m; ++k) {
        px.col(k) = x.data.col(path.pairs[k].first);
        py.col(k) = y.data.col(path.pairs[k].second);
    }
    return {std::move(px), std::move(py)};
}

// Drops canonical components whose correlation collapsed to zero.
void shrink_degenerate(ProjectionPair& proj) {
    int rank = 0;
    for (double c : proj.correlations)
        if (c > 1e-10) ++rank;
    if (rank == 0) rank = 1;
    if (rank < int(proj.correlations.size())) {
        proj.vx = proj.vx.leftCols(rank).eval();
        proj.vy = proj.vy.leftCols(rank).eval();
        proj.correlations.resize(rank);
    }
}

}  // namespace

AlignmentResult ctw_align(const FeatureSequence& x, const FeatureSequence& y,
                          const CtwConfig& cfg) {
    if (x.dims() != y.dims())
        throw std::invalid_argument("feature dimension mismatch");
    const int d = int(x.dims());
    const int b = cfg.b == 0 ? std::min(d, 10) : cfg.b;
    if (b < 1 || b > d)
        throw std::invalid_argument("ctw embedding dimension must satisfy 1 <= b <= d");
    if (cfg.max_iter < 1 || cfg.tol <= 0.0)
        throw std::invalid_argument("ctw config requires max_iter >= 1 and tol > 0");

    WarpingPath path = cfg.init == CtwInit::dtw
                           ? dtw_align(x, y).path
                           : uniform_init(int(x.frames()), int(y.frames()));

    AlignmentResult result;
    double best = std::numeric_limits<double>::infinity();
    double prev_obj = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        ProjectionPair proj;
        if (cfg.fixed_projections) {
            proj = *cfg.fixed_projections;
        } else {
            auto [px, py] = pair_frames(x, y, path);
            double lambda = cfg.lambda;
            if (lambda < 0.0) {
                const Eigen::MatrixXd xc = px.colwise() - px.rowwise().mean().eval();
                const Eigen::MatrixXd yc = py.colwise() - py.rowwise().mean().eval();
                lambda = 0.5 * (default_ridge(xc, int(px.cols())) +
                                default_ridge(yc, int(py.cols())));
            }
            proj = cca_fit(px, py, b, lambda);
            shrink_degenerate(proj);
        }

        const FeatureSequence xp = project(x, Side::source, proj);
        const FeatureSequence yp = project(y, Side::target, proj);
        AlignmentResult step = dtw_align(xp, yp);

        const double obj = step.final_cost / double(step.path.size());
        // Keep-best: a regressing iterate (possible under re-centering and
        // regularization) is discarded and the alternation stops.
        if (iter > 0 && obj > prev_obj + 1e-9) break;

        path = std::move(step.path);
        result.objective_trace.push_back(obj);
        if (obj <= best) {
            best = obj;
            result.path = path;
            result.projections = proj;
        }

        const double rel = std::abs(prev_obj - obj) /
                           std::max(prev_obj, std::numeric_limits<double>::min());
        if (iter > 0 && rel < cfg.tol) break;
        prev_obj = obj;
    }

    result.final_cost = best;
    result.normalized_cost = best;
    return result;
}

}  // namespace warp
