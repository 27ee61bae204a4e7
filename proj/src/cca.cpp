#include "warp/cca.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace warp {
namespace {

// Symmetric inverse square root of (C + lambda I). Fails on a numerically
// singular spectrum when no ridge was given.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& cov, double lambda) {
    Eigen::MatrixXd reg = cov;
    reg.diagonal().array() += lambda;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(reg);
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(vals.maxCoeff(), 1.0);
    if (vals.minCoeff() <= cutoff && lambda == 0.0)
        throw SingularityError(
            "covariance is numerically singular; pass a positive lambda");
    Eigen::VectorXd inv = vals.cwiseMax(cutoff).cwiseSqrt().cwiseInverse();
    return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

double default_ridge(const Eigen::MatrixXd& centered, int m) {
    const double denom = double(std::max(m - 1, 1));
    const double trace = centered.rowwise().squaredNorm().sum() / denom;
    return 1e-4 * trace / double(centered.rows());
}

ProjectionPair cca_fit(const Eigen::MatrixXd& paired_x,
                       const Eigen::MatrixXd& paired_y, int b, double lambda) {
    const Eigen::Index d = paired_x.rows();
    const Eigen::Index m = paired_x.cols();
    if (paired_y.rows() != d || paired_y.cols() != m)
        throw std::invalid_argument("paired blocks must share shape");
    if (m < 2) throw std::invalid_argument("cca_fit needs at least 2 paired frames");
    if (b < 1 || b > d)
        throw std::invalid_argument("embedding dimension b must satisfy 1 <= b <= d");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");

    ProjectionPair proj;
    proj.lambda = lambda;
    proj.mean_x = paired_x.rowwise().mean();
    proj.mean_y = paired_y.rowwise().mean();

    const Eigen::MatrixXd xc = paired_x.colwise() - proj.mean_x;
    const Eigen::MatrixXd yc = paired_y.colwise() - proj.mean_y;
    const double denom = double(m - 1);
    const Eigen::MatrixXd cxx = xc * xc.transpose() / denom;
    const Eigen::MatrixXd cyy = yc * yc.transpose() / denom;
    const Eigen::MatrixXd cxy = xc * yc.transpose() / denom;

    const Eigen::MatrixXd wx = inverse_sqrt(cxx, lambda);
    const Eigen::MatrixXd wy = inverse_sqrt(cyy, lambda);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(wx * cxy * wy,
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    proj.vx = wx * svd.matrixU().leftCols(b);
    proj.vy = wy * svd.matrixV().leftCols(b);
    proj.correlations.resize(b);
    for (int k = 0; k < b; ++k)
        proj.correlations[k] = std::min(svd.singularValues()(k), 1.0);

    // Deterministic sign: first nonzero entry of each vx column positive.
    for (int k = 0; k < b; ++k) {
        for (Eigen::Index r = 0; r < d; ++r) {
            const double v = proj.vx(r, k);
            if (std::abs(v) > 1e-12) {
                if (v < 0) {
                    proj.vx.col(k) = -proj.vx.col(k);
                    proj.vy.col(k) = -proj.vy.col(k);
                }
                break;
            }
        }
    }
    return proj;
}

FeatureSequence project(const FeatureSequence& seq, Side side,
                        const ProjectionPair& proj) {
    const Eigen::MatrixXd& v = side == Side::source ? proj.vx : proj.vy;
    const Eigen::VectorXd& mean = side == Side::source ? proj.mean_x : proj.mean_y;
    if (seq.dims() != v.rows())
        throw std::invalid_argument("sequence dims do not match projection");

    FeatureSequence out;
    out.data = v.transpose() * (seq.data.colwise() - mean);
    out.hop_seconds = seq.hop_seconds;
    out.sample_rate = seq.sample_rate;
    out.label = seq.label;
    return out;
}

}  // namespace warp
