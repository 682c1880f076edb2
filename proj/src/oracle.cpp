#include "dicke/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "dicke/numeric.hpp"

namespace dicke {

DenseOperator dense_rotated_number_operator(const BogoliubovPair& pair, int dim) {
    if (dim < 4) throw std::invalid_argument("dense operator needs dim >= 4");
    DenseOperator op;
    op.dim = dim;
    op.entries = Eigen::MatrixXd::Zero(dim, dim);
    double p1 = pair.p1, p2 = pair.p2;
    for (int mu = 0; mu < dim; ++mu) {
        op.entries(mu, mu) = p1 * p1 * double(mu + 1) + p2 * p2 * double(mu);
        if (mu + 2 < dim) {
            double v = p1 * p2 * std::sqrt(double(mu + 1) * double(mu + 2));
            op.entries(mu, mu + 2) = v;
            op.entries(mu + 2, mu) = v;
        }
    }
    return op;
}

EigenDecomposition oracle_eigendecomposition(const DenseOperator& op) {
    if (!op.entries.isApprox(op.entries.transpose(), 1e-14))
        throw std::invalid_argument("operator matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.entries);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("symmetric eigensolver failed");

    EigenDecomposition d;
    d.values = solver.eigenvalues();
    d.vectors = solver.eigenvectors();

    for (int i = 0; i < op.dim; ++i) {
        double r = (op.entries * d.vectors.col(i) - d.values(i) * d.vectors.col(i)).norm();
        if (r > d.max_residual) d.max_residual = r;
    }
    if (d.max_residual > 1e-10 * std::max(1.0, op.entries.norm()))
        throw std::runtime_error("eigendecomposition residual too large: " +
                                 sci12(d.max_residual));
    return d;
}

std::pair<double, double> williamson_frequencies(const ModelParams& p, double lambda) {
    if (classify_phase(p, lambda) != Phase::Normal)
        throw std::invalid_argument("two-mode quadratic form is positive only below the critical coupling");

    // H = omega a^dag a + omega0 b^dag b + lambda (a^dag + a)(b^dag + b)
    // in canonical coordinates (x1, x2, p1, p2).
    Eigen::Matrix4d hess = Eigen::Matrix4d::Zero();
    hess(0, 0) = p.omega;
    hess(1, 1) = p.omega0;
    hess(0, 1) = hess(1, 0) = 2.0 * lambda;
    hess(2, 2) = p.omega;
    hess(3, 3) = p.omega0;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> hs(hess);
    if (hs.info() != Eigen::Success) throw std::runtime_error("Hessian eigensolver failed");
    if (hs.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("quadratic form not positive definite");
    Eigen::Matrix4d root =
        hs.eigenvectors() * hs.eigenvalues().cwiseSqrt().asDiagonal() * hs.eigenvectors().transpose();

    Eigen::Matrix4d sympl = Eigen::Matrix4d::Zero();
    sympl(0, 2) = sympl(1, 3) = 1.0;
    sympl(2, 0) = sympl(3, 1) = -1.0;

    Eigen::Matrix4d k = root * sympl * root;
    Eigen::Matrix4d t = -(k * k);  // symmetric PSD, eigenvalues are squared frequencies, doubled

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> ts(t);
    if (ts.info() != Eigen::Success) throw std::runtime_error("symplectic eigensolver failed");
    Eigen::Vector4d ev = ts.eigenvalues();

    double lo = std::sqrt(std::max(0.0, 0.5 * (ev(0) + ev(1))));
    double hi = std::sqrt(std::max(0.0, 0.5 * (ev(2) + ev(3))));
    double scale = std::abs(ev(3)) + 1.0;
    if (std::abs(ev(0) - ev(1)) > 1e-9 * scale || std::abs(ev(2) - ev(3)) > 1e-9 * scale)
        throw std::runtime_error("symplectic spectrum did not pair up");
    return {lo, hi};
}

std::vector<double> density_matrix_harmonics(const SurvivalAmplitudes& amps, int m_max) {
    int n_top = static_cast<int>(amps.g.size()) - 1;
    if (m_max < 0 || m_max > n_top)
        throw std::invalid_argument("harmonic index range exceeds the amplitude range");

    std::vector<double> w(static_cast<std::size_t>(m_max) + 1, 0.0);
    CompensatedSum norm;
    for (int m = 0; m <= m_max; ++m) {
        CompensatedSum acc;
        for (int n = 0; n + m <= n_top; ++n) {
            std::complex<double> rho =
                amps.g[static_cast<std::size_t>(n + m)] * std::conj(amps.g[static_cast<std::size_t>(n)]);
            acc.add(std::norm(rho));
        }
        w[static_cast<std::size_t>(m)] = acc.value();
        norm.add(acc.value());
    }
    double total = norm.value();
    if (total <= 0.0) throw std::runtime_error("density-matrix harmonics: vanishing norm");
    for (double& v : w) v /= total;
    return w;
}

}  // namespace dicke
