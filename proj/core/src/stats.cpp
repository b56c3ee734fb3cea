#include "hsad/stats.hpp"

#include <cmath>

namespace hsad {

Spectrum mean_vector(const SampleSet& samples) {
    if (samples.count() < 1)
        throw Error(errc::empty_sample_set, "mean of zero samples");
    return samples.vectors.rowwise().mean();
}

CovarianceMatrix covariance(const SampleSet& samples, const Spectrum& mean) {
    const int n = samples.count();
    if (n < 2)
        throw Error(errc::too_few_samples,
                    "covariance needs at least 2 samples, got " + std::to_string(n));
    if (mean.size() != samples.vectors.rows())
        throw Error(errc::length_mismatch, "mean length does not match sample dimension");

    Eigen::MatrixXd centered = samples.vectors.colwise() - mean;
    CovarianceMatrix c;
    c.entries.noalias() = centered * centered.transpose();
    c.entries /= static_cast<double>(n);
    // selfadjointView would also do; explicit symmetrization keeps the
    // symmetry invariant exact against accumulation-order noise.
    c.entries = 0.5 * (c.entries + c.entries.transpose()).eval();
    return c;
}

CovarianceMatrix regularized_inverse(const CovarianceMatrix& c, double ridge_fraction) {
    const Eigen::Index dim = c.entries.rows();
    if (dim == 0 || c.entries.cols() != dim)
        throw Error(errc::dimension_mismatch, "covariance matrix is not square");
    if (ridge_fraction < 0.0)
        throw Error(errc::invalid_value, "ridge fraction must be nonnegative");

    const double delta = ridge_fraction * c.entries.trace() / static_cast<double>(dim);
    Eigen::MatrixXd loaded = c.entries;
    loaded.diagonal().array() += delta;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(loaded);
    bool singular = ldlt.info() != Eigen::Success;
    if (!singular) {
        const auto& d = ldlt.vectorD();
        double dmax = d.cwiseAbs().maxCoeff();
        double dmin = d.minCoeff();
        // treat non-positive or below-roundoff pivots as singular
        singular = !(dmax > 0.0) || dmin <= dmax * 1e-14;
    }
    if (singular)
        throw Error(errc::singular_after_ridge,
                    "covariance numerically singular (ridge " + std::to_string(delta) + ")");

    CovarianceMatrix inv;
    inv.ridge_applied = delta;
    inv.entries = ldlt.solve(Eigen::MatrixXd::Identity(dim, dim));
    inv.entries = 0.5 * (inv.entries + inv.entries.transpose()).eval();
    if (!inv.entries.allFinite())
        throw Error(errc::singular_after_ridge, "inverse overflowed");
    return inv;
}

EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& matrix) {
    const Eigen::Index dim = matrix.rows();
    if (dim == 0 || matrix.cols() != dim)
        throw Error(errc::dimension_mismatch, "matrix is not square");
    const double scale = matrix.cwiseAbs().maxCoeff();
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1.0))
        throw Error(errc::not_symmetric, "matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw Error(errc::no_convergence, "eigensolver did not converge");

    // Eigen returns ascending eigenvalues; flip to descending and fix signs.
    EigenDecomposition out;
    out.values.resize(dim);
    out.vectors.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        out.values[i] = solver.eigenvalues()[dim - 1 - i];
        Eigen::VectorXd v = solver.eigenvectors().col(dim - 1 - i);
        Eigen::Index argmax = 0;
        v.cwiseAbs().maxCoeff(&argmax);
        if (v[argmax] < 0.0) v = -v;
        out.vectors.col(i) = v;
    }
    return out;
}

} // namespace hsad
