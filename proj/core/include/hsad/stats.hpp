#pragma once

#include <Eigen/Dense>

#include "hsad/cube.hpp"

namespace hsad {

/// A bag of equal-length spectra, one per column.
struct SampleSet {
    Eigen::MatrixXd vectors; ///< dimension x count

    int count() const { return static_cast<int>(vectors.cols()); }
    int dimension() const { return static_cast<int>(vectors.rows()); }
};

struct CovarianceMatrix {
    Eigen::MatrixXd entries;
    double ridge_applied = 0.0; ///< diagonal loading added before inversion
};

/// Eigenvalues sorted descending, matching orthonormal eigenvectors as
/// columns. Sign convention: the largest-magnitude component of each
/// eigenvector is positive.
struct EigenDecomposition {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

Spectrum mean_vector(const SampleSet& samples);

/// Maximum-likelihood covariance, divisor N: C = (1/N) sum (x-mu)(x-mu)^T.
CovarianceMatrix covariance(const SampleSet& samples, const Spectrum& mean);

/// Inverse of C + delta*I with delta = ridge_fraction * trace(C) / L.
/// A zero-trace or otherwise numerically singular matrix raises
/// SingularAfterRidge; callers should enlarge the window or the ridge.
CovarianceMatrix regularized_inverse(const CovarianceMatrix& c, double ridge_fraction);

/// Full symmetric eigendecomposition with the deterministic ordering and
/// sign convention of EigenDecomposition.
EigenDecomposition symmetric_eigen(const Eigen::MatrixXd& matrix);

} // namespace hsad
