#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dicke/harmonics.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Matrix of the rotated number operator c^dag(lambda0) c(lambda0) in the
// lambda number basis, truncated at dim states. Pentadiagonal: nonzero
// entries sit on the diagonal and two columns off it.
struct DenseOperator {
    int dim = 0;
    Eigen::MatrixXd entries;
};

DenseOperator dense_rotated_number_operator(const BogoliubovPair& pair, int dim);

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns
    double max_residual = 0.0;
};

EigenDecomposition oracle_eigendecomposition(const DenseOperator& op);

// Positive symplectic eigenvalues of the two-mode normal-phase quadratic
// form, via the spectrum of sqrt(M) J sqrt(M). Independent route to the
// closed-form mode energies.
std::pair<double, double> williamson_frequencies(const ModelParams& p, double lambda);

// Harmonics weights straight from density-matrix elements
// rho_{n+m,n} = g_{n+m} conj(g_n); returns the normalized distribution over
// m in [0, m_max].
std::vector<double> density_matrix_harmonics(const SurvivalAmplitudes& amps, int m_max);

}  // namespace dicke
