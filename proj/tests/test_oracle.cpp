#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dicke/oracle.hpp"

using namespace dicke;

namespace {

// Sign-align a vector so its largest-magnitude component is positive.
Eigen::VectorXd aligned(const Eigen::VectorXd& v) {
    int imax = 0;
    for (int i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    return v(imax) < 0.0 ? Eigen::VectorXd(-v) : v;
}

double max_row_deviation(const CoefficientTable& t, const EigenDecomposition& d, int rows) {
    double worst = 0.0;
    for (int n = 0; n <= rows; ++n) {
        Eigen::VectorXd v = aligned(d.vectors.col(n));
        const std::vector<double>& row = t.c[static_cast<std::size_t>(n)];
        Eigen::VectorXd r = Eigen::VectorXd::Zero(v.size());
        for (int mu = 0; mu < v.size() && mu < static_cast<int>(row.size()); ++mu)
            r(mu) = row[static_cast<std::size_t>(mu)];
        r = aligned(r);
        worst = std::max(worst, (v - r).cwiseAbs().maxCoeff());
    }
    return worst;
}

}  // namespace

TEST_CASE("rotated number operator structure") {
    DenseOperator id = dense_rotated_number_operator({0.0, 1.0, false}, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(id.entries(i, j) == (i == j ? double(i) : 0.0));

    DenseOperator op = dense_rotated_number_operator(bogoliubov_asymptotic(0.25), 6);
    CHECK(op.entries(0, 0) == doctest::Approx(0.125).epsilon(1e-12));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            if (std::abs(i - j) != 0 && std::abs(i - j) != 2) CHECK(op.entries(i, j) == 0.0);
    CHECK_THROWS_AS(dense_rotated_number_operator(bogoliubov_asymptotic(0.25), 3),
                    std::invalid_argument);
}

TEST_CASE("eigendecomposition of a diagonal operator") {
    DenseOperator op;
    op.dim = 4;
    op.entries = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i < 4; ++i) op.entries(i, i) = double(i);
    EigenDecomposition d = oracle_eigendecomposition(op);
    for (int i = 0; i < 4; ++i) {
        CHECK(d.values(i) == doctest::Approx(double(i)).epsilon(1e-14));
        CHECK(std::abs(std::abs(d.vectors(i, i)) - 1.0) < 1e-14);
    }
    CHECK(d.max_residual < 1e-12);
}

TEST_CASE("oracle spectrum is linear with unit gaps") {
    DenseOperator op = dense_rotated_number_operator(bogoliubov_asymptotic(0.25), 400);
    EigenDecomposition d = oracle_eigendecomposition(op);
    CHECK(std::abs(d.values(0)) < 1e-9);
    for (int n = 1; n < 120; ++n)
        CHECK(std::abs(d.values(n) - d.values(n - 1) - 1.0) < 1e-8);
}

TEST_CASE("recursion rows match the dense eigenvectors") {
    for (double eta : {0.25, 0.1}) {
        CoefficientTable t = build_table(bogoliubov_asymptotic(eta), 1e-13, 20);
        DenseOperator op = dense_rotated_number_operator(t.pair, 400);
        EigenDecomposition d = oracle_eigendecomposition(op);
        CHECK(max_row_deviation(t, d, 20) < 1e-8);
    }
}

TEST_CASE("oracle comparison is stable in the truncation size") {
    CoefficientTable t = build_table(bogoliubov_asymptotic(0.25), 1e-13, 20);
    DenseOperator op4 = dense_rotated_number_operator(t.pair, 400);
    DenseOperator op6 = dense_rotated_number_operator(t.pair, 600);
    EigenDecomposition d4 = oracle_eigendecomposition(op4);
    EigenDecomposition d6 = oracle_eigendecomposition(op6);
    for (int n = 0; n <= 20; ++n) {
        Eigen::VectorXd a = aligned(d4.vectors.col(n));
        Eigen::VectorXd b = aligned(d6.vectors.col(n));
        double worst = 0.0;
        for (int mu = 0; mu < 400; ++mu) worst = std::max(worst, std::abs(a(mu) - b(mu)));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("williamson frequencies: decoupled and coupled") {
    ModelParams det{1.5, 0.5};
    auto [d1, d2] = williamson_frequencies(det, 0.0);
    CHECK(d1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d2 == doctest::Approx(1.5).epsilon(1e-12));

    ModelParams p{1.0, 1.0};
    auto [w1, w2] = williamson_frequencies(p, 0.375);
    CHECK(w1 == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(w2 == doctest::Approx(std::sqrt(1.75)).epsilon(1e-10));

    auto [n1, n2] = williamson_frequencies(p, 0.49);
    EffectiveSpectrum s = mode_energies(p, 0.49);
    CHECK(std::abs(n1 - s.e1) / s.e1 < 1e-10);
    CHECK(std::abs(n2 - s.e2) / s.e2 < 1e-10);

    CHECK_THROWS_AS(williamson_frequencies(p, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(williamson_frequencies(p, 0.7), std::invalid_argument);
}

TEST_CASE("williamson matches the closed form across the normal phase") {
    ModelParams p{1.0, 1.0};
    for (double lam : {0.0, 0.1, 0.2, 0.3, 0.4, 0.45}) {
        auto [w1, w2] = williamson_frequencies(p, lam);
        EffectiveSpectrum s = mode_energies(p, lam);
        CHECK(std::abs(w1 - s.e1) <= 1e-10 * std::max(1.0, s.e1));
        CHECK(std::abs(w2 - s.e2) <= 1e-10 * s.e2);
    }
    // detuned parameters exercise the generic 4x4 path
    ModelParams q{1.7, 0.4};
    double lc = critical_coupling(q);
    for (double f : {0.2, 0.5, 0.9}) {
        auto [w1, w2] = williamson_frequencies(q, f * lc);
        EffectiveSpectrum s = mode_energies(q, f * lc);
        CHECK(std::abs(w1 - s.e1) <= 1e-10 * std::max(1.0, s.e1));
        CHECK(std::abs(w2 - s.e2) <= 1e-10 * s.e2);
    }
}

TEST_CASE("density-matrix harmonics agree with the factorized weights") {
    CoefficientTable t = build_table(bogoliubov_asymptotic(0.25), 1e-13, 64);
    double e1 = 0.8;
    double tp = std::numbers::pi / (2.0 * e1);

    SurvivalAmplitudes a0 = survival_amplitudes(t, e1, 0.0);
    std::vector<double> w0 = density_matrix_harmonics(a0, 20);
    CHECK(w0[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (int m = 1; m <= 20; ++m) CHECK(w0[static_cast<std::size_t>(m)] < 1e-10);

    CoefficientTable id = build_table(bogoliubov_asymptotic(1.0), 1e-12, 8);
    SurvivalAmplitudes aid = survival_amplitudes(id, e1, 3.3);
    CHECK(density_matrix_harmonics(aid, 4)[0] == doctest::Approx(1.0).epsilon(1e-12));

    SurvivalAmplitudes ap = survival_amplitudes(t, e1, tp);
    std::vector<double> w = density_matrix_harmonics(ap, 20);
    std::vector<double> q = q_distribution(t, e1, tp, 20);
    for (int m = 0; m <= 20; ++m)
        CHECK(std::abs(w[static_cast<std::size_t>(m)] - q[static_cast<std::size_t>(m)]) < 1e-10);

    CHECK_THROWS_AS(density_matrix_harmonics(ap, t.n_max + 1), std::invalid_argument);
}
