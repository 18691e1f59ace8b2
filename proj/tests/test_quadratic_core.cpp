#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "hiddenep/quadratic_core.hpp"

using namespace hiddenep;

namespace {

ModelParams params(double mu, double delta, double t = 0.0) {
    ModelParams p;
    p.mu = mu;
    p.delta = delta;
    p.t = t;
    return p;
}

} // namespace

TEST(QuadraticCore, SectorValues) {
    const ModelParams p = params(1.5, 2.0, 0.7);
    const MomentumSector s = build_sector(p, 0.4);
    EXPECT_NEAR(s.t_k, 0.7 * std::sin(0.4), 1e-15);
    EXPECT_NEAR(s.delta_k, 2.0 * std::cos(0.4), 1e-15);
}

TEST(QuadraticCore, CoreMatrixEntries) {
    const ModelParams p = params(1.5, 2.0, 0.7);
    const MomentumSector s = build_sector(p, 0.3);
    const CoreMatrix c = build_core_matrix(s, p);
    EXPECT_NEAR(std::abs(c.entries(0, 0) - cplx(1.5 + s.t_k)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.entries(1, 1) - cplx(-1.5 + s.t_k)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.entries(0, 1) - I * s.delta_k), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(c.entries(1, 0) - I * s.delta_k), 0.0, 1e-15);
}

TEST(QuadraticCore, JordanBlockAtEp) {
    const ModelParams p = params(1.0, 1.0);
    const CoreMatrix c = build_core_matrix(build_sector(p, 0.0), p);
    EXPECT_LE(jordan_residual(c), 1e-12);
    EXPECT_LE(coalescing_vector_residual(c), 1e-12);
    const SpectralData d = spectral_decompose(c);
    EXPECT_TRUE(d.is_ep);
    EXPECT_FALSE(d.theta_k.has_value());
}

TEST(QuadraticCore, JordanResidualAwayFromEp) {
    const ModelParams p = params(2.0, 1.0);
    const CoreMatrix c = build_core_matrix(build_sector(p, 0.0), p);
    // (h - T)^2 = (mu^2 - Delta^2) I, Frobenius norm sqrt2 |mu^2 - Delta^2|
    EXPECT_NEAR(jordan_residual(c), std::sqrt(2.0) * 3.0, 1e-12);
    EXPECT_GT(coalescing_vector_residual(c), 0.1);
}

TEST(QuadraticCore, EigenvaluesRealAndImaginary) {
    const ModelParams loc = params(2.0, 1.0);
    const SpectralData a = spectral_decompose(build_core_matrix(build_sector(loc, 0.0), loc));
    EXPECT_NEAR(a.eps_plus.real(), 2.0 * std::sqrt(3.0), 1e-14);
    EXPECT_EQ(a.eps_plus.imag(), 0.0);
    EXPECT_EQ(a.regime, Regime::localized);
    ASSERT_TRUE(a.theta_k.has_value());
    EXPECT_NEAR(std::tanh(a.theta_k->real() / 2.0), 2.0 - std::sqrt(3.0), 1e-14);

    const ModelParams ext = params(0.5, 1.0);
    const SpectralData b = spectral_decompose(build_core_matrix(build_sector(ext, 0.0), ext));
    EXPECT_EQ(b.eps_plus.real(), 0.0);
    EXPECT_NEAR(b.eps_plus.imag(), 2.0 * std::sqrt(0.75), 1e-14);
    EXPECT_NE(b.regime, Regime::localized);
}

TEST(QuadraticCore, EigenvaluesMatchMatrix) {
    for (double mu : {0.3, 0.9, 1.7, 3.1}) {
        const ModelParams p = params(mu, 1.3, 0.4);
        const CoreMatrix c = build_core_matrix(build_sector(p, 0.2), p);
        const Eigen::Matrix2cd m = c.entries - c.shift() * Eigen::Matrix2cd::Identity();
        const Eigen::Vector2cd ev = m.eigenvalues();
        const SpectralData d = spectral_decompose(c);
        // eps = 2 x eigenvalue of h - T
        const double want = std::abs(d.eps_plus) / 2.0;
        EXPECT_NEAR(std::abs(ev(0)), want, 1e-12);
        EXPECT_NEAR(std::abs(ev(1)), want, 1e-12);
    }
}

TEST(QuadraticCore, EpLocusFindsCosineRoots) {
    const ModelParams p = params(0.5, 1.0);
    const auto ks = ep_locus(p, 200);
    ASSERT_EQ(ks.size(), 4u);
    for (double k : ks)
        EXPECT_NEAR(std::abs(std::cos(k)), 0.5, 1e-10);
}

TEST(QuadraticCore, EpLocusEmptyAboveBand) {
    EXPECT_TRUE(ep_locus(params(1.5, 1.0), 100).empty());
}

TEST(QuadraticCore, Classification) {
    EXPECT_EQ(classify(2.0, 1.0), Regime::localized);
    EXPECT_EQ(classify(1.0, 1.0), Regime::ep);
    EXPECT_EQ(classify(1.0, -1.0), Regime::ep);
    EXPECT_TRUE(is_ep_point(1.0, 1.0 + 1e-12));
}

TEST(QuadraticCore, RejectsInvalidParameters) {
    EXPECT_THROW(params(0.0, 1.0).validate(), domain_error);
    EXPECT_THROW(params(-1.0, 1.0).validate(), domain_error);
    EXPECT_THROW(params(NAN, 1.0).validate(), domain_error);
    EXPECT_THROW(ep_locus(params(1.0, 1.0), 1), size_error);
}
