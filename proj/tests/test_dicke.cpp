#include <gtest/gtest.h>

#include <cmath>

#include "hiddenep/dicke.hpp"
#include "hiddenep/fock_space.hpp"

using namespace hiddenep;

namespace {

DickeParams dicke(double mu, double delta = 1.0, int n_atom = 8, int n_ph = 12) {
    DickeParams p;
    p.n_atom = n_atom;
    p.mu = mu;
    p.delta = delta;
    p.n_ph = n_ph;
    p.n_b = n_ph;
    return p;
}

} // namespace

TEST(DickeModel, SparseAndDenseAgree) {
    const DickeParams p = dicke(1.3, 0.7);
    const SparseR s = build_dicke_sparse(p);
    const Eigen::MatrixXcd d = build_dicke_hamiltonian(p);
    EXPECT_EQ(d.rows(), (p.n_ph + 1) * (p.n_atom + 1));
    EXPECT_LE((Eigen::MatrixXd(s).cast<cplx>() - d).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DickeModel, DenseCapRaises) {
    EXPECT_THROW(build_dicke_hamiltonian(dicke(1.0, 1.0, 64, 64), 1000), capacity_error);
}

TEST(DickeModel, ParitySectorsSplitSpectrum) {
    const DickeParams p = dicke(1.1, 0.9, 6, 10);
    const Eigen::MatrixXcd full = build_dicke_hamiltonian(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
    std::vector<double> parts;
    for (int parity : {0, 1}) {
        const DickeSector s = build_dicke_sector(p, parity);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e(Eigen::MatrixXd(s.h));
        for (Eigen::Index i = 0; i < e.eigenvalues().size(); ++i)
            parts.push_back(e.eigenvalues()(i));
    }
    std::sort(parts.begin(), parts.end());
    ASSERT_EQ(static_cast<Eigen::Index>(parts.size()), es.eigenvalues().size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        EXPECT_NEAR(parts[i], es.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-10);
}

TEST(DickeModel, DecoupledLimit) {
    // Delta = 0: E = mu (n + m), ground state n = 0, m = -N/2.
    const DickeParams p = dicke(0.8, 0.0, 4, 6);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_dicke_hamiltonian(p));
    EXPECT_NEAR(es.eigenvalues()(0), -1.6, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), -0.8, 1e-12);
}

TEST(DickeModel, RejectsInvalidParameters) {
    EXPECT_THROW(dicke(1.0, 1.0, 7).validate(), domain_error);
    EXPECT_THROW(dicke(-1.0).validate(), domain_error);
    EXPECT_THROW(dicke(1.0, -0.1).validate(), domain_error);
    EXPECT_THROW(dicke(1.0, 1.0, 8, 2).validate(), size_error);
}

TEST(EffectiveModes, EpsilonFromCoreMatrix) {
    for (double mu : {0.5, 1.5, 2.5, 4.0})
        for (Branch r : {Branch::plus, Branch::minus}) {
            const Eigen::Vector2cd ev = effective_core(mu, 1.0, r).eigenvalues();
            const cplx e = mode_energy(mu, 1.0, Branch::plus, r);
            EXPECT_NEAR(std::abs(e * e - ev(0) * ev(0)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(ev(0) + ev(1)), 0.0, 1e-12);
        }
}

TEST(EffectiveModes, OnsetAtTwiceDelta) {
    for (double d : {0.5, 1.0, 2.0})
        EXPECT_NEAR(critical_mu(d), 2.0 * d, 1e-9);
    EXPECT_THROW(critical_mu(0.0), domain_error);
    EXPECT_GT(mode_frequency_squared(2.1, 1.0, Branch::minus), 0.0);
    EXPECT_LT(mode_frequency_squared(1.9, 1.0, Branch::minus), 0.0);
    EXPECT_EQ(mode_energy(1.5, 1.0, Branch::plus, Branch::minus).real(), 0.0);
}

TEST(EffectiveModes, ModeSplitFields) {
    const EffectiveModeData loc = mode_split(dicke(3.0));
    EXPECT_TRUE(loc.theta_rho[0] && loc.theta_rho[1]);
    EXPECT_FALSE(loc.phi_rho[1]);
    EXPECT_NEAR(loc.mu_c, 2.0, 1e-9);
    const EffectiveModeData sq = mode_split(dicke(1.0));
    EXPECT_TRUE(sq.theta_rho[0]);
    EXPECT_FALSE(sq.theta_rho[1]);
    EXPECT_TRUE(sq.phi_rho[1]);
}

TEST(EffectiveModes, TanhBelowOneAndAlternativeAbove) {
    for (Branch r : {Branch::plus, Branch::minus}) {
        EXPECT_LT(std::abs(tanh_half_theta(3.0, 1.0, r)), 1.0);
        EXPECT_GT(std::abs(tanh_half_theta_alternative(3.0, 1.0, r)), 1.0);
        EXPECT_NEAR(eta(3.0, 1.0, r), tanh_half_theta(3.0, 1.0, r) / std::sqrt(2.0), 1e-15);
    }
    EXPECT_THROW(tanh_half_theta(1.0, 1.0, Branch::minus), regime_error);
}

TEST(Vacua, AnnihilatedByGamma) {
    const DickeParams p = dicke(3.0);
    for (Branch r : {Branch::plus, Branch::minus}) {
        const DickeVacuum v = dicke_vacuum_closed_form(p, r, 40);
        EXPECT_LE(annihilation_residual(v.fock_amplitudes(79), gamma_rho(v.tanh_half_theta, 79)), 1e-6);
    }
}

TEST(Vacua, EtaSignRegression) {
    const DickeParams p = dicke(3.0);
    for (Branch r : {Branch::plus, Branch::minus}) {
        const DickeVacuum v = dicke_vacuum_closed_form(p, r, 40, +1.0);
        EXPECT_GT(annihilation_residual(v.fock_amplitudes(79), gamma_rho(v.tanh_half_theta, 79)), 0.1);
    }
}

TEST(Vacua, EigenstateOfBranchHamiltonian) {
    const DickeParams p = dicke(2.6, 1.0);
    for (Branch r : {Branch::plus, Branch::minus}) {
        const DickeVacuum v = dicke_vacuum_closed_form(p, r, 50);
        const CVector f = v.fock_amplitudes(99);
        const SparseC h = branch_hamiltonian(p.mu, p.delta, r, 99);
        const cplx e = f.dot(h * f) / f.squaredNorm();
        EXPECT_LE(((h * f - e * f).head(96)).norm() / f.norm(), 1e-6);
    }
}

TEST(Vacua, ProductIsEffectiveGroundState) {
    DickeParams p = dicke(3.0, 1.0, 64, 30);
    EXPECT_GE(ground_state_fidelity(p), 0.999);
}

TEST(Vacua, CoefficientsRecursion) {
    const auto a = vacuum_a_coefficients(6);
    EXPECT_DOUBLE_EQ(a[0], 1.0);
    EXPECT_DOUBLE_EQ(a[1], 1.0);
    EXPECT_NEAR(a[2], std::sqrt(3.0 / 2.0), 1e-15);
}

TEST(Vacua, RequireLocalizedBranch) {
    EXPECT_THROW(dicke_vacuum_closed_form(dicke(1.0), Branch::minus, 10), regime_error);
    EXPECT_NO_THROW(dicke_vacuum_closed_form(dicke(1.0), Branch::plus, 10));
}

TEST(Squeezed, TwoPhotonFormReproducesBlock) {
    for (double mu : {0.3, 1.0, 1.7}) {
        const SqueezedForm f = squeezed_region_form(dicke(mu), Branch::minus);
        EXPECT_LE(f.operator_residual, 1e-10);
        EXPECT_LT(f.pair_coefficient, 0.0);
        EXPECT_LT(std::abs(f.tanh_half_phi), 1.0);
    }
    EXPECT_THROW(squeezed_region_form(dicke(3.0), Branch::minus), regime_error);
}

TEST(Squeezed, FiniteAtMuEqualDelta) {
    const auto t = tanh_half_phi(1.0, 1.0, Branch::minus);
    ASSERT_TRUE(t.has_value());
    EXPECT_TRUE(std::isfinite(*t));
}
