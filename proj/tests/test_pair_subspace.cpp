#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hiddenep/fock_space.hpp"
#include "hiddenep/localization.hpp"
#include "hiddenep/pair_subspace.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"

using namespace hiddenep;

namespace {

ModelParams params(double mu, double delta, double t = 0.0) {
    ModelParams p;
    p.mu = mu;
    p.delta = delta;
    p.t = t;
    return p;
}

double max_distance(const TridiagonalOperator& a, const TridiagonalOperator& b, std::size_t rows) {
    double worst = 0.0;
    for (std::size_t l = 0; l < rows; ++l) {
        worst = std::max(worst, std::abs(a.diag[l] - b.diag[l]));
        if (l + 1 < rows) {
            worst = std::max(worst, std::abs(a.upper[l] - b.upper[l]));
            worst = std::max(worst, std::abs(a.lower[l] - b.lower[l]));
        }
    }
    return worst;
}

} // namespace

TEST(PairChain, Entries) {
    const ModelParams p = params(1.5, 2.0);
    const TridiagonalOperator h = build_pair_hamiltonian(p, build_sector(p, 0.0), 6);
    for (std::size_t l = 0; l < 6; ++l)
        EXPECT_DOUBLE_EQ(h.diag[l], 4.0 * 1.5 * static_cast<double>(l));
    for (std::size_t l = 0; l < 5; ++l) {
        EXPECT_NEAR(std::abs(h.upper[l] - I * (2.0 * 2.0 * static_cast<double>(l + 1))), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(h.lower[l] - std::conj(h.upper[l])), 0.0, 0.0);
    }
    EXPECT_TRUE(h.is_hermitian());
}

TEST(PairChain, MatchesTwoModeProjection) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int draw = 0; draw < 10; ++draw) {
        const ModelParams p = params(0.1 + 2.9 * u(rng), -3.0 + 6.0 * u(rng), -2.0 + 4.0 * u(rng));
        const MomentumSector s = build_sector(p, -3.0 + 6.0 * u(rng));
        const TridiagonalOperator oracle = project_block(p, s, 20);
        const TridiagonalOperator chain = build_pair_hamiltonian(p, s, 19);
        EXPECT_LE(max_distance(oracle, chain, 19), 1e-12);
    }
}

TEST(PairChain, PairSubspaceIsInvariant) {
    const ModelParams p = params(1.2, 0.8, 0.5);
    const Eigen::MatrixXcd m = projected_block_matrix(p, build_sector(p, 0.6), 16);
    EXPECT_LE(max_off_tridiagonal(m), 1e-12);
}

TEST(PairChain, DiagonalMutationIsDetected) {
    const ModelParams p = params(1.3, 0.9);
    const MomentumSector s = build_sector(p, 0.0);
    TridiagonalOperator chain = build_pair_hamiltonian(p, s, 19);
    for (std::size_t l = 0; l < 19; ++l)
        chain.diag[l] = 2.0 * p.mu * static_cast<double>(l);
    EXPECT_GT(max_distance(project_block(p, s, 20), chain, 19), 1.0);
}

TEST(Vacuum, GroundEnergyAndResidual) {
    const ModelParams p = params(2.0, 1.0);
    const MomentumSector s = build_sector(p, 0.0);
    const auto ev = eigvalsh_tridiagonal(build_pair_hamiltonian(p, s, 2000));
    EXPECT_NEAR(ev[0], -0.5359, 1e-3);
    EXPECT_NEAR(ev[0], 2.0 * std::sqrt(3.0) - 4.0, 1e-8);
    const VacuumState v = vacuum_closed_form(p, s, 200);
    EXPECT_NEAR(v.energy, ev[0], 1e-10);
    EXPECT_LE(eigen_residual(build_pair_hamiltonian(p, s, 200), v.state.amplitudes, v.energy, 199), 1e-8);
}

TEST(Vacuum, RatioSignRegression) {
    // The conjugate ratio -i E/(2 Delta_k) is not an eigenvector of the chain.
    const ModelParams p = params(2.0, 1.0);
    const MomentumSector s = build_sector(p, 0.0);
    VacuumState v = vacuum_closed_form(p, s, 50);
    EXPECT_NEAR(std::abs(v.state[1] / v.state[0] - I * (v.energy / 2.0)), 0.0, 1e-15);
    for (Eigen::Index l = 0; l < v.state.amplitudes.size(); ++l)
        v.state.amplitudes(l) = std::conj(v.state.amplitudes(l));
    EXPECT_GT(eigen_residual(build_pair_hamiltonian(p, s, 50), v.state.amplitudes, v.energy, 49), 1e-3);
}

TEST(Vacuum, AnnihilatedByBogoliubovMode) {
    const ModelParams p = params(2.0, 1.0);
    const MomentumSector s = build_sector(p, 0.0);
    const TwoModeFockSpace space(40);
    const VacuumState v = vacuum_closed_form(p, s, 41);
    EXPECT_LT(annihilation_residual(space, space.embed_pair_state(v.state), space.gamma_k(block_theta(p, s))), 1e-8);
}

TEST(Vacuum, ClosedFormRejectsDelocalizedSector) {
    const ModelParams p = params(0.5, 1.0);
    EXPECT_THROW(vacuum_closed_form(p, build_sector(p, 0.0), 10), regime_error);
    const ModelParams e = params(1.0, 1.0);
    EXPECT_THROW(vacuum_closed_form(e, build_sector(e, 0.0), 10), regime_error);
}

TEST(Ladder, SpacingMatchesSquareRoot) {
    const ModelParams p = params(2.0, 1.0);
    const MomentumSector s = build_sector(p, 0.0);
    const auto ev = eigvalsh_tridiagonal(build_pair_hamiltonian(p, s, 2000));
    const auto ladder = ladder_energies(p, s, 11);
    for (std::size_t n = 0; n < 10; ++n) {
        EXPECT_NEAR((ev[n + 1] - ev[n]) / (4.0 * std::sqrt(3.0)), 1.0, 1e-6);
        EXPECT_NEAR(ev[n], ladder[n], 1e-6 * std::abs(ladder[10]));
    }
}

TEST(Ipr, ClosedFormAgainstGeometricSeries) {
    for (double mu : {1.2, 2.0, 3.5}) {
        const double dk = 1.0;
        const double e = vacuum_energy(mu, dk);
        const double q = e * e / (4.0 * dk * dk);
        // p_l = (1 - q) q^l, IPR = sum p_l^2
        double series = 0.0, term = (1.0 - q) * (1.0 - q);
        for (int l = 0; l < 5000 && term > 0.0; ++l, term *= q * q)
            series += term;
        EXPECT_NEAR(vacuum_ipr_closed_form(mu, dk), series, 1e-12);
        const ModelParams p = params(mu, dk);
        const VacuumState v = vacuum_closed_form(p, build_sector(p, 0.0), 400);
        EXPECT_NEAR(ipr(v.state), series, 1e-6);
    }
    EXPECT_NEAR(vacuum_ipr_closed_form(2.0, 1.0), 0.8660, 1e-4);
}

TEST(Recursion, CalibratedFactorSolvesBarredChain) {
    const ModelParams p = params(1.0, 2.0);
    const MomentumSector s = build_sector(p, 0.0);
    const std::size_t L = 500;
    const StateVector c = recursive_eigenvector(0.0, barred_hopping_scale(p, s), L);
    EXPECT_EQ(c[2], cplx(0.5));
    for (std::size_t l = 1; l < L; l += 2)
        EXPECT_EQ(c[l], cplx(0.0));
    const TridiagonalOperator h = build_barred_hamiltonian(p, s, L);
    EXPECT_LE(eigen_residual(h, c.amplitudes, barred_potential(p), L - 1), 1e-10);
}

TEST(Recursion, FactorOneFailsAwayFromZeroEnergy) {
    const ModelParams p = params(1.0, 2.0);
    const MomentumSector s = build_sector(p, 0.0);
    const double scale = barred_hopping_scale(p, s);
    const TridiagonalOperator h = build_barred_hamiltonian(p, s, 60);
    const double e = 0.7;
    const StateVector good = recursive_eigenvector(e, scale, 60);
    const StateVector bad = recursive_eigenvector(e, scale, 60, 1.0);
    EXPECT_LE(eigen_residual(h, good.amplitudes, barred_potential(p) + e, 59), 1e-10);
    EXPECT_GT(eigen_residual(h, bad.amplitudes, barred_potential(p) + e, 59), 1e-3);
}

TEST(Barred, ChainMatchesProjection) {
    const ModelParams p = params(0.6, 1.5, 0.3);
    const MomentumSector s = build_sector(p, 0.2);
    const Eigen::MatrixXcd proj = projected_barred_block(p, s, 60, 6);
    const Eigen::MatrixXcd chain = build_barred_hamiltonian(p, s, 7).dense();
    EXPECT_LE((proj - chain).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Barred, RejectsLocalizedSector) {
    const ModelParams p = params(2.0, 1.0);
    EXPECT_THROW(build_barred_hamiltonian(p, build_sector(p, 0.0), 10), regime_error);
    EXPECT_THROW(barred_transform(p, build_sector(p, 0.0)), regime_error);
}

TEST(CrossBasis, PrintedElementDiffersFromExact) {
    const ModelParams p = params(0.6, 1.5);
    const BarredTransform tr = barred_transform(p, build_sector(p, 0.0));
    double diff = 0.0;
    for (int l = 0; l < 5; ++l)
        for (int lp = 0; lp < 5; ++lp)
            diff = std::max(diff, std::abs(crossbasis_matrix_element(l, lp, tr.kappa_plus, tr.kappa_minus) -
                                           crossbasis_matrix_element_exact(l, lp, tr)));
    EXPECT_GT(diff, 0.1);
}

TEST(CrossBasis, ExactElementMatchesFockNumerics) {
    const ModelParams p = params(0.6, 1.5);
    const BarredTransform tr = barred_transform(p, build_sector(p, 0.0));
    const TwoModeFockSpace space(12);
    const SparseC bk = space.b_bar_k(tr.kappa_plus, tr.kappa_minus, tr.sign);
    const SparseC bmk = space.b_bar_mk(tr.kappa_plus, tr.kappa_minus, tr.sign);
    const SparseC op = SparseC(bk.adjoint()) * SparseC(bmk.adjoint()) - bk * bmk;
    for (int l = 0; l < 6; ++l)
        for (int lp = 0; lp < 6; ++lp) {
            const cplx num = op.coeff(space.index(l, l), space.index(lp, lp));
            EXPECT_NEAR(std::abs(num - crossbasis_matrix_element_exact(l, lp, tr)), 0.0, 1e-12) << l << "," << lp;
        }
}

TEST(Mipr, LocalizedAndExtendedSides) {
    TridiagonalSolveOptions o;
    o.lowest = 100;
    const ModelParams loc = params(1.5, 1.0);
    const ModelParams ext = params(0.5, 1.0);
    const double m_loc = mipr(eigh_tridiagonal(build_pair_hamiltonian(loc, build_sector(loc, 0.0), 800), o), 100).mipr;
    const double m_ext = mipr(eigh_tridiagonal(build_pair_hamiltonian(ext, build_sector(ext, 0.0), 800), o), 100).mipr;
    EXPECT_GT(m_loc, 0.02);
    EXPECT_LT(m_ext, 0.01);
    EXPECT_GT(m_loc, 3.0 * m_ext);
}
