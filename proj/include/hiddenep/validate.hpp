#ifndef HIDDENEP_VALIDATE_HPP
#define HIDDENEP_VALIDATE_HPP

// Oracle checks run by `hiddenep validate`.

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hiddenep/dicke.hpp"
#include "hiddenep/fock_space.hpp"
#include "hiddenep/localization.hpp"
#include "hiddenep/pair_subspace.hpp"
#include "hiddenep/quadratic_core.hpp"
#include "hiddenep/quench.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"

namespace hiddenep {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidateOptions {
    // Mutation hook: build the pair chain with 2 mu l on the diagonal.
    bool inject_diagonal_typo = false;
    int projection_draws = 50;
    int projection_n_max = 40;
    bool include_dynamics = true;
};

namespace detail {

inline std::string sci(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

inline TridiagonalOperator candidate_pair_hamiltonian(const ModelParams& p, const MomentumSector& s, std::size_t L,
                                                      bool typo) {
    TridiagonalOperator op = build_pair_hamiltonian(p, s, L);
    if (typo)
        for (std::size_t l = 0; l < L; ++l)
            op.diag[l] = 2.0 * p.mu * static_cast<double>(l);
    return op;
}

// Largest entrywise difference between two tridiagonal operators over the
// first `rows` rows.
inline double tridiagonal_distance(const TridiagonalOperator& a, const TridiagonalOperator& b, std::size_t rows) {
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

} // namespace detail

// Random draws of (mu, Delta, t, k); the chain must match the projection of
// H_k onto the pair states away from the truncation edge.
inline CheckResult check_projection_equality(const ValidateOptions& o) {
    std::mt19937_64 rng(20240917);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    const int n_max = o.projection_n_max;
    const auto rows = static_cast<std::size_t>(n_max - 1);
    for (int draw = 0; draw < o.projection_draws; ++draw) {
        ModelParams p;
        p.mu = 0.1 + 2.9 * u(rng);
        p.delta = -3.0 + 6.0 * u(rng);
        p.t = -2.0 + 4.0 * u(rng);
        const double k = -M_PI + 2.0 * M_PI * u(rng) + 1e-12;
        const MomentumSector s = build_sector(p, std::min(k, M_PI));
        const TridiagonalOperator oracle = project_block(p, s, n_max);
        const TridiagonalOperator chain = detail::candidate_pair_hamiltonian(p, s, rows, o.inject_diagonal_typo);
        worst = std::max(worst, detail::tridiagonal_distance(oracle, chain, rows));
    }
    return {"projection equality (" + std::to_string(o.projection_draws) + " draws, n_max=" + std::to_string(n_max) +
                ")",
            worst <= 1e-12, "max entry difference " + detail::sci(worst)};
}

inline CheckResult check_ep_jordan() {
    ModelParams p;
    p.mu = 1.0;
    p.delta = 1.0;
    const CoreMatrix core = build_core_matrix(build_sector(p, 0.0), p);
    const double jr = jordan_residual(core);
    const double cv = coalescing_vector_residual(core);
    const bool is_ep = spectral_decompose(core).is_ep;
    return {"EP Jordan block at mu=Delta=1, k=0", jr <= 1e-12 && cv <= 1e-12 && is_ep,
            "|(h-T)^2| = " + detail::sci(jr) + ", |(h-T)v| = " + detail::sci(cv)};
}

inline CheckResult check_vacuum_annihilation() {
    ModelParams p;
    p.mu = 2.0;
    p.delta = 1.0;
    const MomentumSector s = build_sector(p, 0.0);
    const int n_max = 60;
    const TwoModeFockSpace space(n_max);
    const VacuumState v = vacuum_closed_form(p, s, static_cast<std::size_t>(n_max + 1));
    const double r = annihilation_residual(space, space.embed_pair_state(v.state), space.gamma_k(block_theta(p, s)));
    const TridiagonalOperator h = build_pair_hamiltonian(p, s, 200);
    const VacuumState v200 = vacuum_closed_form(p, s, 200);
    const double e = eigen_residual(h, v200.state.amplitudes, v.energy, 199);
    return {"vacuum annihilated by gamma_k and eigenstate of the chain (mu=2, Delta_k=1)", r < 1e-8 && e <= 1e-8,
            "gamma residual " + detail::sci(r) + ", eigen residual " + detail::sci(e)};
}

inline CheckResult check_recursion() {
    ModelParams p;
    p.mu = 1.0;
    p.delta = 2.0;
    const MomentumSector s = build_sector(p, 0.0);
    const std::size_t L = 500;
    const TridiagonalOperator h = build_barred_hamiltonian(p, s, L);
    const StateVector c = recursive_eigenvector(0.0, barred_hopping_scale(p, s), L);
    const double r = eigen_residual(h, c.amplitudes, barred_potential(p), L - 1);
    bool odd_zero = true;
    for (std::size_t l = 1; l < L; l += 2)
        odd_zero = odd_zero && c[l] == cplx(0.0);
    return {"E=0 recursion solves the barred chain (L=500)", r <= 1e-10 && odd_zero && c[2] == cplx(0.5),
            "residual " + detail::sci(r) + ", c_2 = " + std::to_string(c[2].real())};
}

inline CheckResult check_ladder() {
    ModelParams p;
    p.mu = 2.0;
    p.delta = 1.0;
    const MomentumSector s = build_sector(p, 0.0);
    const auto ev = eigvalsh_tridiagonal(build_pair_hamiltonian(p, s, 2000));
    const double spacing = 4.0 * std::sqrt(3.0);
    double worst = 0.0;
    for (int n = 0; n < 10; ++n)
        worst = std::max(worst, std::abs((ev[static_cast<std::size_t>(n + 1)] - ev[static_cast<std::size_t>(n)]) /
                                         spacing - 1.0));
    const double e0 = std::abs(ev[0] - vacuum_energy(2.0, 1.0));
    return {"ground energy 2sqrt3-4 and ladder spacing 4sqrt3 (L=2000)", worst <= 1e-6 && e0 <= 1e-8,
            "E0 error " + detail::sci(e0) + ", worst relative gap error " + detail::sci(worst)};
}

inline CheckResult check_epsilon_onset() {
    double worst = 0.0;
    for (double d : {0.5, 1.0, 2.0})
        worst = std::max(worst, std::abs(critical_mu(d) - 2.0 * d));
    return {"onset of complex epsilon_- at mu = 2 Delta", worst <= 1e-9, "max |mu_c - 2 Delta| " + detail::sci(worst)};
}

inline CheckResult check_dicke_vacua() {
    DickeParams p;
    p.mu = 3.0;
    p.delta = 1.0;
    p.n_ph = 30;
    p.n_b = 30;
    double worst = 0.0;
    for (Branch r : {Branch::plus, Branch::minus}) {
        const DickeVacuum v = dicke_vacuum_closed_form(p, r, 40);
        const int n_max = 79;
        worst = std::max(worst, annihilation_residual(v.fock_amplitudes(n_max), gamma_rho(v.tanh_half_theta, n_max)));
    }
    const double fid = ground_state_fidelity(p);
    return {"Dicke vacua annihilated by gamma_+- and product equals the effective ground state (mu=3)",
            worst <= 1e-6 && fid >= 0.999, "residual " + detail::sci(worst) + ", fidelity " + std::to_string(fid)};
}

inline CheckResult check_squeezed_form() {
    DickeParams p;
    p.mu = 1.0;
    p.delta = 1.0;
    double worst = 0.0;
    for (double mu : {0.3, 1.0, 1.7}) {
        p.mu = mu;
        worst = std::max(worst, squeezed_region_form(p, Branch::minus).operator_residual);
    }
    return {"squeezed-side two-photon form of H_- (mu < 2 Delta)", worst <= 1e-10,
            "max interior operator difference " + detail::sci(worst)};
}

// Exact Dicke versus linearized two-mode model on [0, 5/mu]. The
// linearization is only controlled while the photon number stays small
// against N_atom, i.e. on the localized side; mu = 3 Delta is checked.
inline CheckResult check_hp_fidelity() {
    double worst = 0.0;
    for (int n_atom : {32, 64}) {
        DickeParams p;
        p.n_atom = n_atom;
        p.mu = 3.0;
        p.delta = 1.0;
        p.n_ph = 32;
        const double horizon = 5.0 / p.mu;
        const QuenchSeries exact = quench_np(p, QuenchModel::exact_dicke, horizon);
        const QuenchSeries eff = quench_np(p, QuenchModel::effective, horizon);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < exact.n_p.size(); ++i) {
            diff = std::max(diff, std::abs(exact.n_p[i] - eff.n_p[i]));
            scale = std::max(scale, std::abs(eff.n_p[i]));
        }
        worst = std::max(worst, diff / scale);
    }
    return {"Holstein-Primakoff fidelity of quench trajectories (mu=3, N_atom=32,64, t <= 5/mu)", worst <= 0.10,
            "max relative deviation " + detail::sci(worst)};
}

inline std::vector<CheckResult> run_validation(const ValidateOptions& o = {}) {
    std::vector<std::function<CheckResult()>> checks = {
        [&] { return check_ep_jordan(); },
        [&] { return check_projection_equality(o); },
        [&] { return check_vacuum_annihilation(); },
        [&] { return check_ladder(); },
        [&] { return check_recursion(); },
        [&] { return check_epsilon_onset(); },
        [&] { return check_dicke_vacua(); },
        [&] { return check_squeezed_form(); },
    };
    if (o.include_dynamics)
        checks.emplace_back([&] { return check_hp_fidelity(); });
    std::vector<CheckResult> out;
    for (auto& c : checks) {
        try {
            out.push_back(c());
        } catch (const std::exception& e) {
            out.push_back({"check raised", false, e.what()});
        }
    }
    return out;
}

} // namespace hiddenep

#endif
