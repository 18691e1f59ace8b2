// Pair-chain vacuum of one momentum block: closed form against the numerical
// ground state, and the first few ladder levels.

#include <cstdio>

#include "hiddenep/localization.hpp"
#include "hiddenep/pair_subspace.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"

int main() {
    using namespace hiddenep;
    ModelParams p;
    p.mu = 2.0;
    p.delta = 1.0;
    const MomentumSector s = build_sector(p, 0.0);

    TridiagonalSolveOptions o;
    o.lowest = 5;
    const EigenDecomposition d = eigh_tridiagonal(build_pair_hamiltonian(p, s, 2000), o);
    const VacuumState v = vacuum_closed_form(p, s, 2000);

    std::printf("E_vac closed form %.12f, numerical %.12f\n", v.energy, d.eigenvalues[0]);
    std::printf("overlap |<vac|ground>| = %.12f\n", std::abs(v.state.normalized().amplitudes.dot(d.eigenvectors.col(0))));
    std::printf("IPR %.6f (closed form %.6f)\n", ipr(v.state), vacuum_ipr_closed_form(p.mu, s.delta_k));
    const auto ladder = ladder_energies(p, s, 5);
    for (std::size_t n = 0; n < 5; ++n)
        std::printf("E_%zu = %.10f  ladder %.10f\n", n, d.eigenvalues[n], ladder[n]);
}
