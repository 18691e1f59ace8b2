// Mode energies of the linearized Dicke model across the onset at 2 Delta,
// and the photon number after a quench on both sides.

#include <cstdio>

#include "hiddenep/dicke.hpp"
#include "hiddenep/quench.hpp"

int main() {
    using namespace hiddenep;
    std::printf("mu_c = %.12f\n", critical_mu(1.0));
    for (double mu : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const cplx e = mode_energy(mu, 1.0, Branch::plus, Branch::minus);
        std::printf("mu %.1f  eps_+- = %+.6f %+.6fi\n", mu, e.real(), e.imag());
    }
    for (double mu : {1.0, 3.0}) {
        DickeParams p;
        p.n_atom = 32;
        p.mu = mu;
        p.n_ph = 64;
        const QuenchSeries exact = quench_np(p, QuenchModel::exact_dicke, 10.0);
        const QuenchSeries eff = quench_np(p, QuenchModel::effective, 10.0);
        std::printf("mu %.1f  exact avg N_P %.4f (%s)  linearized avg N_P %.4f (%s)\n", mu, exact.time_average(),
                    exact.bounded() ? "converged" : "unconverged", eff.time_average(),
                    eff.bounded() ? "bounded" : "unbounded");
    }
}
