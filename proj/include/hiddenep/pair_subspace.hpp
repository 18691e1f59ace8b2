#ifndef HIDDENEP_PAIR_SUBSPACE_HPP
#define HIDDENEP_PAIR_SUBSPACE_HPP

// Equivalent single-particle chains of a momentum block on the pair basis
//   |l> = (b+_k b+_{-k})^l / l! |0>_k |0>_{-k} = |l, l>,
// closed-form eigenstates, and two-mode Fock oracles for all of them.
//
// The block Hamiltonian is taken normal ordered,
//   H_k = 2 (mu + T_k) n_k + 2 (mu - T_k) n_{-k} + 2 i Delta_k (b+_k b+_{-k} - b_{-k} b_k),
// so that on the pair basis T_k cancels and
//   <l|H_k|l> = 4 mu l,   <l+1|H_k|l> = 2 i Delta_k (l + 1).
// With this convention the vacuum energy is 2 sqrt(mu^2 - Delta_k^2) - 2 mu.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hiddenep/errors.hpp"
#include "hiddenep/fock_space.hpp"
#include "hiddenep/quadratic_core.hpp"
#include "hiddenep/state.hpp"
#include "hiddenep/tridiagonal.hpp"

namespace hiddenep {

inline TridiagonalOperator build_pair_hamiltonian(const ModelParams& params, const MomentumSector& sector,
                                                  std::size_t length) {
    params.validate();
    if (length < 2)
        throw size_error("pair Hamiltonian needs L >= 2");
    std::vector<double> diag(length);
    std::vector<cplx> upper(length - 1);
    for (std::size_t l = 0; l < length; ++l)
        diag[l] = 4.0 * params.mu * static_cast<double>(l);
    for (std::size_t l = 0; l + 1 < length; ++l)
        upper[l] = I * (2.0 * sector.delta_k * static_cast<double>(l + 1));
    return TridiagonalOperator::make_hermitian(std::move(diag), std::move(upper));
}

// H_k on the truncated two-mode space, assembled term by term.
inline SparseC two_mode_block_hamiltonian(const TwoModeFockSpace& space, const ModelParams& params,
                                          const MomentumSector& sector) {
    const SparseC bk_dag = space.b_k().adjoint();
    const SparseC bmk_dag = space.b_mk().adjoint();
    const SparseC pair_up = bk_dag * bmk_dag;
    const SparseC pair_down = space.b_mk() * space.b_k();
    SparseC h = cplx(2.0 * (params.mu + sector.t_k)) * space.n_k() +
                cplx(2.0 * (params.mu - sector.t_k)) * space.n_mk();
    h += (2.0 * I * sector.delta_k) * pair_up;
    h -= (2.0 * I * sector.delta_k) * pair_down;
    return h;
}

// Pair states (b+_k b+_{-k})^l / l! |0,0> for l = 0..l_max, built by repeated
// application of the pair creation operator.
inline std::vector<CVector> pair_basis_states(const TwoModeFockSpace& space, int l_max) {
    const SparseC pair_up = SparseC(space.b_k().adjoint()) * SparseC(space.b_mk().adjoint());
    std::vector<CVector> states;
    states.reserve(static_cast<std::size_t>(l_max) + 1);
    states.push_back(space.vacuum());
    for (int l = 1; l <= l_max; ++l)
        states.push_back((pair_up * states.back()) / static_cast<double>(l));
    return states;
}

// Dense projection <l|H_k|l'> for l, l' = 0..n_max.
inline Eigen::MatrixXcd projected_block_matrix(const ModelParams& params, const MomentumSector& sector, int n_max) {
    params.validate();
    if (n_max < 2)
        throw size_error("project_block needs n_max >= 2");
    const TwoModeFockSpace space(n_max);
    const SparseC h = two_mode_block_hamiltonian(space, params, sector);
    const auto basis = pair_basis_states(space, n_max);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd p(space.dimension(), n);
    for (Eigen::Index l = 0; l < n; ++l)
        p.col(l) = basis[static_cast<std::size_t>(l)];
    const Eigen::MatrixXcd hp = h * p;
    return p.adjoint() * hp;
}

inline TridiagonalOperator tridiagonal_part(const Eigen::MatrixXcd& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    TridiagonalOperator op;
    op.diag.resize(n);
    op.upper.resize(n - 1);
    op.lower.resize(n - 1);
    for (std::size_t l = 0; l < n; ++l)
        op.diag[l] = m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)).real();
    for (std::size_t l = 0; l + 1 < n; ++l) {
        const auto i = static_cast<Eigen::Index>(l);
        op.upper[l] = m(i + 1, i);
        op.lower[l] = m(i, i + 1);
    }
    op.hermitian = op.is_hermitian(1e-12 * std::max(1.0, op.max_abs()));
    return op;
}

// Brute-force oracle for build_pair_hamiltonian.
inline TridiagonalOperator project_block(const ModelParams& params, const MomentumSector& sector, int n_max) {
    return tridiagonal_part(projected_block_matrix(params, sector, n_max));
}

inline double max_off_tridiagonal(const Eigen::MatrixXcd& m) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            if (std::abs(i - j) > 1)
                worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

// ---------------------------------------------------------------------------
// Localized regime, mu > |Delta_k|.

struct VacuumState {
    StateVector state; // unnormalized, c_0 = i
    double energy = 0.0;
};

inline double vacuum_energy(double mu, double delta_k) {
    return 2.0 * std::sqrt(mu * mu - delta_k * delta_k) - 2.0 * mu;
}

// c_l = i^(l+1) (E_vac / (2 Delta_k))^l. The ratio c_{l+1}/c_l = i E_vac/(2 Delta_k)
// is the one fixed by the chain above (and by gamma_k |Vac> = 0); it is the
// complex conjugate of the frequently quoted form with -E_vac.
inline VacuumState vacuum_closed_form(const ModelParams& params, const MomentumSector& sector, std::size_t length) {
    params.validate();
    if (length < 1)
        throw size_error("vacuum_closed_form needs L >= 1");
    const double mu = params.mu, dk = sector.delta_k;
    if (!(mu > std::abs(dk)) || is_ep_point(mu, dk))
        throw regime_error("vacuum closed form exists only for mu > |Delta_k|");
    const double e = vacuum_energy(mu, dk);
    const cplx ratio = dk == 0.0 ? cplx(0.0) : I * (e / (2.0 * dk));
    CVector c(static_cast<Eigen::Index>(length));
    c(0) = I;
    for (Eigen::Index l = 1; l < c.size(); ++l)
        c(l) = c(l - 1) * ratio;
    return {StateVector(std::move(c), BasisTag::pair_basis), e};
}

// E_n = E_vac + 4 n sqrt(mu^2 - Delta_k^2).
inline std::vector<double> ladder_energies(const ModelParams& params, const MomentumSector& sector,
                                           std::size_t n_levels) {
    params.validate();
    if (n_levels < 1)
        throw size_error("ladder_energies needs n_levels >= 1");
    const double mu = params.mu, dk = sector.delta_k;
    if (!(mu > std::abs(dk)) || is_ep_point(mu, dk))
        throw regime_error("equidistant ladder exists only for mu > |Delta_k|");
    const double spacing = 4.0 * std::sqrt(mu * mu - dk * dk);
    const double e0 = vacuum_energy(mu, dk);
    std::vector<double> out(n_levels);
    for (std::size_t n = 0; n < n_levels; ++n)
        out[n] = e0 + spacing * static_cast<double>(n);
    return out;
}

// Bogoliubov angle of gamma_k for a sector.
inline cplx block_theta(const ModelParams& params, const MomentumSector& sector) {
    const SpectralData sd = spectral_decompose(build_core_matrix(sector, params));
    if (!sd.theta_k)
        throw regime_error("Bogoliubov angle undefined at the exceptional point");
    return *sd.theta_k;
}

// ---------------------------------------------------------------------------
// Delocalized regime, mu < |Delta_k|.

struct BarredTransform {
    double kappa_plus = 0.0;
    double kappa_minus = 0.0;
    // Phase convention of the i kappa_+ term, -sign(Delta_k).
    double sign = -1.0;
};

inline BarredTransform barred_transform(const ModelParams& params, const MomentumSector& sector) {
    params.validate();
    const double mu = params.mu, ad = std::abs(sector.delta_k);
    if (!(ad > mu) || is_ep_point(mu, sector.delta_k))
        throw regime_error("barred transform exists only for |Delta_k| > mu");
    const double lo = std::sqrt(ad - mu), hi = std::sqrt(ad + mu);
    const double denom = 2.0 * std::pow(sector.delta_k * sector.delta_k - mu * mu, 0.25);
    return {(lo - hi) / denom, (lo + hi) / denom, sector.delta_k < 0.0 ? 1.0 : -1.0};
}

inline double barred_hopping_scale(const ModelParams& params, const MomentumSector& sector) {
    const double r = sector.delta_k * sector.delta_k - params.mu * params.mu;
    if (!(r > 0.0))
        throw regime_error("barred hopping needs |Delta_k| > mu");
    return std::sqrt(r);
}

// Chain of the block on the barred pair basis: hopping 2 i sign(Delta_k)
// sqrt(Delta_k^2 - mu^2) (l+1) and a flat potential -2 mu. T_k drops out since
// the barred occupations of k and -k coincide on this subspace.
inline TridiagonalOperator build_barred_hamiltonian(const ModelParams& params, const MomentumSector& sector,
                                                    std::size_t length) {
    params.validate();
    if (length < 2)
        throw size_error("barred Hamiltonian needs L >= 2");
    if (!(std::abs(sector.delta_k) > params.mu) || is_ep_point(params.mu, sector.delta_k))
        throw regime_error("barred Hamiltonian exists only for |Delta_k| > mu");
    const double s = barred_hopping_scale(params, sector);
    const double sgn = sector.delta_k < 0.0 ? -1.0 : 1.0;
    std::vector<double> diag(length, -2.0 * params.mu);
    std::vector<cplx> upper(length - 1);
    for (std::size_t l = 0; l + 1 < length; ++l)
        upper[l] = I * (2.0 * sgn * s * static_cast<double>(l + 1));
    return TridiagonalOperator::make_hermitian(std::move(diag), std::move(upper));
}

inline double barred_potential(const ModelParams& params) { return -2.0 * params.mu; }

// Two-mode squeezed state annihilated by both barred bosons.
inline CVector barred_vacuum(const TwoModeFockSpace& space, const BarredTransform& tr) {
    CVector v = CVector::Zero(space.dimension());
    const cplx ratio = -I * (tr.sign * tr.kappa_plus / tr.kappa_minus);
    cplx amp = 1.0;
    for (int n = 0; n <= space.n_max(); ++n) {
        v(space.index(n, n)) = amp;
        amp *= ratio;
    }
    return v / v.norm();
}

inline std::vector<CVector> barred_pair_states(const TwoModeFockSpace& space, const BarredTransform& tr, int l_max) {
    const SparseC up = SparseC(space.b_bar_k(tr.kappa_plus, tr.kappa_minus, tr.sign).adjoint()) *
                       SparseC(space.b_bar_mk(tr.kappa_plus, tr.kappa_minus, tr.sign).adjoint());
    std::vector<CVector> states;
    states.push_back(barred_vacuum(space, tr));
    for (int l = 1; l <= l_max; ++l)
        states.push_back((up * states.back()) / static_cast<double>(l));
    return states;
}

// <l-bar|H_k|l'-bar> for l, l' = 0..l_max on a two-mode space of cutoff n_max.
inline Eigen::MatrixXcd projected_barred_block(const ModelParams& params, const MomentumSector& sector, int n_max,
                                               int l_max) {
    const TwoModeFockSpace space(n_max);
    const BarredTransform tr = barred_transform(params, sector);
    const auto basis = barred_pair_states(space, tr, l_max);
    const SparseC h = two_mode_block_hamiltonian(space, params, sector);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd p(space.dimension(), n);
    for (Eigen::Index l = 0; l < n; ++l)
        p.col(l) = basis[static_cast<std::size_t>(l)];
    const Eigen::MatrixXcd hp = h * p;
    return p.adjoint() * hp;
}

// Energy scaling of the three-term recursion. With E measured from the flat
// potential of the barred chain, the chain with hopping 2 i s (l+1) has
//   c_{l+1} = (l s c_{l-1} + i (E/2) c_l) / ((l+1) s).
inline constexpr double kRecursionEnergyFactor = 0.5;

// Generalized eigenvector of the barred chain (hopping_scale s > 0) at energy
// E above the flat potential: c_0 = 1, c_1 = i f E / s, and the three-term
// recursion above. Not normalizable in general.
inline StateVector recursive_eigenvector(double energy, double hopping_scale, std::size_t length,
                                         double energy_factor = kRecursionEnergyFactor) {
    if (!(hopping_scale > 0.0))
        throw domain_error("recursive_eigenvector needs hopping_scale > 0");
    if (length < 1)
        throw size_error("recursive_eigenvector needs L >= 1");
    const double s = hopping_scale;
    const cplx ie = I * (energy_factor * energy);
    CVector c = CVector::Zero(static_cast<Eigen::Index>(length));
    c(0) = 1.0;
    if (length > 1)
        c(1) = ie / s;
    for (Eigen::Index l = 1; l + 1 < c.size(); ++l)
        c(l + 1) = (static_cast<double>(l) * s * c(l - 1) + ie * c(l)) / (static_cast<double>(l + 1) * s);
    return {std::move(c), BasisTag::barred_basis};
}

// Closed form quoted for <l|(b-bar+_k b-bar+_{-k} - b-bar_k b-bar_{-k})|l'>:
//   (kp^2 + km^2)(l d_{l,l'-1} - l' d_{l,l'+1}) - 4 i km kp l d_{l,l'}.
inline cplx crossbasis_matrix_element(int l, int l_prime, double kappa_plus, double kappa_minus) {
    if (l < 0 || l_prime < 0)
        throw domain_error("crossbasis indices must be non-negative");
    const double s2 = kappa_plus * kappa_plus + kappa_minus * kappa_minus;
    cplx out = 0.0;
    if (l == l_prime - 1)
        out += s2 * l;
    if (l == l_prime + 1)
        out -= s2 * l_prime;
    if (l == l_prime)
        out += -4.0 * I * kappa_minus * kappa_plus * static_cast<double>(l);
    return out;
}

// The same matrix element evaluated exactly for the barred bosons with phase
// convention `sign`:
//   (kp^2 + km^2)(l d_{l,l'+1} - l' d_{l,l'-1}) - 2 i sign kp km (2l + 1) d_{l,l'}.
inline cplx crossbasis_matrix_element_exact(int l, int l_prime, const BarredTransform& tr) {
    if (l < 0 || l_prime < 0)
        throw domain_error("crossbasis indices must be non-negative");
    const double s2 = tr.kappa_plus * tr.kappa_plus + tr.kappa_minus * tr.kappa_minus;
    cplx out = 0.0;
    if (l == l_prime + 1)
        out += s2 * l;
    if (l == l_prime - 1)
        out -= s2 * l_prime;
    if (l == l_prime)
        out += -2.0 * I * tr.sign * tr.kappa_plus * tr.kappa_minus * static_cast<double>(2 * l + 1);
    return out;
}

} // namespace hiddenep

#endif
