#ifndef HIDDENEP_DICKE_HPP
#define HIDDENEP_DICKE_HPP

// Dicke model: exact photon-spin Hamiltonian, its linearized two-mode
// reduction, and the analytic data of the split modes d_+- = (a +- b)/sqrt2.
//
// With d_+- the effective Hamiltonian separates as
//   H_rho = (mu + rho Delta) n_rho + (rho Delta / 2)(d_rho^2 + d_rho+^2) + rho Delta / 2,
// each block having frequency sqrt(mu^2 + 2 rho Delta mu).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "hiddenep/errors.hpp"
#include "hiddenep/fock_space.hpp"
#include "hiddenep/state.hpp"

namespace hiddenep {

struct DickeParams {
    int n_atom = 64;
    double mu = 1.0;
    double delta = 1.0;
    int n_ph = 64;
    int n_b = 64;

    // Delta = 0 is accepted (decoupled limit); the mode analysis needs Delta > 0.
    void validate() const {
        if (n_atom <= 0 || n_atom % 2 != 0)
            throw domain_error("n_atom must be a positive even integer");
        if (!std::isfinite(mu) || !(mu > 0.0))
            throw domain_error("mu must be finite and positive");
        if (!std::isfinite(delta) || delta < 0.0)
            throw domain_error("delta must be finite and non-negative");
        if (n_ph < 4 || n_b < 4)
            throw size_error("photon and boson cutoffs must be >= 4");
    }
};

inline constexpr Eigen::Index kDickeDenseCap = 4096;

enum class Branch { plus, minus };

inline double sign_of(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }
inline std::size_t slot(Branch b) { return b == Branch::plus ? 0 : 1; }
inline const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

// ---------------------------------------------------------------------------
// Hamiltonian builders

// Photon-spin basis |n>|m>, index n (N+1) + (m + N/2).
inline Eigen::Index dicke_index(int n_atom, int n, int m_shifted) {
    return static_cast<Eigen::Index>(n) * (n_atom + 1) + m_shifted;
}

namespace detail {

inline double spin_raise(int n_atom, int m_shifted) {
    const double j = 0.5 * n_atom;
    const double m = m_shifted - j;
    return std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

// Visits every nonzero <row|H_D|col> with row >= col.
template <typename F>
void for_each_dicke_element(const DickeParams& p, F&& emit) {
    const int ns = p.n_atom + 1;
    const double g = p.delta / std::sqrt(static_cast<double>(p.n_atom));
    const double j = 0.5 * p.n_atom;
    for (int n = 0; n <= p.n_ph; ++n) {
        for (int ms = 0; ms < ns; ++ms) {
            emit(n, ms, n, ms, p.mu * (n + (ms - j)));
            if (g == 0.0 || n == p.n_ph)
                continue;
            // a+ (J+ + J-) from (n, ms) to (n+1, ms +- 1)
            const double ra = std::sqrt(static_cast<double>(n + 1));
            if (ms + 1 < ns)
                emit(n + 1, ms + 1, n, ms, g * ra * spin_raise(p.n_atom, ms));
            if (ms > 0)
                emit(n + 1, ms - 1, n, ms, g * ra * spin_raise(p.n_atom, ms - 1));
        }
    }
}

} // namespace detail

// Real symmetric sparse matrix of mu(a+a + J_z) + (Delta/sqrtN)(a+ + a)(J_+ + J_-).
inline SparseR build_dicke_sparse(const DickeParams& p) {
    p.validate();
    const int ns = p.n_atom + 1;
    const Eigen::Index dim = static_cast<Eigen::Index>(p.n_ph + 1) * ns;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim) * 5);
    detail::for_each_dicke_element(p, [&](int n1, int m1, int n2, int m2, double v) {
        const Eigen::Index r = dicke_index(p.n_atom, n1, m1), c = dicke_index(p.n_atom, n2, m2);
        trips.emplace_back(r, c, v);
        if (r != c)
            trips.emplace_back(c, r, v);
    });
    SparseR h(dim, dim);
    h.setFromTriplets(trips.begin(), trips.end());
    return h;
}

inline Eigen::MatrixXcd build_dicke_hamiltonian(const DickeParams& p, Eigen::Index cap = kDickeDenseCap) {
    p.validate();
    const Eigen::Index dim = static_cast<Eigen::Index>(p.n_ph + 1) * (p.n_atom + 1);
    if (dim > cap)
        throw capacity_error("Dicke matrix dimension " + std::to_string(dim) + " exceeds the dense cap " +
                             std::to_string(cap) + "; reduce n_ph or use the sparse propagator");
    return Eigen::MatrixXd(build_dicke_sparse(p)).cast<cplx>();
}

// Parity-resolved block: states with n + m + N/2 of the given parity.
struct DickeSector {
    SparseR h;
    std::vector<int> photon;  // photon number of each sector state
    std::vector<int> spin;    // m + N/2 of each sector state
    std::vector<Eigen::Index> lookup; // full index -> sector index or -1

    Eigen::Index dimension() const { return h.rows(); }
    Eigen::Index index_of(int n_atom, int n, int m_shifted) const {
        return lookup[static_cast<std::size_t>(dicke_index(n_atom, n, m_shifted))];
    }
};

inline DickeSector build_dicke_sector(const DickeParams& p, int parity) {
    p.validate();
    const int ns = p.n_atom + 1;
    DickeSector s;
    s.lookup.assign(static_cast<std::size_t>((p.n_ph + 1) * ns), -1);
    for (int n = 0; n <= p.n_ph; ++n)
        for (int ms = 0; ms < ns; ++ms)
            if ((n + ms) % 2 == parity % 2) {
                s.lookup[static_cast<std::size_t>(dicke_index(p.n_atom, n, ms))] =
                    static_cast<Eigen::Index>(s.photon.size());
                s.photon.push_back(n);
                s.spin.push_back(ms);
            }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(s.photon.size() * 5);
    detail::for_each_dicke_element(p, [&](int n1, int m1, int n2, int m2, double v) {
        const Eigen::Index r = s.index_of(p.n_atom, n1, m1), c = s.index_of(p.n_atom, n2, m2);
        if (r < 0 || c < 0)
            return;
        trips.emplace_back(r, c, v);
        if (r != c)
            trips.emplace_back(c, r, v);
    });
    const auto dim = static_cast<Eigen::Index>(s.photon.size());
    s.h.resize(dim, dim);
    s.h.setFromTriplets(trips.begin(), trips.end());
    return s;
}

// Two modes a (cutoff n_ph) and b (cutoff n_b); index n_a (n_b + 1) + n_b.
inline Eigen::Index effective_index(const DickeParams& p, int na, int nb) {
    return static_cast<Eigen::Index>(na) * (p.n_b + 1) + nb;
}

inline SparseR build_effective_sparse(const DickeParams& p) {
    p.validate();
    const Eigen::Index dim = static_cast<Eigen::Index>(p.n_ph + 1) * (p.n_b + 1);
    std::vector<Eigen::Triplet<double>> trips;
    auto add = [&](Eigen::Index r, Eigen::Index c, double v) {
        trips.emplace_back(r, c, v);
        if (r != c)
            trips.emplace_back(c, r, v);
    };
    for (int na = 0; na <= p.n_ph; ++na)
        for (int nb = 0; nb <= p.n_b; ++nb) {
            const Eigen::Index c = effective_index(p, na, nb);
            add(c, c, p.mu * (na + nb));
            if (p.delta == 0.0 || na == p.n_ph)
                continue;
            const double ra = std::sqrt(static_cast<double>(na + 1));
            // a+ b+ and a+ b
            if (nb < p.n_b)
                add(effective_index(p, na + 1, nb + 1), c, p.delta * ra * std::sqrt(nb + 1.0));
            if (nb > 0)
                add(effective_index(p, na + 1, nb - 1), c, p.delta * ra * std::sqrt(static_cast<double>(nb)));
        }
    SparseR h(dim, dim);
    h.setFromTriplets(trips.begin(), trips.end());
    return h;
}

// mu(a+a + b+b) + Delta(a+ + a)(b+ + b) on |n_a>|n_b>.
inline Eigen::MatrixXcd build_effective_hamiltonian(const DickeParams& p, Eigen::Index cap = kDickeDenseCap) {
    p.validate();
    const Eigen::Index dim = static_cast<Eigen::Index>(p.n_ph + 1) * (p.n_b + 1);
    if (dim > cap)
        throw capacity_error("effective matrix dimension " + std::to_string(dim) + " exceeds the dense cap " +
                             std::to_string(cap) + "; reduce the cutoffs");
    return Eigen::MatrixXd(build_effective_sparse(p)).cast<cplx>();
}

// ---------------------------------------------------------------------------
// Mode analysis

// h_eff^rho = ((mu + rho Delta)/2) sigma_z + rho (i Delta/2) sigma_y
inline Eigen::Matrix2cd effective_core(double mu, double delta, Branch b) {
    const double r = sign_of(b);
    Eigen::Matrix2cd sz, sy;
    sz << 1.0, 0.0, 0.0, -1.0;
    sy << 0.0, -I, I, 0.0;
    return 0.5 * (mu + r * delta) * sz + r * (0.5 * I * delta) * sy;
}

// epsilon_{sigma rho} = (sigma/2) sqrt(mu^2 + 2 rho Delta mu), principal branch.
inline cplx mode_energy(double mu, double delta, Branch sigma, Branch rho) {
    return sign_of(sigma) * 0.5 * std::sqrt(cplx(mu * mu + 2.0 * sign_of(rho) * delta * mu, 0.0));
}

// Squared frequency of the rho block; negative on the squeezed side.
inline double mode_frequency_squared(double mu, double delta, Branch rho) {
    return mu * mu + 2.0 * sign_of(rho) * delta * mu;
}

// Onset of complex epsilon_-: bisection on the sign of -det(h_eff^-), which
// equals epsilon_-^2 and changes sign exactly where the eigenvalues turn
// imaginary.
inline double critical_mu(double delta, double tol = 1e-13) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw domain_error("critical_mu needs Delta > 0");
    auto f = [&](double mu) { return std::real(-effective_core(mu, delta, Branch::minus).determinant()); };
    double lo = 1e-6 * delta;
    double hi = delta;
    while (f(hi) <= 0.0)
        hi *= 2.0;
    if (f(lo) >= 0.0)
        throw contract_error("critical_mu: lower bracket is not on the squeezed side");
    for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

// tanh(theta_rho/2) annihilating the block vacuum:
//   (mu + rho Delta - sqrt(mu^2 + 2 rho Delta mu)) / (rho Delta)
//     = 1 + rho (mu/Delta)(1 - sqrt(1 + 2 rho Delta/mu)).
inline double tanh_half_theta(double mu, double delta, Branch rho) {
    const double r = sign_of(rho);
    const double w2 = mode_frequency_squared(mu, delta, rho);
    if (w2 < 0.0)
        throw regime_error("theta_rho is defined only where mu^2 + 2 rho Delta mu >= 0");
    return (mu + r * delta - std::sqrt(w2)) / (r * delta);
}

// The alternative sign arrangement 1 - rho (mu/Delta)(1 + sqrt(1 + 2 rho Delta/mu)).
// Kept for comparison: its magnitude exceeds one, so it defines no
// normalizable vacuum.
inline double tanh_half_theta_alternative(double mu, double delta, Branch rho) {
    const double r = sign_of(rho);
    return 1.0 - r * (mu / delta) * (1.0 + std::sqrt(1.0 + 2.0 * r * delta / mu));
}

// eta_+- = (Delta +- mu -+ sqrt(mu^2 +- 2 Delta mu)) / (sqrt2 Delta) = tanh(theta/2)/sqrt2
inline double eta(double mu, double delta, Branch rho) {
    const double r = sign_of(rho);
    const double w2 = mode_frequency_squared(mu, delta, rho);
    if (w2 < 0.0)
        throw regime_error("eta is defined only on the localized side");
    return (delta + r * mu - r * std::sqrt(w2)) / (std::sqrt(2.0) * delta);
}

struct EffectiveModeData {
    std::array<std::array<cplx, 2>, 2> eps{};           // [sigma][rho]
    std::array<std::optional<double>, 2> theta_rho;     // localized blocks
    std::array<std::optional<double>, 2> eta_rho;
    std::array<std::optional<double>, 2> phi_rho;       // squeezed blocks
    double mu_c = 0.0;

    cplx epsilon(Branch sigma, Branch rho) const { return eps[slot(sigma)][slot(rho)]; }
};

inline std::optional<double> tanh_half_phi(double mu, double delta, Branch rho);

inline EffectiveModeData mode_split(const DickeParams& p) {
    p.validate();
    if (!(p.delta > 0.0))
        throw domain_error("mode_split needs Delta > 0");
    EffectiveModeData d;
    for (Branch s : {Branch::plus, Branch::minus})
        for (Branch r : {Branch::plus, Branch::minus})
            d.eps[slot(s)][slot(r)] = mode_energy(p.mu, p.delta, s, r);
    for (Branch r : {Branch::plus, Branch::minus}) {
        if (mode_frequency_squared(p.mu, p.delta, r) > 0.0) {
            d.theta_rho[slot(r)] = 2.0 * std::atanh(tanh_half_theta(p.mu, p.delta, r));
            d.eta_rho[slot(r)] = eta(p.mu, p.delta, r);
        } else if (auto t = tanh_half_phi(p.mu, p.delta, r)) {
            d.phi_rho[slot(r)] = 2.0 * std::atanh(*t);
        }
    }
    d.mu_c = critical_mu(p.delta);
    return d;
}

// ---------------------------------------------------------------------------
// Closed-form vacua

// A_0 = A_1 = 1, A_{l+2} = sqrt((2l^2+5l+3)/(2l^2+5l+2)) A_{l+1}^2 / A_l.
inline std::vector<double> vacuum_a_coefficients(std::size_t length) {
    std::vector<double> a(length, 1.0);
    for (std::size_t l = 0; l + 2 < length; ++l) {
        const double x = static_cast<double>(l);
        a[l + 2] = std::sqrt((2 * x * x + 5 * x + 3) / (2 * x * x + 5 * x + 2)) * a[l + 1] * a[l + 1] / a[l];
    }
    return a;
}

// Amplitude on |2l> is (kVacuumEtaSign eta)^l A_l; the minus sign is the one
// for which gamma_rho annihilates the state.
inline constexpr double kVacuumEtaSign = -1.0;

struct DickeVacuum {
    StateVector pair_amplitudes; // index l <-> |2l> of d_rho
    std::vector<double> profile; // normalized |<2l|Vac>|^2
    double eta = 0.0;
    double tanh_half_theta = 0.0;
    Branch branch = Branch::plus;

    // Embed into a single-mode Fock vector with cutoff n_max >= 2(L-1).
    CVector fock_amplitudes(int n_max) const {
        CVector v = CVector::Zero(n_max + 1);
        for (std::size_t l = 0; l < pair_amplitudes.length() && static_cast<int>(2 * l) <= n_max; ++l)
            v(static_cast<Eigen::Index>(2 * l)) = pair_amplitudes[l];
        return v;
    }
};

inline DickeVacuum dicke_vacuum_closed_form(const DickeParams& p, Branch rho, std::size_t length,
                                            double eta_sign = kVacuumEtaSign) {
    p.validate();
    if (!(p.delta > 0.0))
        throw domain_error("closed-form vacuum needs Delta > 0");
    if (length < 1)
        throw size_error("vacuum needs at least one shell");
    if (!(mode_frequency_squared(p.mu, p.delta, rho) > 0.0))
        throw regime_error("closed-form Dicke vacuum exists only for mu > mu_c on this branch");
    DickeVacuum v;
    v.branch = rho;
    v.eta = eta(p.mu, p.delta, rho);
    v.tanh_half_theta = tanh_half_theta(p.mu, p.delta, rho);
    const auto a = vacuum_a_coefficients(length);
    CVector c(static_cast<Eigen::Index>(length));
    double x = 1.0;
    for (std::size_t l = 0; l < length; ++l) {
        c(static_cast<Eigen::Index>(l)) = x * a[l];
        x *= eta_sign * v.eta;
    }
    v.pair_amplitudes = StateVector(c, BasisTag::single_mode);
    const double n2 = c.squaredNorm();
    v.profile.resize(length);
    for (std::size_t l = 0; l < length; ++l)
        v.profile[l] = std::norm(c(static_cast<Eigen::Index>(l))) / n2;
    return v;
}

// gamma_rho = cosh(theta/2) d + sinh(theta/2) d+ on a single-mode truncation.
inline SparseC gamma_rho(double tanh_half, int n_max) {
    if (!(std::abs(tanh_half) < 1.0))
        throw regime_error("gamma_rho needs |tanh(theta/2)| < 1");
    const double c = 1.0 / std::sqrt(1.0 - tanh_half * tanh_half);
    const SparseC d = single_mode_annihilation(n_max);
    return c * d + (c * tanh_half) * SparseC(d.adjoint());
}

// Single-mode block Hamiltonian H_rho on occupations 0..n_max.
inline SparseC branch_hamiltonian(double mu, double delta, Branch rho, int n_max) {
    const double r = sign_of(rho);
    const SparseC d = single_mode_annihilation(n_max);
    const SparseC dd = SparseC(d.adjoint());
    SparseC id(n_max + 1, n_max + 1);
    id.setIdentity();
    return (mu + r * delta) * SparseC(dd * d) + (0.5 * r * delta) * SparseC(d * d + dd * dd) +
           (0.5 * r * delta) * id;
}

namespace detail {

// <i, N-i | (d_+^+)^p (d_-^+)^q |0,0> / sqrt(p! q!) with d_+- = (a +- b)/sqrt2, p + q = N.
inline double beam_splitter_element(int i, int p, int total) {
    const int q = total - p;
    const int j = total - i;
    long double acc = 0.0L;
    const long double lf = 0.5L * (std::lgamma(i + 1.0L) + std::lgamma(j + 1.0L) - std::lgamma(p + 1.0L) -
                                   std::lgamma(q + 1.0L)) -
                           0.5L * total * std::log(2.0L);
    for (int r = std::max(0, i - q); r <= std::min(p, i); ++r) {
        const int s = i - r;
        // C(p, r) C(q, s) (-1)^(q - s)
        const long double lc = std::lgamma(p + 1.0L) - std::lgamma(r + 1.0L) - std::lgamma(p - r + 1.0L) +
                               std::lgamma(q + 1.0L) - std::lgamma(s + 1.0L) - std::lgamma(q - s + 1.0L);
        const long double term = std::exp(lc + lf);
        acc += ((q - s) % 2 == 0) ? term : -term;
    }
    return static_cast<double>(acc);
}

} // namespace detail

// Maps a product amplitude table c(p, q) on |p>_{d+}|q>_{d-} to the (a, b)
// occupation basis of p; components leaving the (n_ph, n_b) box are dropped.
inline CVector modes_to_ab(const DickeParams& p, const Eigen::MatrixXcd& c) {
    CVector out = CVector::Zero(static_cast<Eigen::Index>(p.n_ph + 1) * (p.n_b + 1));
    const int max_total = static_cast<int>(c.rows() + c.cols()) - 2;
    for (int total = 0; total <= max_total; ++total) {
        for (int pp = std::max(0, total - static_cast<int>(c.cols()) + 1);
             pp <= std::min(total, static_cast<int>(c.rows()) - 1); ++pp) {
            const cplx amp = c(pp, total - pp);
            if (amp == 0.0)
                continue;
            for (int i = 0; i <= total; ++i) {
                if (i > p.n_ph || total - i > p.n_b)
                    continue;
                out(effective_index(p, i, total - i)) += amp * detail::beam_splitter_element(i, pp, total);
            }
        }
    }
    return out;
}

// |G> = |Vac_+>|Vac_->, each factor on `length` pair shells, in the (a, b) box.
inline StateVector ground_state_product(const DickeParams& p, std::size_t length = 0) {
    p.validate();
    if (length == 0)
        length = static_cast<std::size_t>(std::min(p.n_ph, p.n_b) / 2 + 1);
    const auto vp = dicke_vacuum_closed_form(p, Branch::plus, length);
    const auto vm = dicke_vacuum_closed_form(p, Branch::minus, length);
    const auto n = static_cast<Eigen::Index>(2 * length - 1);
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t l1 = 0; l1 < length; ++l1)
        for (std::size_t l2 = 0; l2 < length; ++l2)
            c(static_cast<Eigen::Index>(2 * l1), static_cast<Eigen::Index>(2 * l2)) = vp.pair_amplitudes[l1] *
                                                                                      vm.pair_amplitudes[l2];
    return StateVector(modes_to_ab(p, c), BasisTag::two_mode).normalized();
}

// |<G|ground state of the dense effective Hamiltonian>|.
inline double ground_state_fidelity(const DickeParams& p, std::size_t length = 0) {
    const StateVector g = ground_state_product(p, length);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_effective_hamiltonian(p));
    if (es.info() != Eigen::Success)
        throw contract_error("dense Hermitian eigensolver failed");
    return std::abs(es.eigenvectors().col(0).dot(g.amplitudes));
}

// ---------------------------------------------------------------------------
// Squeezed side

// tanh(phi_rho/2) for the block with mu^2 + 2 rho Delta mu < 0, written as
// rho(mu + rho Delta)/(Delta + sqrt(-(mu^2 + 2 rho Delta mu))); equal to
// (rho Delta + sqrt(..))/(rho Delta + mu) but finite at mu = Delta.
inline std::optional<double> tanh_half_phi(double mu, double delta, Branch rho) {
    const double w2 = mode_frequency_squared(mu, delta, rho);
    if (w2 >= 0.0)
        return std::nullopt;
    const double r = sign_of(rho);
    return r * (mu + r * delta) / (delta + std::sqrt(-w2));
}

struct SqueezedForm {
    Branch branch = Branch::minus;
    double phi = 0.0;
    double tanh_half_phi = 0.0;
    double pair_coefficient = 0.0; // multiplies (A+A+ + AA)
    double constant = 0.0;
    double operator_residual = 0.0; // max entry of the difference on the truncation interior
    int n_max = 0;
};

// A_rho = cosh(phi/2) d + sinh(phi/2) d+ turns H_rho into
// c (A+A+ + AA) + const with c = sign(rho) (1/2) sqrt(-(mu^2 + 2 rho Delta mu)).
inline SqueezedForm squeezed_region_form(const DickeParams& p, Branch rho, int n_max = 60, int edge = 4) {
    p.validate();
    if (!(p.delta > 0.0))
        throw domain_error("squeezed form needs Delta > 0");
    const auto t = tanh_half_phi(p.mu, p.delta, rho);
    if (!t)
        throw regime_error("squeezed form exists only for mu < mu_c on this branch");
    SqueezedForm f;
    f.branch = rho;
    f.n_max = n_max;
    f.tanh_half_phi = *t;
    f.phi = 2.0 * std::atanh(*t);
    const double w2 = mode_frequency_squared(p.mu, p.delta, rho);
    const double a_coef = p.mu + sign_of(rho) * p.delta;
    const double b_coef = sign_of(rho) * p.delta;
    f.pair_coefficient = 0.5 * std::copysign(std::sqrt(-w2), b_coef);
    const double ch = std::cosh(0.5 * f.phi), sh = std::sinh(0.5 * f.phi);
    f.constant = a_coef * sh * sh - b_coef * ch * sh + 0.5 * b_coef;

    const SparseC d = single_mode_annihilation(n_max);
    const SparseC dd = SparseC(d.adjoint());
    const SparseC a = ch * d + sh * dd;
    const SparseC ad = SparseC(a.adjoint());
    SparseC id(n_max + 1, n_max + 1);
    id.setIdentity();
    const Eigen::MatrixXcd lhs = Eigen::MatrixXcd(branch_hamiltonian(p.mu, p.delta, rho, n_max));
    const Eigen::MatrixXcd rhs =
        Eigen::MatrixXcd(SparseC(f.pair_coefficient * SparseC(ad * ad + a * a) + f.constant * id));
    const Eigen::Index k = n_max + 1 - edge;
    f.operator_residual = (lhs - rhs).topLeftCorner(k, k).cwiseAbs().maxCoeff();
    return f;
}

} // namespace hiddenep

#endif
