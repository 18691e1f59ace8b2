#ifndef HIDDENEP_QUADRATIC_CORE_HPP
#define HIDDENEP_QUADRATIC_CORE_HPP

// Momentum blocks of the bosonic Kitaev chain with imaginary hopping and
// pairing, and the 2x2 non-Hermitian core matrix of each block.
//
//   H = sum_j [ i t b+_{j+1} b_j + i Delta b+_{j+1} b+_j + h.c. + mu (2 n_j + 1) ]
//
// For 0 <= k < pi the block Hamiltonian reads
//   H_k = 2 (b+_k, -b_{-k}) h_k (b_k, b+_{-k})^T,
//   h_k = [[mu, i Delta_k], [i Delta_k, -mu]] + T_k,
// with T_k = t sin k and Delta_k = Delta cos k. The core matrix is a Jordan
// block (exceptional point) when mu = |Delta_k|.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"

namespace hiddenep {

struct ModelParams {
    double t = 0.0;
    double delta = 1.0;
    double mu = 1.0;
    int n_sites = 1;

    void validate() const {
        if (!std::isfinite(t) || !std::isfinite(delta))
            throw domain_error("t and delta must be finite");
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw domain_error("mu must be a finite positive number");
        if (n_sites < 1)
            throw domain_error("n_sites must be positive");
    }
};

struct MomentumSector {
    double k = 0.0;
    double t_k = 0.0;     // t sin k
    double delta_k = 0.0; // Delta cos k
};

enum class Regime { localized, ep, delocalized };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::localized: return "localized";
    case Regime::ep: return "ep";
    case Regime::delocalized: return "delocalized";
    }
    return "?";
}

// Relative tolerance for |mu - |Delta_k|| at which a sector counts as an EP.
inline constexpr double kEpRelativeTolerance = 1e-10;

inline bool is_ep_point(double mu, double delta_k) {
    const double scale = std::max(std::abs(mu), std::abs(delta_k));
    return std::abs(mu - std::abs(delta_k)) <= kEpRelativeTolerance * scale;
}

inline Regime classify(double mu, double delta_k) {
    if (is_ep_point(mu, delta_k))
        return Regime::ep;
    return mu > std::abs(delta_k) ? Regime::localized : Regime::delocalized;
}

inline MomentumSector build_sector(const ModelParams& params, double k) {
    params.validate();
    if (!std::isfinite(k) || k <= -std::numbers::pi || k > std::numbers::pi)
        throw domain_error("momentum k=" + std::to_string(k) + " outside (-pi, pi]");
    return {k, params.t * std::sin(k), params.delta * std::cos(k)};
}

// A sector built straight from (T_k, Delta_k); used when the block
// parameters are given directly instead of through (t, Delta, k).
inline MomentumSector sector_from_block(double t_k, double delta_k) {
    return {0.0, t_k, delta_k};
}

struct CoreMatrix {
    Eigen::Matrix2cd entries;

    double shift() const { return 0.5 * entries.trace().real(); }
    double mu() const { return entries(0, 0).real() - shift(); }
    double pairing() const { return entries(0, 1).imag(); }
};

inline CoreMatrix build_core_matrix(const MomentumSector& sector, const ModelParams& params) {
    params.validate();
    CoreMatrix core;
    core.entries << cplx(params.mu + sector.t_k, 0.0), I * sector.delta_k,
        I * sector.delta_k, cplx(-params.mu + sector.t_k, 0.0);
    return core;
}

struct SpectralData {
    cplx eps_plus;
    cplx eps_minus;
    // Bogoliubov angle; absent at the EP where tanh(theta/2) is undefined.
    std::optional<cplx> theta_k;
    bool is_ep = false;
    Regime regime = Regime::localized;
};

// eps_+- = +-2 sqrt(mu^2 - Delta_k^2): twice the eigenvalue half-splitting of
// h_k - T_k, i.e. the single quasiparticle energy of the block including the
// factor 2 in front of the Nambu form. The Bogoliubov angle uses the half
// splitting, tanh(theta/2) = (mu - eps_+/2) / Delta_k, which keeps theta real
// throughout the localized regime.
inline SpectralData spectral_decompose(const CoreMatrix& core) {
    const double mu = core.mu();
    const double dk = core.pairing();
    const double radicand = mu * mu - dk * dk;

    SpectralData out;
    out.regime = classify(mu, dk);
    out.is_ep = out.regime == Regime::ep;

    const cplx half = radicand >= 0.0 ? cplx(std::sqrt(radicand), 0.0)
                                      : cplx(0.0, std::sqrt(-radicand));
    out.eps_plus = 2.0 * half;
    out.eps_minus = -out.eps_plus;

    if (out.is_ep)
        return out;
    if (dk == 0.0) {
        out.theta_k = cplx(0.0, 0.0);
        return out;
    }
    const cplx tanh_half = (mu - half) / dk;
    out.theta_k = 2.0 * std::atanh(tanh_half);
    return out;
}

// Frobenius norm of (h_k - T_k)^2 = (mu^2 - Delta_k^2) * identity; vanishes
// exactly at the EP.
inline double jordan_residual(const CoreMatrix& core) {
    const Eigen::Matrix2cd m = core.entries - core.shift() * Eigen::Matrix2cd::Identity();
    return (m * m).norm();
}

// The coalescing eigenvector at the EP is (-i s, 1) with s = sign(Delta_k).
inline Eigen::Vector2cd coalescing_vector(const CoreMatrix& core) {
    const double s = core.pairing() < 0.0 ? -1.0 : 1.0;
    return Eigen::Vector2cd(-I * s, cplx(1.0, 0.0));
}

// |(h_k - T_k) v| for the candidate coalescing vector v.
inline double coalescing_vector_residual(const CoreMatrix& core) {
    const Eigen::Matrix2cd m = core.entries - core.shift() * Eigen::Matrix2cd::Identity();
    return (m * coalescing_vector(core)).norm();
}

// All k in (-pi, pi] with mu = |Delta cos k|. The grid is augmented with the
// extrema of |cos k| so that every monotone piece is bracketed; sign changes
// are refined by bisection and tangential roots at the extrema are caught by
// the EP tolerance.
inline std::vector<double> ep_locus(const ModelParams& params, int grid) {
    params.validate();
    if (grid < 2)
        throw size_error("ep_locus needs grid >= 2");
    const double pi = std::numbers::pi;
    auto f = [&](double k) { return std::abs(params.delta * std::cos(k)) - params.mu; };

    std::vector<double> ks;
    ks.reserve(static_cast<std::size_t>(grid) + 5);
    for (int j = 0; j <= grid; ++j)
        ks.push_back(-pi + 2.0 * pi * j / grid);
    for (double extra : {-pi / 2, 0.0, pi / 2})
        ks.push_back(extra);
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    std::vector<double> roots;
    auto add_root = [&](double k) {
        if (k <= -pi + 1e-14)
            k = pi;
        const ModelParams& p = params;
        const MomentumSector s{k, p.t * std::sin(k), p.delta * std::cos(k)};
        const CoreMatrix core = build_core_matrix(s, p);
        const double scale = std::max(1.0, p.mu * p.mu);
        if (jordan_residual(core) > 1e-9 * scale)
            return;
        for (double r : roots)
            if (std::abs(r - k) < 1e-9)
                return;
        roots.push_back(k);
    };

    for (double k : ks)
        if (is_ep_point(params.mu, params.delta * std::cos(k)))
            add_root(k);

    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        double lo = ks[j], hi = ks[j + 1];
        double flo = f(lo), fhi = f(hi);
        if (flo == 0.0 || fhi == 0.0 || (flo < 0.0) == (fhi < 0.0))
            continue;
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        add_root(0.5 * (lo + hi));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace hiddenep

#endif
