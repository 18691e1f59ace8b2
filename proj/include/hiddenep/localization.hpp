#ifndef HIDDENEP_LOCALIZATION_HPP
#define HIDDENEP_LOCALIZATION_HPP

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"
#include "hiddenep/tridiagonal_eigen.hpp"

namespace hiddenep {

// sum |c|^4 / (sum |c|^2)^2
inline double ipr(const CVector& c) {
    double s2 = 0.0, s4 = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double p = std::norm(c(i));
        s2 += p;
        s4 += p * p;
    }
    if (!(s2 > 0.0))
        throw domain_error("IPR of a zero vector");
    return s4 / (s2 * s2);
}

inline double ipr(const StateVector& state) { return ipr(state.amplitudes); }

// IPR of the normalized pair-chain vacuum: Delta_k^2 / (mu^2 - mu sqrt(mu^2 - Delta_k^2)) - 1.
inline double vacuum_ipr_closed_form(double mu, double delta_k) {
    if (!(mu > std::abs(delta_k)))
        throw regime_error("vacuum IPR exists only for mu > |Delta_k|");
    if (delta_k == 0.0)
        return 1.0;
    return delta_k * delta_k / (mu * mu - mu * std::sqrt(mu * mu - delta_k * delta_k)) - 1.0;
}

inline constexpr const char* kMiprSortRule = "ascending real eigenvalue of the Hermitian chain";

struct IPRReport {
    std::vector<double> per_state_ipr;
    double mipr = 0.0;
    std::size_t n_states = 0;
    std::string sort_rule = kMiprSortRule;
};

// Mean IPR over the M lowest-eigenvalue states of a decomposition.
inline IPRReport mipr(const EigenDecomposition& decomp, std::size_t m) {
    if (m == 0)
        throw domain_error("MIPR needs M >= 1");
    if (m > decomp.size() || static_cast<Eigen::Index>(m) > decomp.eigenvectors.cols())
        throw size_error("MIPR asks for more states than the decomposition holds");
    IPRReport r;
    r.n_states = m;
    r.per_state_ipr.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
        r.per_state_ipr.push_back(ipr(CVector(decomp.eigenvectors.col(static_cast<Eigen::Index>(j)))));
    r.mipr = std::accumulate(r.per_state_ipr.begin(), r.per_state_ipr.end(), 0.0) / static_cast<double>(m);
    return r;
}

} // namespace hiddenep

#endif
