#ifndef HIDDENEP_PROPAGATE_HPP
#define HIDDENEP_PROPAGATE_HPP

// psi(t) = exp(-i H t) psi(0) sampled on an ascending list of times.
//
// Two interchangeable paths:
//   * dense eigendecomposition (dimension up to `dense_cap`);
//   * Chebyshev expansion of the short-time propagator between consecutive
//     samples, norm-corrected after every step. Works on dense or sparse H.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"

namespace hiddenep {

struct PropagatorOptions {
    Eigen::Index dense_cap = 2500;
    double chebyshev_tolerance = 1e-16;
    bool renormalize = true;
};

enum class PropagatorPath { dense_eigen, chebyshev };

using SampleObserver = std::function<void(std::size_t, const CVector&)>;

namespace detail {

inline void check_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw domain_error("propagation times must be finite and non-negative");
        if (i > 0 && times[i] < times[i - 1])
            throw domain_error("propagation times must be ascending");
    }
}

inline void check_initial(const CVector& psi0) {
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw domain_error("initial state must be normalized");
}

template <typename Matrix>
std::pair<double, double> gershgorin_bounds(const Matrix& h) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>) {
        // Hermitian: column sums equal row sums.
        for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
            double centre = 0.0, radius = 0.0;
            for (typename Matrix::InnerIterator it(h, k); it; ++it) {
                if (it.row() == it.col())
                    centre = std::real(it.value());
                else
                    radius += std::abs(it.value());
            }
            lo = std::min(lo, centre - radius);
            hi = std::max(hi, centre + radius);
        }
    } else {
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const double centre = std::real(h(i, i));
            const double radius = h.row(i).cwiseAbs().sum() - std::abs(h(i, i));
            lo = std::min(lo, centre - radius);
            hi = std::max(hi, centre + radius);
        }
    }
    return {lo, hi};
}

} // namespace detail

// Chebyshev propagation of exp(-i H t); H dense or sparse, real or complex.
template <typename Matrix>
void propagate_chebyshev(const Matrix& h, const CVector& psi0, std::span<const double> times,
                         const SampleObserver& observe, const PropagatorOptions& opts = {}) {
    detail::check_times(times);
    if (psi0.size() != h.rows() || h.rows() != h.cols())
        throw dimension_error("propagate: state and Hamiltonian dimensions differ");
    const auto [lo, hi] = detail::gershgorin_bounds(h);
    const double centre = 0.5 * (hi + lo);
    const double half = std::max(0.5 * (hi - lo) * 1.01, 1e-12);

    CVector psi = psi0;
    double t_now = 0.0;
    double cached_tau = -1.0;
    std::vector<cplx> coeffs;
    CVector prev(psi.size()), cur(psi.size()), next(psi.size()), acc(psi.size());

    auto scaled_apply = [&](const CVector& x, CVector& y) {
        y.noalias() = h * x;
        y -= centre * x;
        y /= half;
    };

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double tau = times[i] - t_now;
        if (tau > 0.0) {
            if (tau != cached_tau) {
                const double x = half * tau;
                coeffs.clear();
                const auto kmin = static_cast<int>(std::ceil(x)) + 8;
                for (int k = 0;; ++k) {
                    const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
                    cplx phase = 1.0;
                    switch (k % 4) {
                    case 1: phase = -I; break;
                    case 2: phase = -1.0; break;
                    case 3: phase = I; break;
                    default: break;
                    }
                    coeffs.push_back((k == 0 ? 1.0 : 2.0) * phase * jk);
                    if (k > kmin && std::abs(jk) < opts.chebyshev_tolerance)
                        break;
                    if (k > 100000)
                        throw contract_error("Chebyshev expansion did not converge");
                }
                cached_tau = tau;
            }
            prev = psi;
            acc = coeffs[0] * prev;
            if (coeffs.size() > 1) {
                scaled_apply(prev, cur);
                acc += coeffs[1] * cur;
                for (std::size_t k = 2; k < coeffs.size(); ++k) {
                    scaled_apply(cur, next);
                    next = 2.0 * next - prev;
                    acc += coeffs[k] * next;
                    std::swap(prev, cur);
                    std::swap(cur, next);
                }
            }
            psi = std::exp(-I * centre * tau) * acc;
            if (opts.renormalize)
                psi /= psi.norm();
            t_now = times[i];
        }
        observe(i, psi);
    }
}

// Eigendecomposition path for a dense Hermitian matrix.
inline void propagate_dense(const Eigen::MatrixXcd& h, const CVector& psi0, std::span<const double> times,
                            const SampleObserver& observe) {
    detail::check_times(times);
    if (psi0.size() != h.rows() || h.rows() != h.cols())
        throw dimension_error("propagate: state and Hamiltonian dimensions differ");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw contract_error("dense Hermitian eigensolver failed");
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const Eigen::VectorXd& e = solver.eigenvalues();
    const CVector c = v.adjoint() * psi0;
    CVector rotated(c.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] == 0.0) {
            observe(i, psi0);
            continue;
        }
        for (Eigen::Index j = 0; j < c.size(); ++j)
            rotated(j) = std::exp(-I * (e(j) * times[i])) * c(j);
        observe(i, v * rotated);
    }
}

inline PropagatorPath select_path(Eigen::Index dim, const PropagatorOptions& opts) {
    return dim <= opts.dense_cap ? PropagatorPath::dense_eigen : PropagatorPath::chebyshev;
}

// Dense Hermitian H: eigendecomposition below the cap, Chebyshev above it.
inline void propagate(const Eigen::MatrixXcd& h, const CVector& psi0, std::span<const double> times,
                      const SampleObserver& observe, const PropagatorOptions& opts = {}) {
    detail::check_initial(psi0);
    if (select_path(h.rows(), opts) == PropagatorPath::dense_eigen)
        propagate_dense(h, psi0, times, observe);
    else
        propagate_chebyshev(h, psi0, times, observe, opts);
}

inline std::vector<StateVector> propagate(const Eigen::MatrixXcd& h, const StateVector& psi0,
                                          std::span<const double> times, const PropagatorOptions& opts = {}) {
    std::vector<StateVector> out(times.size());
    propagate(h, psi0.amplitudes, times,
              [&](std::size_t i, const CVector& psi) { out[i] = StateVector(psi, psi0.basis); }, opts);
    return out;
}

} // namespace hiddenep

#endif
