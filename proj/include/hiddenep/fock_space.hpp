#ifndef HIDDENEP_FOCK_SPACE_HPP
#define HIDDENEP_FOCK_SPACE_HPP

// Truncated bosonic Fock spaces used as brute-force oracles.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"

namespace hiddenep {

using SparseC = Eigen::SparseMatrix<cplx>;
using SparseR = Eigen::SparseMatrix<double>;

// Single mode truncated at occupation n_max (dimension n_max + 1).
inline SparseC single_mode_annihilation(int n_max) {
    const int dim = n_max + 1;
    std::vector<Eigen::Triplet<cplx>> trips;
    for (int n = 1; n < dim; ++n)
        trips.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    SparseC a(dim, dim);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

// Two modes (k, -k) each truncated at n_max; basis index n1 * (n_max + 1) + n2.
class TwoModeFockSpace {
public:
    explicit TwoModeFockSpace(int n_max) : n_max_(n_max) {
        if (n_max < 2)
            throw size_error("TwoModeFockSpace needs n_max >= 2");
        const SparseC a = single_mode_annihilation(n_max);
        SparseC id(n_max + 1, n_max + 1);
        id.setIdentity();
        b_k_ = kron(a, id);
        b_mk_ = kron(id, a);
    }

    int n_max() const { return n_max_; }
    Eigen::Index dimension() const { return (n_max_ + 1) * (n_max_ + 1); }
    Eigen::Index index(int n1, int n2) const { return n1 * (n_max_ + 1) + n2; }

    const SparseC& b_k() const { return b_k_; }
    const SparseC& b_mk() const { return b_mk_; }
    SparseC n_k() const { return SparseC(b_k_.adjoint()) * b_k_; }
    SparseC n_mk() const { return SparseC(b_mk_.adjoint()) * b_mk_; }

    // gamma_k = i sinh(theta/2) b+_k + cosh(theta/2) b_{-k}
    SparseC gamma_k(cplx theta) const {
        return I * std::sinh(theta / 2.0) * SparseC(b_k_.adjoint()) + std::cosh(theta / 2.0) * b_mk_;
    }
    // gamma-bar_k = -i sinh(theta/2) b_k + cosh(theta/2) b+_{-k}
    SparseC gamma_bar_k(cplx theta) const {
        return -I * std::sinh(theta / 2.0) * b_k_ + std::cosh(theta / 2.0) * SparseC(b_mk_.adjoint());
    }
    // gamma_{-k}: k and -k exchanged.
    SparseC gamma_mk(cplx theta) const {
        return I * std::sinh(theta / 2.0) * SparseC(b_mk_.adjoint()) + std::cosh(theta / 2.0) * b_k_;
    }

    // Barred bosons b-bar_{+-k} = i s kappa_+ b+_{+-k} + kappa_- b_{-+k}; the
    // sign s = -sign(Delta_k) makes the number terms of the block cancel.
    SparseC b_bar_k(double kappa_plus, double kappa_minus, double s) const {
        return I * (s * kappa_plus) * SparseC(b_k_.adjoint()) + cplx(kappa_minus) * b_mk_;
    }
    SparseC b_bar_mk(double kappa_plus, double kappa_minus, double s) const {
        return I * (s * kappa_plus) * SparseC(b_mk_.adjoint()) + cplx(kappa_minus) * b_k_;
    }

    // Boson number parity (-1)^(n_k + n_-k) and total momentum k (n_k - n_-k).
    SparseC parity() const {
        SparseC p(dimension(), dimension());
        p.reserve(Eigen::VectorXi::Constant(dimension(), 1));
        for (int n1 = 0; n1 <= n_max_; ++n1)
            for (int n2 = 0; n2 <= n_max_; ++n2)
                p.insert(index(n1, n2), index(n1, n2)) = ((n1 + n2) % 2 == 0) ? 1.0 : -1.0;
        return p;
    }
    SparseC momentum(double k) const {
        SparseC p(dimension(), dimension());
        p.reserve(Eigen::VectorXi::Constant(dimension(), 1));
        for (int n1 = 0; n1 <= n_max_; ++n1)
            for (int n2 = 0; n2 <= n_max_; ++n2)
                p.insert(index(n1, n2), index(n1, n2)) = k * (n1 - n2);
        return p;
    }

    // Rows touching the outermost shell (either occupation at n_max).
    bool on_edge(Eigen::Index i) const {
        const int n1 = static_cast<int>(i / (n_max_ + 1));
        const int n2 = static_cast<int>(i % (n_max_ + 1));
        return n1 == n_max_ || n2 == n_max_;
    }

    CVector vacuum() const {
        CVector v = CVector::Zero(dimension());
        v(0) = 1.0;
        return v;
    }

    // Places pair-basis amplitudes c_l on |l, l>.
    CVector embed_pair_state(const StateVector& state) const {
        CVector v = CVector::Zero(dimension());
        const auto n = std::min<std::size_t>(state.length(), static_cast<std::size_t>(n_max_) + 1);
        for (std::size_t l = 0; l < n; ++l)
            v(index(static_cast<int>(l), static_cast<int>(l))) = state[l];
        return v;
    }

    static SparseC kron(const SparseC& a, const SparseC& b) {
        std::vector<Eigen::Triplet<cplx>> trips;
        trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
        for (int ka = 0; ka < a.outerSize(); ++ka)
            for (SparseC::InnerIterator ia(a, ka); ia; ++ia)
                for (int kb = 0; kb < b.outerSize(); ++kb)
                    for (SparseC::InnerIterator ib(b, kb); ib; ++ib)
                        trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                           ia.value() * ib.value());
        SparseC out(a.rows() * b.rows(), a.cols() * b.cols());
        out.setFromTriplets(trips.begin(), trips.end());
        return out;
    }

private:
    int n_max_;
    SparseC b_k_;
    SparseC b_mk_;
};

// |gamma psi| / |psi| with rows of the outermost truncation shell excluded.
inline double annihilation_residual(const TwoModeFockSpace& space, const CVector& state, const SparseC& mode) {
    if (state.size() != space.dimension() || mode.cols() != space.dimension())
        throw dimension_error("state and mode operator live on different spaces");
    const double n = state.norm();
    if (!(n > 0.0))
        throw domain_error("annihilation_residual of a zero state");
    const CVector out = mode * state;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        if (!space.on_edge(i))
            acc += std::norm(out(i));
    return std::sqrt(acc) / n;
}

// Single-mode variant: the last `excluded_shells` occupations are dropped.
inline double annihilation_residual(const CVector& state, const SparseC& mode, int excluded_shells = 1) {
    if (state.size() != mode.cols())
        throw dimension_error("state and mode operator live on different spaces");
    const double n = state.norm();
    if (!(n > 0.0))
        throw domain_error("annihilation_residual of a zero state");
    const CVector out = mode * state;
    const Eigen::Index keep = std::max<Eigen::Index>(0, out.size() - excluded_shells);
    return out.head(keep).norm() / n;
}

} // namespace hiddenep

#endif
