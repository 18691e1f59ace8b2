#ifndef HIDDENEP_TRIDIAGONAL_EIGEN_HPP
#define HIDDENEP_TRIDIAGONAL_EIGEN_HPP

// Hermitian eigensolvers.
//
// A Hermitian tridiagonal operator is first brought to real symmetric form by
// the diagonal phase gauge g_{l+1} = g_l u_l / |u_l| (diag(i^l) for purely
// imaginary positive couplings). Eigenvalues come from the implicit QL
// algorithm with Wilkinson shifts; eigenvectors either from accumulating the
// QL rotations (all pairs) or from inverse iteration on the tridiagonal LU
// factorization (a leading block of pairs).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"
#include "hiddenep/tridiagonal.hpp"

namespace hiddenep {

struct EigenDecomposition {
    std::vector<double> eigenvalues; // ascending
    Eigen::MatrixXcd eigenvectors;   // column j pairs with eigenvalues[j]

    std::size_t size() const { return eigenvalues.size(); }
    StateVector state(std::size_t j, BasisTag tag = BasisTag::pair_basis) const {
        return {eigenvectors.col(static_cast<Eigen::Index>(j)), tag};
    }
};

namespace detail {

// Implicit QL on a real symmetric tridiagonal matrix; d is the diagonal, e[i]
// couples i and i+1 (e has size n, e[n-1] ignored). On return d holds the
// eigenvalues (unsorted). If z is given the rotations are accumulated into it.
inline void implicit_ql(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd* z) {
    const int n = static_cast<int>(d.size());
    if (n == 0)
        return;
    e.resize(static_cast<std::size_t>(n));
    e[static_cast<std::size_t>(n - 1)] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    auto D = [&](int i) -> double& { return d[static_cast<std::size_t>(i)]; };
    auto E = [&](int i) -> double& { return e[static_cast<std::size_t>(i)]; };

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(D(m)) + std::abs(D(m + 1));
                if (std::abs(E(m)) <= eps * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 100)
                    throw contract_error("implicit QL failed to converge");
                double g = (D(l + 1) - D(l)) / (2.0 * E(l));
                double r = std::hypot(g, 1.0);
                g = D(m) - D(l) + E(l) / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * E(i);
                    const double b = c * E(i);
                    r = std::hypot(f, g);
                    E(i + 1) = r;
                    if (r == 0.0) {
                        D(i + 1) -= p;
                        E(m) = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = D(i + 1) - p;
                    r = (D(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    D(i + 1) = g + p;
                    g = c * r - b;
                    if (z) {
                        auto zi = z->col(i);
                        auto zi1 = z->col(i + 1);
                        for (Eigen::Index k = 0; k < z->rows(); ++k) {
                            f = zi1(k);
                            zi1(k) = s * zi(k) + c * f;
                            zi(k) = c * zi(k) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l)
                    continue;
                D(l) -= p;
                E(l) = g;
                E(m) = 0.0;
            }
        } while (m != l);
    }
}

// LU factorization with partial pivoting of a shifted tridiagonal matrix,
// following the LAPACK gttrf/gttrs layout.
struct TridiagonalLU {
    std::vector<double> dl, d, du, du2;
    std::vector<char> swapped;

    TridiagonalLU(const std::vector<double>& diag, const std::vector<double>& off, double shift, double tiny) {
        const std::size_t n = diag.size();
        d.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            d[i] = diag[i] - shift;
        dl.assign(off.begin(), off.begin() + static_cast<std::ptrdiff_t>(n - 1));
        du = dl;
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        swapped.assign(n > 1 ? n - 1 : 0, 0);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0)
                    d[i] = tiny;
                const double fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                const double fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = 1;
            }
        }
        for (double& x : d)
            if (std::abs(x) < tiny)
                x = std::copysign(tiny, x == 0.0 ? 1.0 : x);
    }

    void solve(Eigen::VectorXd& b) const {
        const auto n = static_cast<Eigen::Index>(d.size());
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            const auto s = static_cast<std::size_t>(i);
            if (!swapped[s]) {
                b(i + 1) -= dl[s] * b(i);
            } else {
                const double temp = b(i);
                b(i) = b(i + 1);
                b(i + 1) = temp - dl[s] * b(i);
            }
        }
        b(n - 1) /= d[static_cast<std::size_t>(n - 1)];
        if (n > 1)
            b(n - 2) = (b(n - 2) - du[static_cast<std::size_t>(n - 2)] * b(n - 1)) / d[static_cast<std::size_t>(n - 2)];
        for (Eigen::Index i = n - 3; i >= 0; --i) {
            const auto s = static_cast<std::size_t>(i);
            b(i) = (b(i) - du[s] * b(i + 1) - du2[s] * b(i + 2)) / d[s];
        }
    }
};

// Deterministic start vector for inverse iteration.
inline Eigen::VectorXd start_vector(Eigen::Index n, std::uint64_t seed) {
    Eigen::VectorXd v(n);
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL;
    for (Eigen::Index i = 0; i < n; ++i) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        v(i) = static_cast<double>(x >> 11) * 0x1.0p-53 - 0.5;
    }
    return v;
}

} // namespace detail

// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
inline std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
    detail::implicit_ql(d, e, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

// All eigenpairs by accumulated QL rotations.
inline void symmetric_tridiagonal_eigensystem(std::vector<double> d, std::vector<double> e,
                                              std::vector<double>& values, Eigen::MatrixXd& vectors) {
    const auto n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
    detail::implicit_ql(d, e, &z);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });
    values.resize(static_cast<std::size_t>(n));
    vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        values[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
        vectors.col(j) = z.col(order[static_cast<std::size_t>(j)]);
    }
}

// Eigenvectors for given (ascending) eigenvalues by inverse iteration.
// Vectors of eigenvalues closer than 1e-5 |T| are kept mutually orthogonal by
// modified Gram-Schmidt inside each iteration; beyond that gap the loss of
// orthogonality is bounded by eps |T| / gap < 1e-10.
inline Eigen::MatrixXd symmetric_tridiagonal_inverse_iteration(const std::vector<double>& d,
                                                               const std::vector<double>& e,
                                                               const std::vector<double>& values) {
    const auto n = static_cast<Eigen::Index>(d.size());
    const auto m = static_cast<Eigen::Index>(values.size());
    double tnorm = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double row = std::abs(d[static_cast<std::size_t>(i)]);
        if (i > 0)
            row += std::abs(e[static_cast<std::size_t>(i - 1)]);
        if (i + 1 < n)
            row += std::abs(e[static_cast<std::size_t>(i)]);
        tnorm = std::max(tnorm, row);
    }
    if (tnorm == 0.0)
        tnorm = 1.0;
    const double eps = std::numeric_limits<double>::epsilon();
    const double ortol = 1e-5 * tnorm;
    const double sep = 10.0 * eps * tnorm;
    const double tiny = eps * tnorm;

    Eigen::MatrixXd vecs(n, m);
    Eigen::Index cluster_start = 0;
    double prev = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
        double lambda = values[static_cast<std::size_t>(j)];
        if (j > 0) {
            if (lambda - values[static_cast<std::size_t>(j - 1)] > ortol)
                cluster_start = j;
            if (lambda < prev + sep)
                lambda = prev + sep;
        }
        prev = lambda;
        const detail::TridiagonalLU lu(d, e, lambda, tiny);
        Eigen::VectorXd x = detail::start_vector(n, static_cast<std::uint64_t>(j) + 1);
        x /= x.norm();
        for (int it = 0; it < 3; ++it) {
            lu.solve(x);
            for (Eigen::Index k = cluster_start; k < j; ++k)
                x -= vecs.col(k).dot(x) * vecs.col(k);
            const double nx = x.norm();
            if (!(nx > 0.0) || !std::isfinite(nx))
                throw contract_error("inverse iteration broke down");
            x /= nx;
        }
        vecs.col(j) = x;
    }
    return vecs;
}

enum class TridiagonalMethod { automatic, rotations, inverse_iteration };

struct TridiagonalSolveOptions {
    // Number of lowest eigenpairs to return; all when unset.
    std::optional<std::size_t> lowest;
    TridiagonalMethod method = TridiagonalMethod::automatic;
};

// Real symmetric form produced by the phase gauge, and the phases.
struct GaugedTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
    CVector phases;
};

inline GaugedTridiagonal gauge_to_real(const TridiagonalOperator& op) {
    const std::size_t n = op.length();
    GaugedTridiagonal g;
    g.diag = op.diag;
    g.off.assign(n, 0.0);
    g.phases.resize(static_cast<Eigen::Index>(n));
    g.phases(0) = 1.0;
    for (std::size_t l = 0; l + 1 < n; ++l) {
        const double mag = std::abs(op.upper[l]);
        const auto i = static_cast<Eigen::Index>(l);
        g.phases(i + 1) = mag > 0.0 ? g.phases(i) * (op.upper[l] / mag) : g.phases(i);
        g.off[l] = mag;
    }
    return g;
}

inline EigenDecomposition eigh_tridiagonal(const TridiagonalOperator& op, const TridiagonalSolveOptions& opts = {}) {
    const std::size_t n = op.length();
    if (n == 0 || op.upper.size() + 1 != n)
        throw size_error("malformed tridiagonal operator");
    const double tol = 1e-13 * std::max(1.0, op.max_abs());
    if (!op.hermitian || !op.is_hermitian(tol))
        throw contract_error("eigh_tridiagonal requires a Hermitian operator");

    const GaugedTridiagonal g = gauge_to_real(op);
    const std::size_t want = std::min(n, opts.lowest.value_or(n));

    TridiagonalMethod method = opts.method;
    if (method == TridiagonalMethod::automatic)
        method = (want == n && n <= 600) ? TridiagonalMethod::rotations : TridiagonalMethod::inverse_iteration;

    std::vector<double> values;
    Eigen::MatrixXd real_vecs;
    if (method == TridiagonalMethod::rotations) {
        symmetric_tridiagonal_eigensystem(g.diag, g.off, values, real_vecs);
        values.resize(want);
        real_vecs.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(want));
    } else {
        values = symmetric_tridiagonal_eigenvalues(g.diag, g.off);
        values.resize(want);
        real_vecs = symmetric_tridiagonal_inverse_iteration(g.diag, g.off, values);
    }

    EigenDecomposition out;
    out.eigenvalues = std::move(values);
    out.eigenvectors = g.phases.asDiagonal() * real_vecs.cast<cplx>();
    return out;
}

inline std::vector<double> eigvalsh_tridiagonal(const TridiagonalOperator& op) {
    const double tol = 1e-13 * std::max(1.0, op.max_abs());
    if (!op.hermitian || !op.is_hermitian(tol))
        throw contract_error("eigvalsh_tridiagonal requires a Hermitian operator");
    const GaugedTridiagonal g = gauge_to_real(op);
    return symmetric_tridiagonal_eigenvalues(g.diag, g.off);
}

// Dense Hermitian eigendecomposition (reference path).
inline EigenDecomposition eigh_dense(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
        throw contract_error("dense Hermitian eigensolver failed");
    EigenDecomposition out;
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
    out.eigenvectors = solver.eigenvectors();
    return out;
}

} // namespace hiddenep

#endif
