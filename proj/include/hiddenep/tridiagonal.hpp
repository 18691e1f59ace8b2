#ifndef HIDDENEP_TRIDIAGONAL_HPP
#define HIDDENEP_TRIDIAGONAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "hiddenep/errors.hpp"
#include "hiddenep/state.hpp"

namespace hiddenep {

// Truncated tridiagonal operator on a chain l = 0..L-1.
//   upper[l] = <l+1|H|l>   (couples |l+1><l|)
//   lower[l] = <l|H|l+1>   (equals conj(upper[l]) for Hermitian operators)
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<cplx> upper;
    std::vector<cplx> lower;
    bool hermitian = true;

    static TridiagonalOperator make_hermitian(std::vector<double> d, std::vector<cplx> up) {
        if (d.size() < 1 || up.size() + 1 != d.size())
            throw size_error("tridiagonal operator needs |upper| = |diag| - 1");
        TridiagonalOperator op;
        op.diag = std::move(d);
        op.upper = std::move(up);
        op.lower.resize(op.upper.size());
        for (std::size_t l = 0; l < op.upper.size(); ++l)
            op.lower[l] = std::conj(op.upper[l]);
        op.hermitian = true;
        return op;
    }

    std::size_t length() const { return diag.size(); }

    // True when lower is the conjugate of upper to within tol.
    bool is_hermitian(double tol = 0.0) const {
        if (lower.size() != upper.size())
            return false;
        for (std::size_t l = 0; l < upper.size(); ++l)
            if (std::abs(lower[l] - std::conj(upper[l])) > tol)
                return false;
        return true;
    }

    double max_abs() const {
        double m = 0.0;
        for (double d : diag)
            m = std::max(m, std::abs(d));
        for (const cplx& u : upper)
            m = std::max(m, std::abs(u));
        return m;
    }

    Eigen::MatrixXcd dense() const {
        const auto n = static_cast<Eigen::Index>(length());
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index l = 0; l < n; ++l)
            m(l, l) = diag[static_cast<std::size_t>(l)];
        for (Eigen::Index l = 0; l + 1 < n; ++l) {
            m(l + 1, l) = upper[static_cast<std::size_t>(l)];
            m(l, l + 1) = lower[static_cast<std::size_t>(l)];
        }
        return m;
    }

    CVector apply(const CVector& v) const {
        const auto n = static_cast<Eigen::Index>(length());
        if (v.size() != n)
            throw dimension_error("tridiagonal apply: length mismatch");
        CVector out(n);
        for (Eigen::Index l = 0; l < n; ++l) {
            const auto s = static_cast<std::size_t>(l);
            cplx acc = diag[s] * v(l);
            if (l > 0)
                acc += upper[s - 1] * v(l - 1);
            if (l + 1 < n)
                acc += lower[s] * v(l + 1);
            out(l) = acc;
        }
        return out;
    }
};

// |(H - E) c| / |c| restricted to the first `rows` rows; the truncation edge
// row is excluded by passing rows = L - 1.
inline double eigen_residual(const TridiagonalOperator& op, const CVector& c, cplx energy, std::size_t rows) {
    const CVector r = op.apply(c) - energy * c;
    const double n = c.norm();
    if (!(n > 0.0))
        throw domain_error("eigen_residual of a zero vector");
    return r.head(static_cast<Eigen::Index>(std::min(rows, op.length()))).norm() / n;
}

} // namespace hiddenep

#endif
