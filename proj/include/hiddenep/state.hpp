#ifndef HIDDENEP_STATE_HPP
#define HIDDENEP_STATE_HPP

#include <complex>
#include <cstddef>

#include <Eigen/Core>

#include "hiddenep/errors.hpp"

namespace hiddenep {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;

inline constexpr cplx I{0.0, 1.0};

enum class BasisTag { pair_basis, barred_basis, photon_spin, two_mode, single_mode };

// Amplitudes over a truncated Fock-type basis. Normalisation is not assumed:
// extended states have truncation-dependent norms.
struct StateVector {
    CVector amplitudes;
    BasisTag basis = BasisTag::pair_basis;

    StateVector() = default;
    StateVector(CVector amps, BasisTag tag) : amplitudes(std::move(amps)), basis(tag) {}

    std::size_t length() const { return static_cast<std::size_t>(amplitudes.size()); }
    double norm() const { return amplitudes.norm(); }

    StateVector normalized() const {
        const double n = norm();
        if (!(n > 0.0))
            throw domain_error("cannot normalize a zero state");
        return {amplitudes / n, basis};
    }

    cplx operator[](std::size_t l) const { return amplitudes(static_cast<Eigen::Index>(l)); }
};

} // namespace hiddenep

#endif
