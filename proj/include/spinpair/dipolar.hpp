#pragma once

// Secular intra-pair dipolar coupling and its eigenbasis.

#include <array>
#include <cmath>
#include <numbers>

#include "spinpair/qops.hpp"

namespace spinpair {

/// Eigenbasis of T_{2,0}: |1,1>, |1,0>, |1,-1>, |0,0> (columns), with
/// T_{2,0}|m> = kappa_m / sqrt(6) |m> and kappa = (1, -2, 1, 0).
struct PreferredBasis {
    ComplexMatrix4 vectors;
    std::array<int, 4> kappas{1, -2, 1, 0};

    static PreferredBasis standard() {
        const double h = 1.0 / std::numbers::sqrt2;
        PreferredBasis basis;
        basis.vectors.setZero();
        basis.vectors(0, 0) = 1.0;
        basis.vectors(1, 1) = h;
        basis.vectors(2, 1) = h;
        basis.vectors(3, 2) = 1.0;
        basis.vectors(1, 3) = h;
        basis.vectors(2, 3) = -h;
        return basis;
    }

    /// Matrix elements <m|op|n> in this basis.
    [[nodiscard]] ComplexMatrix4 to_basis(const ComplexMatrix4 &op) const {
        return vectors.adjoint() * op * vectors;
    }

    [[nodiscard]] ComplexMatrix4 from_basis(const ComplexMatrix4 &elements) const {
        return vectors * elements * vectors.adjoint();
    }
};

/// H_D = sqrt(2/3) (2 pi omega_d) T_{2,0} in rad/s, omega_d in Hz. Its
/// eigenvalues are 2 pi omega_d kappa_m / 3.
inline ComplexMatrix4 dipolar_hamiltonian(double omega_d_hz) {
    return std::sqrt(2.0 / 3.0) * 2.0 * std::numbers::pi * omega_d_hz * spherical_tensor(2, 0);
}

/// exp(-i phase H_D / (2 pi omega_d)), built from the kappa spectrum.
inline ComplexMatrix4 dipolar_propagator(double phase) {
    const PreferredBasis basis = PreferredBasis::standard();
    ComplexMatrix4 diag = ComplexMatrix4::Zero();
    for (int m = 0; m < 4; ++m)
        diag(m, m) = std::polar(1.0, -phase * basis.kappas[m] / 3.0);
    return basis.from_basis(diag);
}

} // namespace spinpair
