#pragma once

// Jeener-Broekaert preparation: (pi/2)_y, free dipolar evolution for tau,
// (pi/4)_x.

#include <cmath>
#include <numbers>

#include "spinpair/dipolar.hpp"
#include "spinpair/discord.hpp"
#include "spinpair/qops.hpp"

namespace spinpair {

struct PrepConfig {
    double beta0 = 0.0;      // hbar omega_0 / k T
    double omega_d = 95.5e3; // Hz
    double tau = 0.0;        // s

    /// 2 pi omega_d tau.
    [[nodiscard]] double phase() const { return 2.0 * std::numbers::pi * omega_d * tau; }

    static PrepConfig from_phase(double beta0, double omega_d, double phase) {
        return {beta0, omega_d, phase / (2.0 * std::numbers::pi * omega_d)};
    }

    void validate() const {
        if (!(beta0 > 0.0 && beta0 < 1.0))
            throw DomainError("PrepConfig: beta0 must lie in (0, 1)");
        if (!(omega_d > 0.0) || !std::isfinite(omega_d))
            throw DomainError("PrepConfig: omega_d must be positive");
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw DomainError("PrepConfig: tau must be non-negative");
    }
};

/// 1/4 (I + beta0 (I_z^A + I_z^B)), I_z = sigma_z / 2.
inline DensityMatrix equilibrium_state(double beta0) {
    if (!(beta0 >= 0.0 && beta0 < 1.0))
        throw DomainError("equilibrium_state: beta0 must lie in [0, 1)");
    ComplexMatrix4 m = ComplexMatrix4::Identity();
    m += 0.5 * beta0 * (pauli_operator(Qubit::A, Axis::Z) + pauli_operator(Qubit::B, Axis::Z));
    return DensityMatrix(0.25 * m);
}

/// rho(tau+). Deviation from I/4 is
///   (beta0/4) [cos(phase) I_x + sin(phase) (sqrt(3/2) T20 + (T22 + T2-2)/2)]
/// with I_x = T1-1 - T11 the total x magnetization.
inline DensityMatrix jb_state(const PrepConfig &cfg) {
    cfg.validate();
    DensityMatrix rho = rotate(equilibrium_state(cfg.beta0), Site::Both, Axis::Y,
                               std::numbers::pi / 2.0);
    const ComplexMatrix4 u = dipolar_propagator(cfg.phase());
    rho = DensityMatrix(u * rho.matrix() * u.adjoint());
    return rotate(rho, Site::Both, Axis::X, std::numbers::pi / 4.0);
}

/// Published normal-form coefficients per unit beta0:
///   a_z = b_z = -cos,  c_x = (sqrt2+1)/sqrt2 sin,  c_y = -(sqrt2-1)/sqrt2 sin,
///   c_z = -sqrt2 sin.
inline XStateParams jb_normal_form_unit(double phase) {
    const double r2 = std::numbers::sqrt2;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    return {-c, -c, (r2 + 1.0) / r2 * s, -(r2 - 1.0) / r2 * s, -r2 * s};
}

inline XStateParams jb_normal_form(const PrepConfig &cfg) {
    cfg.validate();
    return jb_normal_form_unit(cfg.phase()).scaled(cfg.beta0);
}

/// X-state coefficients of jb_state itself after R_y(pi/2) then R_z(pi/2).
inline XStateParams jb_normal_form_operator(const PrepConfig &cfg) {
    DensityMatrix rho = rotate(jb_state(cfg), Site::Both, Axis::Y, std::numbers::pi / 2.0);
    rho = rotate(rho, Site::Both, Axis::Z, std::numbers::pi / 2.0);
    return extract_x_params(rho);
}

/// Leading-order Q, I, C per unit beta0^2, sigma_x measurement.
inline CorrelationTriple prep_measures_analytic(const PrepConfig &cfg) {
    cfg.validate();
    return second_order_measures(jb_normal_form_unit(cfg.phase()), Axis::X);
}

} // namespace spinpair
