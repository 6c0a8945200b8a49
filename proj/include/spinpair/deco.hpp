#pragma once

// Adiabatic decoherence from a common phonon bath. In the eigenbasis of the
// dipolar coupling each element evolves as
//   rho_mn(t) = rho_mn(0) exp(2 pi i omega_d dk t) exp(-(dk t / tau_d)^2),
//   dk = kappa_m - kappa_n.
// The law is Gaussian in total elapsed time, so states are always evolved
// from t = 0 and never stepped.

#include <cmath>
#include <numbers>

#include "spinpair/dipolar.hpp"
#include "spinpair/discord.hpp"
#include "spinpair/prep.hpp"
#include "spinpair/qops.hpp"

namespace spinpair {

struct DecoConfig {
    PrepConfig prep{};
    double tau_d = 306e-6; // s

    void validate() const {
        prep.validate();
        if (!(tau_d > 0.0) || !std::isfinite(tau_d))
            throw DomainError("DecoConfig: tau_d must be positive");
    }
};

inline DensityMatrix decohere(const DensityMatrix &rho0, double omega_d, double tau_d, double t) {
    if (!(t >= 0.0))
        throw DomainError("decohere: t must be non-negative");
    if (!(tau_d > 0.0))
        throw DomainError("decohere: tau_d must be positive");
    const PreferredBasis basis = PreferredBasis::standard();
    ComplexMatrix4 elements = basis.to_basis(rho0.matrix());
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            const int dk = basis.kappas[m] - basis.kappas[n];
            if (dk == 0)
                continue;
            const double envelope = std::exp(-std::pow(dk * t / tau_d, 2));
            elements(m, n) *= envelope * std::polar(1.0, 2.0 * std::numbers::pi * omega_d * dk * t);
        }
    }
    return DensityMatrix(basis.from_basis(elements));
}

inline DensityMatrix decohere(const DensityMatrix &rho0, const DecoConfig &cfg, double t) {
    cfg.validate();
    return decohere(rho0, cfg.prep.omega_d, cfg.tau_d, t);
}

/// The t -> infinity limit: only elements with equal kappa survive.
inline DensityMatrix block_diagonal_part(const DensityMatrix &rho) {
    const PreferredBasis basis = PreferredBasis::standard();
    ComplexMatrix4 elements = basis.to_basis(rho.matrix());
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            if (basis.kappas[m] != basis.kappas[n])
                elements(m, n) = 0.0;
    return DensityMatrix(basis.from_basis(elements));
}

struct DecoParams {
    XStateParams params;
    double alpha = 0.0;
};

/// Published normal form per unit beta0:
///   alpha = e^{-9t^2/tau_d^2} cos(phase) cos(3 w t),  a_z = b_z = alpha
///   c_z = (sqrt2-1)/sqrt2 sin(phase)
///   c_x, c_y = -[(sqrt2-1)/2^{3/2} sin(phase) +- R]
///   R^2 = (11+6 sqrt2)/8 sin^2(phase) + e^{-18t^2/tau_d^2} cos^2(phase) sin^2(3 w t)
/// with w = 2 pi omega_d.
inline DecoParams deco_x_params_unit(double phase, double omega_d, double tau_d, double t) {
    if (!(t >= 0.0))
        throw DomainError("deco_x_params: t must be non-negative");
    const double r2 = std::numbers::sqrt2;
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    const double envelope = std::exp(-9.0 * t * t / (tau_d * tau_d));
    const double arg = 3.0 * 2.0 * std::numbers::pi * omega_d * t;
    const double k1 = (r2 - 1.0) / (2.0 * r2) * s;
    const double osc = envelope * c * std::sin(arg);
    const double radius = std::sqrt((11.0 + 6.0 * r2) / 8.0 * s * s + osc * osc);

    DecoParams out;
    out.alpha = envelope * c * std::cos(arg);
    out.params = {out.alpha, out.alpha, -(k1 + radius), -(k1 - radius), (r2 - 1.0) / r2 * s};
    return out;
}

inline DecoParams deco_x_params(const DecoConfig &cfg, double t) {
    cfg.validate();
    DecoParams out = deco_x_params_unit(cfg.prep.phase(), cfg.prep.omega_d, cfg.tau_d, t);
    out.params = out.params.scaled(cfg.prep.beta0);
    out.alpha *= cfg.prep.beta0;
    return out;
}

/// X-state coefficients of decohere(jb_state) itself: a common x rotation
/// diagonalizes the yz correlation block, then R_y(pi/2), R_z(pi/2).
inline XStateParams deco_x_params_operator(const DecoConfig &cfg, double t) {
    const DensityMatrix rho = decohere(jb_state(cfg.prep), cfg, t);
    const BlochDecomposition bloch = bloch_decomposition(rho);
    const double p = bloch.t(1, 1);
    const double q = 0.5 * (bloch.t(1, 2) + bloch.t(2, 1));
    const double r = bloch.t(2, 2);
    const double angle = 0.5 * std::atan2(-2.0 * q, p - r);
    DensityMatrix out = rotate(rho, Site::Both, Axis::X, angle);
    out = rotate(out, Site::Both, Axis::Y, std::numbers::pi / 2.0);
    out = rotate(out, Site::Both, Axis::Z, std::numbers::pi / 2.0);
    return extract_x_params(out);
}

/// Leading-order Q, I, C per unit beta0^2, sigma_x measurement.
inline CorrelationTriple deco_measures_analytic(const DecoConfig &cfg, double t) {
    cfg.validate();
    const DecoParams p = deco_x_params_unit(cfg.prep.phase(), cfg.prep.omega_d, cfg.tau_d, t);
    return second_order_measures(p.params, Axis::X);
}

/// 1/tau_D = (9 sqrt2 / 16) c_s^2 m_p / (omega_d^2 hbar sigma), as written.
/// SI inputs; sigma is the dimensionless width of the pair distribution, so
/// the result carries whatever units the formula implies for omega_d.
inline double decoherence_rate(double c_s, double m_p, double omega_d, double sigma) {
    if (!(c_s > 0.0 && m_p > 0.0 && omega_d > 0.0 && sigma > 0.0))
        throw DomainError("decoherence_rate: all inputs must be positive");
    return 9.0 * std::numbers::sqrt2 / 16.0 * c_s * c_s * m_p /
           (omega_d * omega_d * constants::hbar * sigma);
}

struct ConditionFunctions {
    double izq = 0.0;
    double der = 0.0;
};

/// Both sides of condition (i) along the decoherence stage, per unit beta0^2,
/// in the closed form used for the Izq/Der comparison:
///   Izq = 1/4 ((sqrt2+1)/sqrt2 |s| + R)^2
///   Der = 1/8 ((sqrt2-1)^2/sqrt2 |s| - e^{-18t^2/tau_d^2} cos^2(phase) cos^2(3 w t))
inline ConditionFunctions appendix_condition_functions(const DecoConfig &cfg, double t) {
    cfg.validate();
    if (!(t >= 0.0))
        throw DomainError("appendix_condition_functions: t must be non-negative");
    const double r2 = std::numbers::sqrt2;
    const double phase = cfg.prep.phase();
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    const double decay = std::exp(-18.0 * t * t / (cfg.tau_d * cfg.tau_d));
    const double arg = 3.0 * 2.0 * std::numbers::pi * cfg.prep.omega_d * t;
    const double sn = std::sin(arg);
    const double cs = std::cos(arg);
    const double radius = std::sqrt((11.0 + 6.0 * r2) / 8.0 * s * s + decay * c * c * sn * sn);
    const double left = (r2 + 1.0) / r2 * std::abs(s) + radius;
    ConditionFunctions out;
    out.izq = 0.25 * left * left;
    out.der = 0.125 * ((r2 - 1.0) * (r2 - 1.0) / r2 * std::abs(s) - decay * c * c * cs * cs);
    return out;
}

} // namespace spinpair
