#pragma once

// Spin-lattice relaxation of the quasi-equilibrium state. Three
// quasi-invariants carry the state: Zeeman order x_z, dipolar order x_Q and
// singlet excess x_0. Dipolar order and singlet excess relax as a coupled
// linear pair
//   d/dt (x_D, x_N) = -S (x_D, x_N),  S = [[S_DD, S_DN], [S_DN, S_NN]].

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>

#include "spinpair/discord.hpp"
#include "spinpair/qops.hpp"

namespace spinpair {

struct RelaxationMatrix {
    double s_dd = 0.0; // 1/s
    double s_nn = 0.0; // 1/s
    double s_dn = 0.0; // 1/s

    void validate() const {
        if (!std::isfinite(s_dd) || !std::isfinite(s_nn) || !std::isfinite(s_dn))
            throw DomainError("RelaxationMatrix: entries must be finite");
        const double scale = std::max({std::abs(s_dd), std::abs(s_nn), std::abs(s_dn)});
        const double slack = 1e-12 * scale * scale;
        if (s_dd < 0.0 || s_nn < 0.0 || s_dd * s_nn - s_dn * s_dn < -slack)
            throw DomainError("RelaxationMatrix: matrix is indefinite (growth, not decay)");
    }
};

/// x_D(t) = a_l e^{-t/t_l} + a_s e^{-t/t_s}
/// x_N(t) = n_l e^{-t/t_l} + n_s e^{-t/t_s}
/// For x0 = (1, 0), n_s = -n_l and |n_l| = sqrt(a_l a_s); the sign of n_l is
/// -sign(S_DN).
struct RelaxationSolution {
    double a_l = 1.0;
    double a_s = 0.0;
    double t_l = std::numeric_limits<double>::infinity();
    double t_s = std::numeric_limits<double>::infinity();
    double n_l = 0.0;
    double n_s = 0.0;
    double cross_amp = 0.0; // |n_l|

    [[nodiscard]] double x_d(double t) const { return a_l * decay(t, t_l) + a_s * decay(t, t_s); }
    [[nodiscard]] double x_n(double t) const { return n_l * decay(t, t_l) + n_s * decay(t, t_s); }

  private:
    static double decay(double t, double time) {
        return std::isinf(time) ? 1.0 : std::exp(-t / time);
    }
};

namespace detail {
inline double rate_to_time(double rate) {
    return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}
} // namespace detail

/// Closed-form solution of the coupled pair from its eigen-decomposition.
/// S_DN = 0 leaves two independent exponentials: the D mode becomes the L
/// label and cross_amp is 0.
inline RelaxationSolution solve_relaxation(const RelaxationMatrix &m,
                                           const Eigen::Vector2d &x0 = {1.0, 0.0}) {
    m.validate();
    RelaxationSolution out;
    if (m.s_dn == 0.0) {
        out.a_l = x0(0);
        out.a_s = 0.0;
        out.t_l = detail::rate_to_time(m.s_dd);
        out.n_l = 0.0;
        out.n_s = x0(1);
        out.t_s = x0(1) == 0.0 ? out.t_l : detail::rate_to_time(m.s_nn);
        return out;
    }
    Eigen::Matrix2d s;
    s << m.s_dd, m.s_dn, m.s_dn, m.s_nn;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(s);
    if (solver.info() != Eigen::Success)
        throw NumericalError("solve_relaxation: eigensolver failed");
    const Eigen::Vector2d slow = solver.eigenvectors().col(0);
    const Eigen::Vector2d fast = solver.eigenvectors().col(1);
    const double w_slow = slow.dot(x0);
    const double w_fast = fast.dot(x0);
    out.t_l = detail::rate_to_time(std::max(solver.eigenvalues()(0), 0.0));
    out.t_s = detail::rate_to_time(std::max(solver.eigenvalues()(1), 0.0));
    out.a_l = w_slow * slow(0);
    out.a_s = w_fast * fast(0);
    out.n_l = w_slow * slow(1);
    out.n_s = w_fast * fast(1);
    out.cross_amp = std::abs(out.n_l);
    return out;
}

struct RelaxConfig {
    double beta0 = 0.0;
    double a_l = 0.88;
    double a_s = 0.12;
    double t_l = 12e-3;  // s
    double t_s = 0.6e-3; // s
    double t_z = 512e-3; // s

    void validate() const {
        if (!(beta0 >= 0.0 && beta0 < 1.0))
            throw DomainError("RelaxConfig: beta0 must lie in [0, 1)");
        if (!(std::abs(a_l + a_s - 1.0) <= 1e-9))
            throw DomainError("RelaxConfig: a_l + a_s must equal 1");
        if (!(t_l > 0.0 && t_s > 0.0 && t_z > 0.0))
            throw DomainError("RelaxConfig: relaxation times must be positive");
    }
};

struct QuasiInvariants {
    double x_z = 0.0;
    double x_q = 1.0;
    double x_0 = 0.0;
};

inline QuasiInvariants quasi_invariant_trajectories(const RelaxConfig &cfg, double t) {
    cfg.validate();
    if (!(t >= 0.0))
        throw DomainError("quasi_invariant_trajectories: t must be non-negative");
    const double el = std::exp(-t / cfg.t_l);
    const double es = std::exp(-t / cfg.t_s);
    return {-std::expm1(-t / cfg.t_z), cfg.a_l * el + cfg.a_s * es,
            std::sqrt(cfg.a_l * cfg.a_s) * (el - es)};
}

/// Singlet projector in spherical-tensor form, K_00 = -(1/(2 sqrt3)) sigma_A . sigma_B.
inline ComplexMatrix4 singlet_tensor() {
    return -(pauli_product(Axis::X, Axis::X) + pauli_product(Axis::Y, Axis::Y) +
             pauli_product(Axis::Z, Axis::Z)) /
           (2.0 * std::sqrt(3.0));
}

/// sigma_A^z + sigma_B^z.
inline ComplexMatrix4 total_sigma_z() {
    return pauli_operator(Qubit::A, Axis::Z) + pauli_operator(Qubit::B, Axis::Z);
}

/// 1/4 (I + beta0 [x_z/2 sigma_AB^z + (sqrt3/2) x_Q T20 - x_0/sqrt3 K00]).
inline DensityMatrix quasi_state(const RelaxConfig &cfg, double t) {
    const QuasiInvariants x = quasi_invariant_trajectories(cfg, t);
    ComplexMatrix4 m = 0.5 * x.x_z * total_sigma_z() +
                       0.5 * std::sqrt(3.0) * x.x_q * spherical_tensor(2, 0) -
                       x.x_0 / std::sqrt(3.0) * singlet_tensor();
    return DensityMatrix(0.25 * (ComplexMatrix4::Identity() + cfg.beta0 * m));
}

enum class RelaxRoute {
    Published, // a_z = 2x_z, c_z = x_Q/sqrt2 + x_0, c_xy = x_0 - x_Q/(2 sqrt2)
    Operator,  // Pauli decomposition of quasi_state
};

/// Normal-form coefficients per unit beta0' = beta0/2.
inline XStateParams relax_x_params_unit(const QuasiInvariants &x, RelaxRoute route) {
    const double r2 = std::numbers::sqrt2;
    if (route == RelaxRoute::Published) {
        const double c_xy = x.x_0 - x.x_q / (2.0 * r2);
        return {2.0 * x.x_z, 2.0 * x.x_z, c_xy, c_xy, x.x_q / r2 + x.x_0};
    }
    const double c_xy = -x.x_q / (2.0 * r2) + x.x_0 / 3.0;
    return {x.x_z, x.x_z, c_xy, c_xy, x.x_q / r2 + x.x_0 / 3.0};
}

struct RelaxXParams {
    XStateParams published; // per unit beta0'
    XStateParams exact;     // absolute, extracted from quasi_state
};

inline RelaxXParams relax_x_params(const RelaxConfig &cfg, double t) {
    return {relax_x_params_unit(quasi_invariant_trajectories(cfg, t), RelaxRoute::Published),
            extract_x_params(quasi_state(cfg, t))};
}

/// Leading-order Q, I, C per unit beta0'^2, sigma_z measurement.
inline CorrelationTriple relax_measures_analytic(const RelaxConfig &cfg, double t,
                                                 RelaxRoute route = RelaxRoute::Published) {
    return second_order_measures(relax_x_params_unit(quasi_invariant_trajectories(cfg, t), route),
                                 Axis::Z);
}

/// (r_+^2 + r_-^2)/4 per unit beta0'^2, with
/// r_+- = sqrt(c_xy^2 sin^2 theta + (a_z +- c_z cos theta)^2). This is the
/// theta-dependent part of the conditional entropy.
inline double conditional_information_theta(const RelaxConfig &cfg, double t, double theta,
                                            RelaxRoute route = RelaxRoute::Published) {
    const XStateParams p = relax_x_params_unit(quasi_invariant_trajectories(cfg, t), route);
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double plus = p.c_x * p.c_x * s * s + std::pow(p.a_z + p.c_z * c, 2);
    const double minus = p.c_x * p.c_x * s * s + std::pow(p.a_z - p.c_z * c, 2);
    return 0.25 * (plus + minus);
}

/// Second-order S(A|theta) in nats: ln 2 - beta0'^2 (r_+^2 + r_-^2)/4.
inline double conditional_entropy_theta(const RelaxConfig &cfg, double t, double theta,
                                        RelaxRoute route = RelaxRoute::Published) {
    const double bp = 0.5 * cfg.beta0;
    return std::numbers::ln2 - bp * bp * conditional_information_theta(cfg, t, theta, route);
}

/// <H_Z> / <H_D> scale, (3/2) omega_0 / omega_d.
inline double energy_ratio(double omega0, double omega_d) {
    if (!(omega0 > 0.0 && omega_d > 0.0))
        throw DomainError("energy_ratio: frequencies must be positive");
    return 1.5 * omega0 / omega_d;
}

} // namespace spinpair
