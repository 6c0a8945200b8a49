#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spinpair/deco.hpp"

using namespace spinpair;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double r2 = std::numbers::sqrt2;
constexpr double omega = 95.5e3;
constexpr double tau_d = 306e-6;

double max_abs(const ComplexMatrix4 &m) { return m.cwiseAbs().maxCoeff(); }

// |1,1>, |1,0>, |1,-1>, |0,0> written out by hand
std::array<Eigen::Vector4cd, 4> triplet_singlet() {
    const double h = 1.0 / r2;
    return {Eigen::Vector4cd(1, 0, 0, 0), Eigen::Vector4cd(0, h, h, 0), Eigen::Vector4cd(0, 0, 0, 1),
            Eigen::Vector4cd(0, h, -h, 0)};
}

Complex element(const ComplexMatrix4 &rho, const Eigen::Vector4cd &m, const Eigen::Vector4cd &n) {
    return (m.adjoint() * rho * n)(0);
}

DecoConfig config(double phase, double beta0 = 1e-3) {
    return {PrepConfig::from_phase(beta0, omega, phase), tau_d};
}

} // namespace

TEST_CASE("decohere follows the damped-oscillation law element by element", "[deco][oracle]") {
    const auto basis = triplet_singlet();
    const std::array<int, 4> kappa{1, -2, 1, 0};
    std::mt19937_64 rng(31);
    for (int k = 0; k < 20; ++k) {
        const DensityMatrix rho0(oracle::random_density(rng));
        for (double t : {0.0, 1e-6, 0.3 * tau_d, tau_d, 2.2 * tau_d}) {
            const ComplexMatrix4 rho = decohere(rho0, omega, tau_d, t).matrix();
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    const double dk = kappa[m] - kappa[n];
                    const Complex expected = element(rho0.matrix(), basis[m], basis[n]) *
                                             std::exp(Complex{0, 2 * pi * omega * dk * t}) *
                                             std::exp(-std::pow(dk * t / tau_d, 2));
                    REQUIRE(std::abs(element(rho, basis[m], basis[n]) - expected) <= 1e-14);
                }
        }
    }
}

TEST_CASE("without damping decohere is unitary evolution under three times H_D", "[deco][oracle]") {
    std::mt19937_64 rng(32);
    const DensityMatrix rho0(oracle::random_density(rng));
    for (double t : {1e-7, 3.3e-6, 2e-5}) {
        // tau_d so long the envelope is exactly 1 in double precision
        const ComplexMatrix4 u = oracle::propagator(-3.0 * t * dipolar_hamiltonian(omega));
        const ComplexMatrix4 expected = u * rho0.matrix() * u.adjoint();
        REQUIRE(max_abs(decohere(rho0, omega, 1e10, t).matrix() - expected) <= 1e-13);
    }
}

TEST_CASE("decohere at t = 0 and for long times", "[deco]") {
    std::mt19937_64 rng(33);
    const DensityMatrix rho0(oracle::random_density(rng));
    REQUIRE(max_abs(decohere(rho0, omega, tau_d, 0.0).matrix() - rho0.matrix()) <= 1e-15);

    const DensityMatrix late = decohere(rho0, omega, tau_d, 100 * tau_d);
    REQUIRE(max_abs(late.matrix() - block_diagonal_part(rho0).matrix()) <= 1e-15);
    const auto basis = triplet_singlet();
    const std::array<int, 4> kappa{1, -2, 1, 0};
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            if (kappa[m] != kappa[n])
                REQUIRE(std::abs(element(late.matrix(), basis[m], basis[n])) <= 1e-300);
}

TEST_CASE("the |1,1>,|1,0> coherence oscillates at 3 omega_D with a 9 t^2 envelope", "[deco]") {
    const auto basis = triplet_singlet();
    const DensityMatrix rho0 = jb_state(PrepConfig::from_phase(0.01, omega, pi / 4));
    const Complex start = element(rho0.matrix(), basis[0], basis[1]);
    REQUIRE(std::abs(start) > 1e-4);
    for (double t : {0.1 * tau_d, 0.5 * tau_d, tau_d}) {
        const Complex now = element(decohere(rho0, omega, tau_d, t).matrix(), basis[0], basis[1]);
        REQUIRE_THAT(std::abs(now), WithinRel(std::abs(start) * std::exp(-9 * t * t / (tau_d * tau_d)), 1e-10));
        const double turned = std::arg(now / start);
        REQUIRE_THAT(std::remainder(turned - 3 * 2 * pi * omega * t, 2 * pi), WithinAbs(0.0, 1e-9));
    }
}

TEST_CASE("decohere keeps states physical and the in-block part fixed", "[deco]") {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> when(0.0, 5 * tau_d);
    for (int k = 0; k < 50; ++k) {
        const DensityMatrix rho0(oracle::random_density(rng));
        const double t = when(rng);
        const DensityMatrix rho = decohere(rho0, omega, tau_d, t);
        REQUIRE(max_abs(rho.matrix() - rho.matrix().adjoint()) == 0.0);
        REQUIRE_THAT(rho.matrix().trace().real(), WithinAbs(1.0, 1e-14));
        REQUIRE(eigenvalues_hermitian(rho.matrix())[3] >= -1e-15);
        REQUIRE(max_abs(block_diagonal_part(rho).matrix() - block_diagonal_part(rho0).matrix()) <= 1e-15);
    }
}

TEST_CASE("the dipolar energy is a constant of motion", "[deco]") {
    const ComplexMatrix4 h = dipolar_hamiltonian(omega);
    for (double phase : {pi / 8, pi / 4, pi / 2}) {
        const DensityMatrix rho0 = jb_state(PrepConfig::from_phase(0.01, omega, phase));
        const double e0 = expectation(rho0, h);
        REQUIRE(std::abs(e0) > 1.0);
        for (double t : {0.2 * tau_d, tau_d, 3 * tau_d, 10 * tau_d})
            REQUIRE_THAT(expectation(decohere(rho0, omega, tau_d, t), h), WithinRel(e0, 1e-12));
    }
}

TEST_CASE("coherence envelopes never grow", "[deco]") {
    const auto basis = triplet_singlet();
    std::mt19937_64 rng(35);
    const DensityMatrix rho0(oracle::random_density(rng));
    for (double t = 0.0; t <= 3 * tau_d; t += 0.05 * tau_d) {
        const ComplexMatrix4 rho = decohere(rho0, omega, tau_d, t).matrix();
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n)
                REQUIRE(std::abs(element(rho, basis[m], basis[n])) <=
                        std::abs(element(rho0.matrix(), basis[m], basis[n])) + 1e-16);
    }
}

TEST_CASE("Gaussian decoherence does not compose", "[deco]") {
    const DensityMatrix rho0 = jb_state(PrepConfig::from_phase(0.01, omega, pi / 4));
    const DensityMatrix once = decohere(rho0, omega, tau_d, tau_d);
    const DensityMatrix twice = decohere(decohere(rho0, omega, tau_d, tau_d / 2), omega, tau_d, tau_d / 2);
    REQUIRE(max_abs(once.matrix() - twice.matrix()) > 1e-6);
}

TEST_CASE("decohere rejects negative times", "[deco]") {
    REQUIRE_THROWS_AS(decohere(DensityMatrix{}, omega, tau_d, -1e-9), DomainError);
    REQUIRE_THROWS_AS(decohere(DensityMatrix{}, omega, 0.0, 1e-9), DomainError);
    REQUIRE_THROWS_AS(deco_x_params(config(pi / 4), -1.0), DomainError);
    REQUIRE_THROWS_AS(deco_x_params(DecoConfig{PrepConfig::from_phase(1e-3, omega, 1.0), 0.0}, 0.0),
                      DomainError);
}

TEST_CASE("published decoherence normal form", "[deco]") {
    // phase pi/2: frozen
    const DecoParams start = deco_x_params(config(pi / 2), 0.0);
    REQUIRE_THAT(start.alpha, WithinAbs(0.0, 1e-19));
    for (double t : {0.1 * tau_d, tau_d, 4 * tau_d}) {
        const DecoParams p = deco_x_params(config(pi / 2), t);
        REQUIRE_THAT(p.alpha, WithinAbs(0.0, 1e-19));
        REQUIRE_THAT(p.params.c_x, WithinAbs(start.params.c_x, 1e-18));
        REQUIRE_THAT(p.params.c_y, WithinAbs(start.params.c_y, 1e-18));
        REQUIRE(p.params.c_z == start.params.c_z);
    }

    // long-time limit at pi/4
    const double b = 1e-3;
    const DecoParams late = deco_x_params(config(pi / 4, b), 100 * tau_d);
    REQUIRE(late.alpha == 0.0);
    REQUIRE_THAT(late.params.c_x, WithinRel(-b * ((r2 - 1) / 4 + std::sqrt((11 + 6 * r2) / 16)), 1e-14));
    REQUIRE_THAT(late.params.c_y, WithinRel(-b * ((r2 - 1) / 4 - std::sqrt((11 + 6 * r2) / 16)), 1e-14));
    REQUIRE_THAT(late.params.c_z, WithinRel(b * (r2 - 1) / 2, 1e-14));

    // alpha and the a_z = b_z pair
    const double t = 0.37 * tau_d;
    const DecoParams mid = deco_x_params(config(pi / 4, b), t);
    const double expected = b * std::exp(-9 * t * t / (tau_d * tau_d)) * std::cos(pi / 4) *
                            std::cos(3 * 2 * pi * omega * t);
    REQUIRE_THAT(mid.alpha, WithinRel(expected, 1e-13));
    REQUIRE(mid.params.a_z == mid.alpha);
    REQUIRE(mid.params.b_z == mid.alpha);

    // tau = 0, t = 0: only the single-spin term survives, matching the
    // preparation normal form up to the sign fixed by the rotation
    const DecoParams zero = deco_x_params_unit(0.0, omega, tau_d, 0.0);
    const XStateParams prep = jb_normal_form_unit(0.0);
    REQUIRE(std::abs(zero.params.a_z) == std::abs(prep.a_z));
    REQUIRE(zero.params.c_x == 0.0);
    REQUIRE(zero.params.c_y == 0.0);
    REQUIRE(zero.params.c_z == 0.0);
}

TEST_CASE("operator-route decoherence normal form is locally equivalent to the state", "[deco]") {
    for (double phase : {pi / 8, pi / 4, pi / 2})
        for (double t : {0.0, 0.2 * tau_d, tau_d, 3 * tau_d}) {
            const DecoConfig cfg = config(phase, 1e-2);
            const DensityMatrix rho = decohere(jb_state(cfg.prep), cfg, t);
            const DensityMatrix normal = x_state(deco_x_params_operator(cfg, t));
            const auto a = eigenvalues_hermitian(rho.matrix());
            const auto b = eigenvalues_hermitian(normal.matrix());
            for (int i = 0; i < 4; ++i)
                REQUIRE_THAT(a[i], WithinAbs(b[i], 1e-15));
            for (Qubit q : {Qubit::A, Qubit::B})
                REQUIRE_THAT(bloch_vector(partial_trace(rho, q)).norm(),
                             WithinAbs(bloch_vector(partial_trace(normal, q)).norm(), 1e-15));
        }
}

TEST_CASE("analytic decoherence measures", "[deco]") {
    const CorrelationTriple flat = deco_measures_analytic(config(pi / 2), 0.0);
    for (double t = 0.0; t <= 10 * tau_d; t += 0.25 * tau_d) {
        const CorrelationTriple m = deco_measures_analytic(config(pi / 2), t);
        REQUIRE_THAT(m.discord, WithinAbs(flat.discord, 1e-13));
        REQUIRE_THAT(m.classical, WithinAbs(flat.classical, 1e-13));
    }
    for (double t = 0.0; t <= 3 * tau_d; t += 0.1 * tau_d) {
        const CorrelationTriple m = deco_measures_analytic(config(pi / 4), t);
        REQUIRE_THAT(m.discord, WithinAbs(m.mutual_info - m.classical, 1e-14));
        REQUIRE(m.discord >= -1e-15);
        const DecoParams p = deco_x_params_unit(pi / 4, omega, tau_d, t);
        REQUIRE_THAT(m.classical, WithinAbs(0.5 * p.params.c_x * p.params.c_x, 1e-14));
    }
}

TEST_CASE("analytic decoherence discord matches exact discord", "[deco][oracle]") {
    const double b = 1e-3;
    for (double phase : {pi / 4, pi / 2})
        for (double t : {0.0, 0.3 * tau_d, tau_d, 2 * tau_d}) {
            const DecoConfig cfg = config(phase, b);
            const double analytic = deco_measures_analytic(cfg, t).discord;
            const double exact =
                correlation_measures(x_state(deco_x_params(cfg, t).params)).per_beta0_squared(b).discord;
            REQUIRE_THAT(exact, WithinRel(analytic, 5e-3));
        }
}

TEST_CASE("the decohered state approaches the block-diagonal asymptote", "[deco]") {
    const DecoConfig cfg = config(pi / 4, 1e-2);
    const DensityMatrix rho0 = jb_state(cfg.prep);
    const double asymptote = correlation_measures(block_diagonal_part(rho0)).discord;
    const double late = correlation_measures(decohere(rho0, cfg, 3 * tau_d)).discord;
    REQUIRE_THAT(late, WithinAbs(asymptote, 1e-12));
    const double early = correlation_measures(decohere(rho0, cfg, 0.1 * tau_d)).discord;
    REQUIRE(std::abs(early - asymptote) > 1e-8);
}

TEST_CASE("decoherence rate scaling", "[deco]") {
    const double base = decoherence_rate(5000.0, constants::proton_mass, omega, 0.1);
    REQUIRE(base > 0.0);
    REQUIRE_THAT(decoherence_rate(5000.0, constants::proton_mass, 2 * omega, 0.1), WithinRel(base / 4, 1e-14));
    REQUIRE_THAT(decoherence_rate(10000.0, constants::proton_mass, omega, 0.1), WithinRel(base * 4, 1e-14));
    REQUIRE_THAT(decoherence_rate(5000.0, constants::proton_mass, omega, 0.2), WithinRel(base / 2, 1e-14));
    REQUIRE_THROWS_AS(decoherence_rate(0.0, 1.0, 1.0, 1.0), DomainError);
    REQUIRE_THROWS_AS(decoherence_rate(1.0, 1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("condition functions along decoherence", "[deco]") {
    // t = 0 at phase pi/2: s = 1, c = 0
    const ConditionFunctions top = appendix_condition_functions(config(pi / 2), 0.0);
    const double left = (r2 + 1) / r2 + std::sqrt((11 + 6 * r2) / 8);
    REQUIRE_THAT(top.izq, WithinRel(0.25 * left * left, 1e-14));
    REQUIRE_THAT(top.der, WithinRel((r2 - 1) * (r2 - 1) / r2 / 8, 1e-14));
    for (double phase : {pi / 8, pi / 4, pi / 2})
        for (double t = 0.0; t <= 5 * tau_d; t += 0.05 * tau_d) {
            const ConditionFunctions f = appendix_condition_functions(config(phase), t);
            REQUIRE(f.izq > f.der);
        }
}
