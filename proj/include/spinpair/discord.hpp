#pragma once

// Quantum discord, mutual information and classical correlations of a
// two-qubit state, with projective measurements performed on spin B.
//
// Entropies enter only through their deficits ln(dim) - S, so quantities of
// order beta0^2 ~ 1e-11 keep full relative precision instead of being lost
// against ln 2.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spinpair/qops.hpp"

namespace spinpair {

struct CorrelationTriple {
    double discord = 0.0;
    double mutual_info = 0.0;
    double classical = 0.0;
    MeasurementDirection optimal_direction{};

    [[nodiscard]] CorrelationTriple scaled(double factor) const {
        return {discord * factor, mutual_info * factor, classical * factor, optimal_direction};
    }

    /// Values per unit beta0^2.
    [[nodiscard]] CorrelationTriple per_beta0_squared(double beta0) const {
        return scaled(1.0 / (beta0 * beta0));
    }
};

struct ConditionalBranch {
    double probability = 0.0;
    ComplexMatrix2 state = ComplexMatrix2::Identity() / 2.0;
};

/// Outcomes of the projective measurement {(I +- n.sigma)/2} on B and the
/// normalized states of A they leave behind. A branch with probability below
/// 1e-15 carries I/2 as a placeholder state.
inline std::array<ConditionalBranch, 2> conditional_state(const DensityMatrix &rho,
                                                          const MeasurementDirection &dir) {
    const Eigen::Vector3d n = dir.bloch();
    const ComplexMatrix2 id = ComplexMatrix2::Identity();
    const ComplexMatrix2 ndots = n.x() * detail::pauli2(Axis::X) +
                                 n.y() * detail::pauli2(Axis::Y) +
                                 n.z() * detail::pauli2(Axis::Z);
    std::array<ConditionalBranch, 2> out;
    for (int k = 0; k < 2; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        const ComplexMatrix4 proj = detail::kron(id, 0.5 * (id + sign * ndots));
        const ComplexMatrix4 post = proj * rho.matrix() * proj;
        const double p = post.trace().real();
        out[k].probability = p;
        if (p >= 1e-15) {
            ComplexMatrix2 reduced = ComplexMatrix2::Zero();
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c)
                    for (int j = 0; j < 2; ++j)
                        reduced(r, c) += post(2 * r + j, 2 * c + j);
            out[k].state = reduced / p;
        }
    }
    return out;
}

/// Information about A gained by measuring B along n, as a deficit:
///   J(n) = sum_+- p_+- [ln 2 - S(rho_A|+-)]
/// so that S(A|n) = ln 2 - J(n). Built once per state from its Bloch form.
class ConditionalLandscape {
  public:
    explicit ConditionalLandscape(const DensityMatrix &rho) : bloch_(bloch_decomposition(rho)) {}
    explicit ConditionalLandscape(const BlochDecomposition &bloch) : bloch_(bloch) {}

    [[nodiscard]] double information(const Eigen::Vector3d &n) const {
        const double bn = bloch_.b.dot(n);
        const Eigen::Vector3d tn = bloch_.t * n;
        double sum = 0.0;
        for (int k = 0; k < 2; ++k) {
            const double sign = k == 0 ? 1.0 : -1.0;
            const double p = 0.5 * (1.0 + sign * bn);
            if (p < 1e-15)
                continue;
            const Eigen::Vector3d r = (bloch_.a + sign * tn) / (1.0 + sign * bn);
            sum += p * bloch_deficit(r.norm());
        }
        return sum;
    }

    [[nodiscard]] double information(const MeasurementDirection &dir) const {
        return information(dir.bloch());
    }

    [[nodiscard]] const BlochDecomposition &bloch() const noexcept { return bloch_; }

  private:
    BlochDecomposition bloch_;
};

inline double conditional_entropy(const DensityMatrix &rho, const MeasurementDirection &dir) {
    return std::numbers::ln2 - ConditionalLandscape(rho).information(dir);
}

struct MinimizerOptions {
    int theta_steps = 64;
    int phi_steps = 128;
    double direction_tolerance = 1e-7; // rad
};

struct ConditionalMinimum {
    MeasurementDirection direction{};
    double conditional_entropy = 0.0; // nats
    double information = 0.0;         // ln 2 - conditional_entropy, full precision
};

namespace detail {

struct TangentPatch {
    const ConditionalLandscape *landscape;
    Eigen::Vector3d origin;
    Eigen::Vector3d e1;
    Eigen::Vector3d e2;

    [[nodiscard]] Eigen::Vector3d point(double u, double v) const {
        return (origin + u * e1 + v * e2).normalized();
    }
};

inline double tangent_objective(const gsl_vector *x, void *params) {
    const auto *patch = static_cast<const TangentPatch *>(params);
    return -patch->landscape->information(
        patch->point(gsl_vector_get(x, 0), gsl_vector_get(x, 1)));
}

/// Nelder-Mead on the plane tangent to the sphere at `start`. No poles, so
/// no coordinate singularity at theta = 0 or pi.
inline Eigen::Vector3d refine_direction(const ConditionalLandscape &landscape,
                                        const Eigen::Vector3d &start, double step,
                                        double tolerance) {
    TangentPatch patch{&landscape, start, {}, {}};
    const Eigen::Vector3d helper =
        std::abs(start.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    patch.e1 = start.cross(helper).normalized();
    patch.e2 = start.cross(patch.e1);

    gsl_multimin_function fn{&tangent_objective, 2, &patch};
    gsl_vector *x = gsl_vector_calloc(2);
    gsl_vector *steps = gsl_vector_alloc(2);
    gsl_vector_set_all(steps, step);
    gsl_multimin_fminimizer *solver =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
    gsl_multimin_fminimizer_set(solver, &fn, x, steps);

    for (int iter = 0; iter < 2000; ++iter) {
        if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS)
            break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), tolerance) ==
            GSL_SUCCESS)
            break;
    }
    const gsl_vector *best = gsl_multimin_fminimizer_x(solver);
    const Eigen::Vector3d out = patch.point(gsl_vector_get(best, 0), gsl_vector_get(best, 1));
    gsl_multimin_fminimizer_free(solver);
    gsl_vector_free(steps);
    gsl_vector_free(x);
    return out;
}

/// n and -n are the same measurement; keep the upper hemisphere, and put
/// phi = 0 whenever that does not cost any information.
inline MeasurementDirection canonical_direction(const ConditionalLandscape &landscape,
                                                Eigen::Vector3d n, double value) {
    if (n.z() < 0.0)
        n = -n;
    MeasurementDirection dir = MeasurementDirection::from_vector(n);
    if (dir.phi == 0.0)
        return dir;
    const MeasurementDirection flat{dir.theta, 0.0};
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    if (dir.theta < 1e-12 || landscape.information(flat) >= value - slack)
        dir.phi = 0.0;
    return dir;
}

} // namespace detail

/// Minimum of S(A|n) over projective measurements on B: a theta x phi grid
/// (theta including both poles), then Nelder-Mead refinement around the best
/// grid point. A refinement is kept only if it strictly improves the grid value.
inline ConditionalMinimum minimize_conditional_entropy(const ConditionalLandscape &landscape,
                                                       const MinimizerOptions &options = {}) {
    if (options.theta_steps < 2 || options.phi_steps < 1)
        throw DomainError("minimize_conditional_entropy: grid needs >= 2 theta and >= 1 phi");

    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    MeasurementDirection best_dir{};
    for (int i = 0; i < options.theta_steps; ++i) {
        const double theta = std::numbers::pi * i / (options.theta_steps - 1);
        for (int j = 0; j < options.phi_steps; ++j) {
            const MeasurementDirection dir{theta, 2.0 * std::numbers::pi * j / options.phi_steps};
            const double value = landscape.information(dir);
            if (!std::isfinite(value))
                throw NumericalError("minimize_conditional_entropy: non-finite landscape value");
            worst = std::min(worst, value);
            if (value > best) {
                best = value;
                best_dir = dir;
            }
        }
    }

    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(best);
    if (best - worst <= noise)
        return {MeasurementDirection{}, std::numbers::ln2 - landscape.information(Eigen::Vector3d::UnitZ()),
                landscape.information(Eigen::Vector3d::UnitZ())};

    const double spacing = std::numbers::pi / (options.theta_steps - 1);
    Eigen::Vector3d n = best_dir.bloch();
    double value = best;
    for (const double step : {spacing, 0.01 * spacing}) {
        const Eigen::Vector3d trial =
            detail::refine_direction(landscape, n, step, 0.01 * options.direction_tolerance);
        const double trial_value = landscape.information(trial);
        if (trial_value > value) {
            n = trial;
            value = trial_value;
        }
    }
    const MeasurementDirection dir = detail::canonical_direction(landscape, n, value);
    value = landscape.information(dir);
    return {dir, std::numbers::ln2 - value, value};
}

inline ConditionalMinimum minimize_conditional_entropy(const DensityMatrix &rho,
                                                       const MinimizerOptions &options = {}) {
    return minimize_conditional_entropy(ConditionalLandscape(rho), options);
}

/// Exact Q, I, C in nats.
///   I = D_AB - D_A - D_B,  C = J_max - D_A,  Q = I - C
/// where D are entropy deficits and J_max the optimal measured information.
inline CorrelationTriple correlation_measures(const DensityMatrix &rho,
                                              const MinimizerOptions &options = {}) {
    const double d_ab = entropy_deficit(rho);
    const double d_a = entropy_deficit(partial_trace(rho, Qubit::A));
    const double d_b = entropy_deficit(partial_trace(rho, Qubit::B));
    const ConditionalMinimum min = minimize_conditional_entropy(rho, options);

    CorrelationTriple out;
    out.mutual_info = d_ab - d_a - d_b;
    out.classical = min.information - d_a;
    out.discord = out.mutual_info - out.classical;
    out.optimal_direction = min.direction;
    if (!std::isfinite(out.discord) || !std::isfinite(out.mutual_info))
        throw NumericalError("correlation_measures: non-finite result");
    return out;
}

/// Eigenvalue deviations 4 lambda - 1 of an X state:
///   c_z +- sqrt((a+b)^2 + (c_x-c_y)^2),  -c_z +- sqrt((a-b)^2 + (c_x+c_y)^2)
inline std::array<double, 4> x_state_eigen_deviations(const XStateParams &p) {
    const double r1 = std::hypot(p.a_z + p.b_z, p.c_x - p.c_y);
    const double r2 = std::hypot(p.a_z - p.b_z, p.c_x + p.c_y);
    return {p.c_z + r1, p.c_z - r1, -p.c_z + r2, -p.c_z - r2};
}

/// Leading-order measures of a weakly polarized X state, with the
/// measurement on B fixed along `axis`:
///   I = sum (dlambda)^2 / 8 - (a_z^2 + b_z^2)/2,  C = c_axis^2 / 2,  Q = I - C
/// Output is in the squared units of the parameters.
inline CorrelationTriple second_order_measures(const XStateParams &p, Axis axis) {
    double sum = 0.0;
    for (const double d : x_state_eigen_deviations(p))
        sum += d * d;
    CorrelationTriple out;
    out.mutual_info = sum / 8.0 - 0.5 * (p.a_z * p.a_z + p.b_z * p.b_z);
    const double c = axis == Axis::X ? p.c_x : axis == Axis::Y ? p.c_y : p.c_z;
    out.classical = 0.5 * c * c;
    out.discord = out.mutual_info - out.classical;
    out.optimal_direction = axis == Axis::Z ? MeasurementDirection{0.0, 0.0}
                            : axis == Axis::X
                                ? MeasurementDirection{std::numbers::pi / 2.0, 0.0}
                                : MeasurementDirection{std::numbers::pi / 2.0, std::numbers::pi / 2.0};
    return out;
}

enum class Verdict { SigmaZ, SigmaX, Undetermined };

inline const char *verdict_name(Verdict v) {
    switch (v) {
    case Verdict::SigmaZ:
        return "sigma_z";
    case Verdict::SigmaX:
        return "sigma_x";
    default:
        return "undetermined";
    }
}

struct OptimalMeasurementVerdict {
    Verdict verdict = Verdict::Undetermined;
    bool condition_i_holds = false;
    bool condition_ii_holds = false;
    /// Transverse axis meant by SigmaX: X, or Y when |c_y| > |c_x| forced a relabeling.
    Axis transverse_axis = Axis::X;
    std::string diagnostic;
};

/// Parameters beyond this magnitude fall outside the small-polarization regime
/// where the two conditions are certified.
inline constexpr double kClassifierParameterBound = 0.25;

/// Optimal measurement of a real X state from two sufficient conditions:
///   (i)  ((|cx+cy| + |cx-cy|)/4)^2 <= (cz^2 - bz^2)/4                   -> sigma_z
///   (ii) |sqrt((1+cz)^2 - (az+bz)^2) - sqrt((az-bz-cz+1)(bz-az-cz+1))|
///            <= |cx+cy| + |cx-cy|                                        -> sigma_x
/// Inputs with |c_y| > |c_x| are relabeled x <-> y first.
inline OptimalMeasurementVerdict classify_optimal_measurement(XStateParams p) {
    OptimalMeasurementVerdict out;
    if (std::abs(p.c_x) < std::abs(p.c_y)) {
        std::swap(p.c_x, p.c_y);
        out.transverse_axis = Axis::Y;
    }
    const double s = std::abs(p.c_x + p.c_y) + std::abs(p.c_x - p.c_y);
    out.condition_i_holds = (s / 4.0) * (s / 4.0) <= (p.c_z * p.c_z - p.b_z * p.b_z) / 4.0;

    const double rad1 = (1.0 + p.c_z) * (1.0 + p.c_z) - (p.a_z + p.b_z) * (p.a_z + p.b_z);
    const double rad2 = (p.a_z - p.b_z - p.c_z + 1.0) * (p.b_z - p.a_z - p.c_z + 1.0);
    if (rad1 < 0.0 || rad2 < 0.0) {
        out.diagnostic = "condition (ii): negative radicand";
        return out;
    }
    out.condition_ii_holds = std::abs(std::sqrt(rad1) - std::sqrt(rad2)) <= s;

    if (p.max_abs() > kClassifierParameterBound) {
        out.diagnostic = "parameters outside the small-polarization regime";
        return out;
    }
    if (out.condition_i_holds)
        out.verdict = Verdict::SigmaZ;
    else if (out.condition_ii_holds)
        out.verdict = Verdict::SigmaX;
    return out;
}

} // namespace spinpair
