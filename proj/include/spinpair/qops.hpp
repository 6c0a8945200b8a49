#pragma once

// Two-qubit operator algebra for a spin-1/2 pair.
//
// Every 4x4 matrix in this library is written in the product basis
//   |++>, |+->, |-+>, |-->      (index 0..3)
// with spin A the left (most significant) factor and |+> the sigma_z = +1
// state. Operators on A are sigma (x) I, operators on B are I (x) sigma.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "spinpair/error.hpp"

namespace spinpair {

using Complex = std::complex<double>;
using ComplexMatrix4 = Eigen::Matrix4cd;
using ComplexMatrix2 = Eigen::Matrix2cd;

namespace constants {
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double boltzmann = 1.380649e-23;             // J / K
inline constexpr double mu0 = 1.25663706212e-6;               // N / A^2
inline constexpr double proton_gyromagnetic = 2.6752218744e8; // rad / (s T)
inline constexpr double proton_mass = 1.67262192369e-27;      // kg
} // namespace constants

enum class Qubit { A, B };
enum class Site { A, B, Both };
enum class Axis { X, Y, Z };

inline char axis_name(Axis axis) {
    switch (axis) {
    case Axis::X:
        return 'x';
    case Axis::Y:
        return 'y';
    default:
        return 'z';
    }
}

namespace detail {

inline ComplexMatrix2 pauli2(Axis axis) {
    const Complex i{0.0, 1.0};
    ComplexMatrix2 m;
    switch (axis) {
    case Axis::X:
        m << 0.0, 1.0, 1.0, 0.0;
        break;
    case Axis::Y:
        m << 0.0, -i, i, 0.0;
        break;
    case Axis::Z:
        m << 1.0, 0.0, 0.0, -1.0;
        break;
    }
    return m;
}

inline ComplexMatrix4 kron(const ComplexMatrix2 &left, const ComplexMatrix2 &right) {
    ComplexMatrix4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out(2 * i + k, 2 * j + l) = left(i, j) * right(k, l);
    return out;
}

inline double max_hermitian_residual(const ComplexMatrix4 &m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// (1+x) ln(1+x) - x. Series near zero keeps full relative precision for
/// the x^2/2 leading term; x <= -1 is a vanishing eigenvalue (0 ln 0 = 0).
inline double entropy_kernel(double x) {
    if (x <= -1.0)
        return 1.0;
    if (std::abs(x) < 0.05) {
        double sum = 0.0;
        double power = x;
        for (int k = 2; k <= 16; ++k) {
            power *= x;
            const double term = power / (static_cast<double>(k) * (k - 1));
            sum += (k % 2 == 0) ? term : -term;
        }
        return sum;
    }
    return (1.0 + x) * std::log1p(x) - x;
}

} // namespace detail

/// sigma_axis on one qubit, identity on the other.
inline ComplexMatrix4 pauli_operator(Qubit site, Axis axis) {
    const ComplexMatrix2 id = ComplexMatrix2::Identity();
    return site == Qubit::A ? detail::kron(detail::pauli2(axis), id)
                            : detail::kron(id, detail::pauli2(axis));
}

/// sigma_A^a sigma_B^b.
inline ComplexMatrix4 pauli_product(Axis a, Axis b) {
    return detail::kron(detail::pauli2(a), detail::pauli2(b));
}

/// Normalized two-spin spherical tensors T_{L,M}, Tr(T T^dagger) = 1, built
/// from I = sigma/2 on each spin:
///   T_{1,+-1} = -+ (I_+-^1 + I_+-^2) / 2
///   T_{2,0}   = (2/sqrt6) [3 I_z^1 I_z^2 - I^1 . I^2]
///   T_{2,+-1} = -+ (I_z^1 I_+-^2 + I_+-^1 I_z^2)
///   T_{2,+-2} = I_+-^1 I_+-^2
inline ComplexMatrix4 spherical_tensor(int rank, int order) {
    const ComplexMatrix2 id = ComplexMatrix2::Identity();
    const Complex i{0.0, 1.0};
    const ComplexMatrix2 ix = 0.5 * detail::pauli2(Axis::X);
    const ComplexMatrix2 iy = 0.5 * detail::pauli2(Axis::Y);
    const ComplexMatrix2 iz = 0.5 * detail::pauli2(Axis::Z);
    const ComplexMatrix2 raise = ix + i * iy;
    const ComplexMatrix2 lower = ix - i * iy;
    using detail::kron;

    if (rank == 1 && (order == 1 || order == -1)) {
        const ComplexMatrix2 &ladder = order == 1 ? raise : lower;
        const double sign = order == 1 ? -1.0 : 1.0;
        return sign * 0.5 * (kron(ladder, id) + kron(id, ladder));
    }
    if (rank == 2) {
        switch (order) {
        case 0:
            return (2.0 / std::sqrt(6.0)) *
                   (3.0 * kron(iz, iz) - kron(ix, ix) - kron(iy, iy) - kron(iz, iz));
        case 1:
            return -(kron(iz, raise) + kron(raise, iz));
        case -1:
            return kron(iz, lower) + kron(lower, iz);
        case 2:
            return kron(raise, raise);
        case -2:
            return kron(lower, lower);
        default:
            break;
        }
    }
    std::ostringstream msg;
    msg << "spherical_tensor: unsupported (L, M) = (" << rank << ", " << order << ")";
    throw DomainError(msg.str());
}

/// Eigen-decomposition of a 4x4 Hermitian matrix, eigenvalues descending.
struct HermitianEigen {
    Eigen::Vector4d values;
    ComplexMatrix4 vectors; // columns
};

inline HermitianEigen eigen_hermitian(const ComplexMatrix4 &m, double tolerance = 1e-12) {
    const double residual = detail::max_hermitian_residual(m);
    if (!(residual <= tolerance)) {
        std::ostringstream msg;
        msg << "eigen_hermitian: matrix is not Hermitian (max |m - m^dagger| = " << residual
            << ")";
        throw DomainError(msg.str());
    }
    const ComplexMatrix4 sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix4> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigen_hermitian: eigensolver did not converge");

    // Eigen returns ascending order; reverse keeps equal values in a stable order.
    HermitianEigen out;
    for (int k = 0; k < 4; ++k) {
        out.values(k) = solver.eigenvalues()(3 - k);
        out.vectors.col(k) = solver.eigenvectors().col(3 - k);
    }
    return out;
}

inline std::array<double, 4> eigenvalues_hermitian(const ComplexMatrix4 &m,
                                                   double tolerance = 1e-12) {
    const auto eig = eigen_hermitian(m, tolerance);
    return {eig.values(0), eig.values(1), eig.values(2), eig.values(3)};
}

/// Validated two-qubit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
  public:
    static constexpr double kTolerance = 1e-12;

    DensityMatrix() : matrix_(ComplexMatrix4::Identity() / 4.0) {}

    explicit DensityMatrix(const ComplexMatrix4 &m, double tolerance = kTolerance) {
        const double herm = detail::max_hermitian_residual(m);
        if (!(herm <= tolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: not Hermitian (max residual " << herm << ")";
            throw DomainError(msg.str());
        }
        const Complex trace = m.trace();
        if (!(std::abs(trace - Complex{1.0, 0.0}) <= tolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: trace " << trace.real() << " differs from 1";
            throw DomainError(msg.str());
        }
        matrix_ = 0.5 * (m + m.adjoint());
        const double smallest = eigenvalues_hermitian(matrix_)[3];
        if (!(smallest >= -tolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: negative eigenvalue " << smallest;
            throw DomainError(msg.str());
        }
    }

    static DensityMatrix maximally_mixed() { return DensityMatrix{}; }

    [[nodiscard]] const ComplexMatrix4 &matrix() const noexcept { return matrix_; }
    [[nodiscard]] Complex operator()(int row, int col) const { return matrix_(row, col); }

    /// rho - I/4.
    [[nodiscard]] ComplexMatrix4 deviation() const {
        return matrix_ - ComplexMatrix4::Identity() / 4.0;
    }

  private:
    ComplexMatrix4 matrix_;
};

/// Projective measurement axis n = (sin t cos p, sin t sin p, cos t).
struct MeasurementDirection {
    double theta = 0.0;
    double phi = 0.0;

    [[nodiscard]] Eigen::Vector3d bloch() const {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta)};
    }

    static MeasurementDirection from_vector(const Eigen::Vector3d &v) {
        const Eigen::Vector3d n = v.normalized();
        double phi = std::atan2(n.y(), n.x());
        if (phi < 0.0)
            phi += 2.0 * std::numbers::pi;
        return {std::acos(std::clamp(n.z(), -1.0, 1.0)), phi};
    }
};

/// exp(-i angle sum_site sigma_axis / 2).
inline ComplexMatrix4 rotation_unitary(Site site, Axis axis, double angle) {
    const ComplexMatrix2 id = ComplexMatrix2::Identity();
    const ComplexMatrix2 single = std::cos(angle / 2.0) * id -
                                  Complex{0.0, std::sin(angle / 2.0)} * detail::pauli2(axis);
    switch (site) {
    case Site::A:
        return detail::kron(single, id);
    case Site::B:
        return detail::kron(id, single);
    default:
        return detail::kron(single, single);
    }
}

inline DensityMatrix rotate(const DensityMatrix &rho, Site site, Axis axis, double angle) {
    const ComplexMatrix4 u = rotation_unitary(site, axis, angle);
    return DensityMatrix(u * rho.matrix() * u.adjoint());
}

inline ComplexMatrix2 partial_trace(const DensityMatrix &rho, Qubit keep) {
    ComplexMatrix2 out = ComplexMatrix2::Zero();
    const ComplexMatrix4 &m = rho.matrix();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int k = 0; k < 2; ++k)
                out(r, c) += keep == Qubit::A ? m(2 * r + k, 2 * c + k) : m(2 * k + r, 2 * k + c);
    return out;
}

/// Bloch vector of a 2x2 state.
inline Eigen::Vector3d bloch_vector(const ComplexMatrix2 &rho) {
    return {2.0 * rho(1, 0).real(), 2.0 * rho(1, 0).imag(), (rho(0, 0) - rho(1, 1)).real()};
}

/// ln 2 - S for a qubit whose Bloch vector has length r.
inline double bloch_deficit(double r) {
    r = std::min(std::abs(r), 1.0);
    return 0.5 * (detail::entropy_kernel(r) + detail::entropy_kernel(-r));
}

/// ln(dim) - S(rho). Computed from deviations of the eigenvalues from the
/// maximally mixed value, so it stays accurate when rho is close to I/dim.
inline double entropy_deficit(const ComplexMatrix2 &rho) {
    return bloch_deficit(bloch_vector(rho).norm());
}

inline double entropy_deficit(const DensityMatrix &rho) {
    const auto eig = eigen_hermitian(4.0 * rho.deviation());
    double sum = 0.0;
    for (int k = 0; k < 4; ++k)
        sum += detail::entropy_kernel(eig.values(k));
    return 0.25 * sum;
}

/// Von Neumann entropy in nats.
inline double von_neumann_entropy(const ComplexMatrix2 &rho) {
    return std::numbers::ln2 - entropy_deficit(rho);
}

inline double von_neumann_entropy(const DensityMatrix &rho) {
    return 2.0 * std::numbers::ln2 - entropy_deficit(rho);
}

inline double expectation(const DensityMatrix &rho, const ComplexMatrix4 &observable,
                          double tolerance = 1e-12) {
    if (!(detail::max_hermitian_residual(observable) <= tolerance))
        throw DomainError("expectation: observable is not Hermitian");
    return (rho.matrix() * observable).trace().real();
}

/// Local Bloch vectors a, b and correlation tensor T_ij = Tr(rho s_i s_j).
struct BlochDecomposition {
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
};

inline BlochDecomposition bloch_decomposition(const DensityMatrix &rho) {
    constexpr std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};
    const ComplexMatrix4 &m = rho.matrix();
    BlochDecomposition out;
    for (int i = 0; i < 3; ++i) {
        out.a(i) = (m * pauli_operator(Qubit::A, axes[i])).trace().real();
        out.b(i) = (m * pauli_operator(Qubit::B, axes[i])).trace().real();
        for (int j = 0; j < 3; ++j)
            out.t(i, j) = (m * pauli_product(axes[i], axes[j])).trace().real();
    }
    return out;
}

/// Real X-state coefficients of 1/4 (I + a_z s_A^z + b_z s_B^z + sum_k c_k s_A^k s_B^k).
struct XStateParams {
    double a_z = 0.0;
    double b_z = 0.0;
    double c_x = 0.0;
    double c_y = 0.0;
    double c_z = 0.0;

    [[nodiscard]] XStateParams scaled(double factor) const {
        return {a_z * factor, b_z * factor, c_x * factor, c_y * factor, c_z * factor};
    }

    [[nodiscard]] double max_abs() const {
        return std::max({std::abs(a_z), std::abs(b_z), std::abs(c_x), std::abs(c_y),
                         std::abs(c_z)});
    }

    friend bool operator==(const XStateParams &, const XStateParams &) = default;
};

inline ComplexMatrix4 reconstruct(const XStateParams &p) {
    ComplexMatrix4 m = ComplexMatrix4::Identity();
    m += p.a_z * pauli_operator(Qubit::A, Axis::Z);
    m += p.b_z * pauli_operator(Qubit::B, Axis::Z);
    m += p.c_x * pauli_product(Axis::X, Axis::X);
    m += p.c_y * pauli_product(Axis::Y, Axis::Y);
    m += p.c_z * pauli_product(Axis::Z, Axis::Z);
    return 0.25 * m;
}

inline DensityMatrix x_state(const XStateParams &p) { return DensityMatrix(reconstruct(p)); }

/// Off-pattern residual check, then Pauli coefficients via traces.
inline XStateParams extract_x_params(const DensityMatrix &rho, double tolerance = 1e-10) {
    const ComplexMatrix4 &m = rho.matrix();
    int worst_row = -1;
    int worst_col = -1;
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            const bool diagonal = r == c;
            const bool anti = r + c == 3;
            // anti-diagonal entries must be real for a real X state
            const double weight = diagonal ? 0.0 : anti ? std::abs(m(r, c).imag())
                                                        : std::abs(m(r, c));
            if (weight > worst) {
                worst = weight;
                worst_row = r;
                worst_col = c;
            }
        }
    }
    if (worst > tolerance) {
        std::ostringstream msg;
        msg << "extract_x_params: not a real X state; largest off-pattern entry (" << worst_row
            << ", " << worst_col << ") has magnitude " << worst;
        throw NotXStateError(msg.str(), worst_row, worst_col, worst);
    }
    XStateParams p;
    p.a_z = expectation(rho, pauli_operator(Qubit::A, Axis::Z));
    p.b_z = expectation(rho, pauli_operator(Qubit::B, Axis::Z));
    p.c_x = expectation(rho, pauli_product(Axis::X, Axis::X));
    p.c_y = expectation(rho, pauli_product(Axis::Y, Axis::Y));
    p.c_z = expectation(rho, pauli_product(Axis::Z, Axis::Z));
    return p;
}

/// Secular dipolar coupling mu0 gamma^2 hbar / (8 pi r^3) [1 - 3 cos^2 theta].
/// SI inputs; the value is the angular coupling (rad/s numerically).
inline double dipolar_frequency(double r12, double theta12,
                                double gamma = constants::proton_gyromagnetic) {
    if (!(r12 > 0.0))
        throw DomainError("dipolar_frequency: r12 must be positive");
    const double c = std::cos(theta12);
    return constants::mu0 * gamma * gamma * constants::hbar /
           (8.0 * std::numbers::pi * r12 * r12 * r12) * (1.0 - 3.0 * c * c);
}

/// Dipolar frequency for a pair perpendicular to the field, in the
/// 3 mu0 gamma^2 hbar / (16 pi r^3) form used to quote omega_D. This is 3/2 of
/// dipolar_frequency(r12, pi/2).
inline double dipolar_frequency_perpendicular(double r12,
                                              double gamma = constants::proton_gyromagnetic) {
    if (!(r12 > 0.0))
        throw DomainError("dipolar_frequency_perpendicular: r12 must be positive");
    return 3.0 * constants::mu0 * gamma * gamma * constants::hbar /
           (16.0 * std::numbers::pi * r12 * r12 * r12);
}

} // namespace spinpair
