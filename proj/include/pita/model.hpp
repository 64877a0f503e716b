#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace pita {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// State of the ODE at one instant. Dense, small (d <= ~64).
using StateVector = Vector;

/// Linear time-invariant system  y' = A y + B u,  y(t0) = y0,
/// with constant matrices and a constant input u.
struct LtiSystem {
    Matrix A;
    Matrix B;
    Vector u;
    StateVector y0;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return A.rows(); }

    /// The constant forcing term B u.
    [[nodiscard]] Vector forcing() const { return B * u; }

    /// Same dynamics started from another initial state.
    [[nodiscard]] LtiSystem with_initial_state(StateVector y) const {
        LtiSystem copy = *this;
        copy.y0 = std::move(y);
        return copy;
    }
};

/// Uniform decomposition of [t0, tf] into `slices` equal parts.
struct TimeGrid {
    double t0 = 0.0;
    double tf = 1.0;
    int slices = 1;

    [[nodiscard]] double slice_length() const noexcept { return (tf - t0) / slices; }
};

/// Time-stamped sequence of states produced by a propagator.
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
    [[nodiscard]] const StateVector& back() const { return states.back(); }
};

/// Throws NonFiniteError unless every component of `v` is finite.
void require_finite(const Vector& v, const char* what);

/// Checks shapes and finiteness of a system. Returns it unchanged on success.
///
/// Throws DimensionError naming the offending field, or NonFiniteError.
LtiSystem validate_system(LtiSystem sys);

/// Throws InvalidArgument unless tf > t0 and slices >= 1.
void validate_grid(const TimeGrid& grid);

/// The N+1 slice boundaries t0, t0 + h, ..., tf. The last entry is tf itself,
/// not an accumulated sum.
std::vector<double> slice_boundaries(const TimeGrid& grid);

/// Validates that `traj` has matching lengths, increasing times and one
/// state dimension.
void validate_trajectory(const Trajectory& traj);

/// The example system used throughout the tests and the `paper-sigma` preset:
/// A = [[-1, 5], [-5, -1]], B = [0, 1]^T, u = 10, y0 = [0, 1].
LtiSystem damped_oscillator_system();

} // namespace pita
