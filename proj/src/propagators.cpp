#include "pita/propagators.hpp"

#include "pita/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace pita {

namespace {

constexpr double kStepTolerance = 1e-9;

void require_dimension(const LtiSystem& sys, const StateVector& y) {
    if (y.size() != sys.dimension()) {
        throw DimensionError("state has " + std::to_string(y.size()) +
                             " components, system has " + std::to_string(sys.dimension()));
    }
}

void require_step(double h) {
    if (!(h >= 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("time step must be finite and non-negative");
    }
}

void check_state(const StateVector& y, long step) {
    if (!y.allFinite()) {
        throw NonFiniteError("non-finite state at step " + std::to_string(step), step);
    }
}

} // namespace

std::string_view to_string(PropagatorKind kind) noexcept {
    switch (kind) {
    case PropagatorKind::explicit_euler: return "explicit";
    case PropagatorKind::implicit_euler: return "implicit";
    }
    return "unknown";
}

long step_count(double t_start, double t_end, double h) {
    if (!(t_end > t_start)) {
        throw StepCountError("propagation interval must satisfy t_end > t_start");
    }
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw StepCountError("propagation step must be finite and positive");
    }
    const double ratio = (t_end - t_start) / h;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > kStepTolerance * std::max(1.0, ratio)) {
        throw StepCountError("interval [" + std::to_string(t_start) + ", " +
                             std::to_string(t_end) + "] is not an integral number of steps of " +
                             std::to_string(h) + " (ratio " + std::to_string(ratio) + ")");
    }
    return static_cast<long>(rounded);
}

StateVector explicit_euler_step(const LtiSystem& sys, const StateVector& y, double h) {
    require_dimension(sys, y);
    require_step(h);
    StateVector next = y + h * (sys.A * y + sys.forcing());
    check_state(next, 1);
    return next;
}

Trajectory explicit_euler_propagate(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h) {
    require_dimension(sys, y_start);
    const long steps = step_count(t_start, t_end, h);
    const Vector forcing = sys.forcing();

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.times.push_back(t_start);
    traj.states.push_back(y_start);

    StateVector y = y_start;
    for (long i = 1; i <= steps; ++i) {
        y += h * (sys.A * y + forcing);
        check_state(y, i);
        traj.times.push_back(i == steps ? t_end : t_start + static_cast<double>(i) * h);
        traj.states.push_back(y);
    }
    return traj;
}

StateVector explicit_euler_endpoint(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h) {
    require_dimension(sys, y_start);
    const long steps = step_count(t_start, t_end, h);
    const Vector forcing = sys.forcing();
    StateVector y = y_start;
    for (long i = 1; i <= steps; ++i) {
        y += h * (sys.A * y + forcing);
        check_state(y, i);
    }
    return y;
}

StateVector closed_form_explicit(const LtiSystem& sys, const StateVector& y_start, long steps,
                                 double h) {
    require_dimension(sys, y_start);
    require_step(h);
    if (steps < 0) {
        throw InvalidArgument("closed-form step count must be non-negative");
    }
    const auto d = sys.dimension();
    const Matrix amplification = Matrix::Identity(d, d) + h * sys.A;
    const Vector forcing_step = h * sys.forcing();

    Matrix power = Matrix::Identity(d, d);  // (I + hA)^j
    Vector accumulated = Vector::Zero(d);
    for (long j = 0; j < steps; ++j) {
        accumulated += power * forcing_step;
        power = amplification * power;
    }
    StateVector y = power * y_start + accumulated;
    check_state(y, steps);
    return y;
}

ImplicitStepper::ImplicitStepper(const LtiSystem& sys, double h)
    : h_(h), forcing_step_(h * sys.forcing()) {
    require_step(h);
    const auto d = sys.dimension();
    const Matrix m = Matrix::Identity(d, d) - h * sys.A;
    lu_.compute(m);
    const double scale = std::pow(m.cwiseAbs().colwise().sum().maxCoeff(), static_cast<double>(d));
    if (std::abs(lu_.determinant()) <= 1e-12 * scale) {
        throw SingularMatrixError("I - hA is singular for h = " + std::to_string(h));
    }
}

StateVector ImplicitStepper::step(const StateVector& y) const {
    return lu_.solve(y + forcing_step_);
}

StateVector implicit_euler_step(const LtiSystem& sys, const StateVector& y, double h) {
    require_dimension(sys, y);
    StateVector next = ImplicitStepper(sys, h).step(y);
    check_state(next, 1);
    return next;
}

Trajectory implicit_euler_propagate(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h) {
    require_dimension(sys, y_start);
    const long steps = step_count(t_start, t_end, h);
    const ImplicitStepper stepper(sys, h);

    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.times.push_back(t_start);
    traj.states.push_back(y_start);

    StateVector y = y_start;
    for (long i = 1; i <= steps; ++i) {
        y = stepper.step(y);
        check_state(y, i);
        traj.times.push_back(i == steps ? t_end : t_start + static_cast<double>(i) * h);
        traj.states.push_back(y);
    }
    return traj;
}

StateVector implicit_euler_endpoint(const LtiSystem& sys, const StateVector& y_start,
                                    double t_start, double t_end, double h) {
    require_dimension(sys, y_start);
    const long steps = step_count(t_start, t_end, h);
    const ImplicitStepper stepper(sys, h);
    StateVector y = y_start;
    for (long i = 1; i <= steps; ++i) {
        y = stepper.step(y);
        check_state(y, i);
    }
    return y;
}

Matrix matrix_exponential(const Matrix& m) {
    // Higham (2005), degree 13 only.
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const auto n = m.rows();
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 == 0.0) {
        return Matrix::Identity(n, n);
    }
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    }
    const Matrix x = m / std::ldexp(1.0, squarings);

    const Matrix id = Matrix::Identity(n, n);
    const Matrix x2 = x * x;
    const Matrix x4 = x2 * x2;
    const Matrix x6 = x4 * x2;

    const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                           b[3] * x2 + b[1] * id;
    const Matrix u = x * u_inner;
    const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                     b[2] * x2 + b[0] * id;

    Matrix r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        r = r * r;
    }
    return r;
}

StateVector exact_solution(const LtiSystem& sys, double t) {
    if (!(t >= 0.0)) {
        throw InvalidArgument("exact_solution requires t >= 0");
    }
    const auto d = sys.dimension();
    Matrix augmented = Matrix::Zero(d + 1, d + 1);
    augmented.topLeftCorner(d, d) = sys.A;
    augmented.topRightCorner(d, 1) = sys.forcing();

    const Matrix e = matrix_exponential(augmented * t);
    return e.topLeftCorner(d, d) * sys.y0 + e.topRightCorner(d, 1);
}

double stability_radius(const LtiSystem& sys, double h) {
    require_step(h);
    const auto d = sys.dimension();
    const Matrix amplification = Matrix::Identity(d, d) + h * sys.A;
    const Eigen::EigenSolver<Matrix> solver(amplification, /*computeEigenvectors=*/false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

} // namespace pita
