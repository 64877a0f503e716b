#include "pita/model.hpp"

#include "pita/errors.hpp"

#include <string>

namespace pita {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_finite_matrix(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw NonFiniteError(std::string("non-finite entry in ") + what);
    }
}

} // namespace

void require_finite(const Vector& v, const char* what) {
    if (!v.allFinite()) {
        throw NonFiniteError(std::string("non-finite entry in ") + what);
    }
}

LtiSystem validate_system(LtiSystem sys) {
    const auto d = sys.A.rows();
    if (d < 1 || sys.A.cols() != d) {
        throw DimensionError("A must be square with d >= 1, got " + shape(sys.A));
    }
    if (sys.B.rows() != d) {
        throw DimensionError("B must have " + std::to_string(d) + " rows, got " + shape(sys.B));
    }
    if (sys.u.size() != sys.B.cols()) {
        throw DimensionError("u must have " + std::to_string(sys.B.cols()) +
                             " entries (cols of B), got " + std::to_string(sys.u.size()));
    }
    if (sys.y0.size() != d) {
        throw DimensionError("y0 must have " + std::to_string(d) + " entries, got " +
                             std::to_string(sys.y0.size()));
    }
    require_finite_matrix(sys.A, "A");
    require_finite_matrix(sys.B, "B");
    require_finite(sys.u, "u");
    require_finite(sys.y0, "y0");
    return sys;
}

void validate_grid(const TimeGrid& grid) {
    if (!(grid.tf > grid.t0)) {
        throw InvalidArgument("time grid requires tf > t0");
    }
    if (grid.slices < 1) {
        throw InvalidArgument("time grid requires at least one slice");
    }
}

std::vector<double> slice_boundaries(const TimeGrid& grid) {
    std::vector<double> t(static_cast<std::size_t>(grid.slices) + 1);
    const double h = grid.slice_length();
    for (int j = 0; j < grid.slices; ++j) {
        t[static_cast<std::size_t>(j)] = grid.t0 + j * h;
    }
    t.back() = grid.tf;
    return t;
}

void validate_trajectory(const Trajectory& traj) {
    if (traj.times.size() != traj.states.size()) {
        throw DimensionError("trajectory times and states differ in length");
    }
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        if (!(traj.times[i] > traj.times[i - 1])) {
            throw InvalidArgument("trajectory times must be strictly increasing");
        }
        if (traj.states[i].size() != traj.states[0].size()) {
            throw DimensionError("trajectory states differ in dimension");
        }
    }
}

LtiSystem damped_oscillator_system() {
    LtiSystem sys;
    sys.A = Matrix{{-1.0, 5.0}, {-5.0, -1.0}};
    sys.B = Matrix{{0.0}, {1.0}};
    sys.u = Vector::Constant(1, 10.0);
    sys.y0 = Vector{{0.0, 1.0}};
    return sys;
}

} // namespace pita
