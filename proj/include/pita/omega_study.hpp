#pragma once

#include "pita/model.hpp"

#include <vector>

namespace pita {

/// Reference step h0 and the integer subdivision factors delta_i, giving
/// steps h_i = h0 / delta_i. Integer factors keep every fine trajectory
/// aligned with the coarse instants k0 * h0 without interpolation.
struct SubdivisionSet {
    double h0 = 0.1;
    std::vector<int> deltas{1};
};

/// Throws InvalidArgument unless h0 > 0 and deltas are positive and strictly increasing.
void validate_subdivisions(const SubdivisionSet& sub);

/// Successive approximations of the state at one instant, one term per
/// subdivision factor (or per iteration), with the label that produced it.
struct OmegaSeries {
    double anchor_time = 0.0;
    std::vector<StateVector> terms;
    std::vector<double> labels;

    [[nodiscard]] std::size_t size() const noexcept { return terms.size(); }
};

void validate_omega(const OmegaSeries& series);

/// Explicit Euler trajectory with step h0/delta over [0, tf], keeping only the
/// coarse instants k0 * h0. Always tf/h0 + 1 points, whatever delta is.
///
/// Throws StepCountError if tf/h0 is not integral.
Trajectory build_psi(const LtiSystem& sys, double h0, int delta, double tf);

/// The value at k0 * h0 of every Psi^i, in delta order.
OmegaSeries build_omega_series(const LtiSystem& sys, const SubdivisionSet& sub, int k0, double tf);

/// Euclidean error of every term against `exact`.
std::vector<double> omega_error_curve(const OmegaSeries& series, const StateVector& exact);

/// Every Psi^i plus the Omega series at each coarse instant k0 = 1 .. tf/h0.
struct EulerStudy {
    std::vector<Trajectory> psi;        // one per delta, in ladder order
    std::vector<OmegaSeries> omega;     // omega[k0 - 1]
};

/// Builds all Psi^i concurrently; assembly is keyed by delta, so the result
/// does not depend on thread count.
EulerStudy run_euler_study(const LtiSystem& sys, const SubdivisionSet& sub, double tf,
                           unsigned threads = 1);

} // namespace pita
