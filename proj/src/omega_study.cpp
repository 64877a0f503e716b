#include "pita/omega_study.hpp"

#include "pita/errors.hpp"
#include "pita/parallel.hpp"
#include "pita/propagators.hpp"

#include <string>

namespace pita {

void validate_subdivisions(const SubdivisionSet& sub) {
    if (!(sub.h0 > 0.0)) {
        throw InvalidArgument("reference step h0 must be positive");
    }
    if (sub.deltas.empty()) {
        throw InvalidArgument("subdivision ladder is empty");
    }
    for (std::size_t i = 0; i < sub.deltas.size(); ++i) {
        if (sub.deltas[i] < 1) {
            throw InvalidArgument("subdivision factors must be positive integers");
        }
        if (i > 0 && sub.deltas[i] <= sub.deltas[i - 1]) {
            throw InvalidArgument("subdivision factors must be strictly increasing");
        }
    }
}

void validate_omega(const OmegaSeries& series) {
    if (series.terms.empty() || series.terms.size() != series.labels.size()) {
        throw InvalidArgument("omega series needs matching, non-empty terms and labels");
    }
    for (std::size_t i = 1; i < series.terms.size(); ++i) {
        if (!(series.labels[i] > series.labels[i - 1])) {
            throw InvalidArgument("omega series labels must be strictly increasing");
        }
        if (series.terms[i].size() != series.terms[0].size()) {
            throw DimensionError("omega series terms differ in dimension");
        }
    }
}

Trajectory build_psi(const LtiSystem& sys, double h0, int delta, double tf) {
    if (delta < 1) {
        throw InvalidArgument("subdivision factor must be a positive integer");
    }
    const long coarse_steps = step_count(0.0, tf, h0);
    const double h = h0 / delta;
    const Vector forcing = sys.forcing();

    Trajectory psi;
    psi.times.reserve(static_cast<std::size_t>(coarse_steps) + 1);
    psi.states.reserve(static_cast<std::size_t>(coarse_steps) + 1);
    psi.times.push_back(0.0);
    psi.states.push_back(sys.y0);

    StateVector y = sys.y0;
    long fine_step = 0;
    for (long k0 = 1; k0 <= coarse_steps; ++k0) {
        for (int s = 0; s < delta; ++s) {
            y += h * (sys.A * y + forcing);
            ++fine_step;
        }
        if (!y.allFinite()) {
            throw NonFiniteError("Psi series for delta " + std::to_string(delta) +
                                     " overflowed at fine step " + std::to_string(fine_step),
                                 fine_step);
        }
        psi.times.push_back(k0 == coarse_steps ? tf : static_cast<double>(k0) * h0);
        psi.states.push_back(y);
    }
    return psi;
}

OmegaSeries build_omega_series(const LtiSystem& sys, const SubdivisionSet& sub, int k0, double tf) {
    validate_subdivisions(sub);
    const long coarse_steps = step_count(0.0, tf, sub.h0);
    if (k0 < 1 || k0 > coarse_steps) {
        throw InvalidArgument("k0 must lie in [1, " + std::to_string(coarse_steps) + "]");
    }
    const double anchor = static_cast<double>(k0) * sub.h0;

    OmegaSeries series;
    series.anchor_time = anchor;
    for (int delta : sub.deltas) {
        // Same integer step count as build_psi, stopped at the anchor.
        const long steps = static_cast<long>(k0) * delta;
        const double h = sub.h0 / delta;
        const Vector forcing = sys.forcing();
        StateVector y = sys.y0;
        for (long i = 1; i <= steps; ++i) {
            y += h * (sys.A * y + forcing);
        }
        require_finite(y, "omega series term");
        series.terms.push_back(std::move(y));
        series.labels.push_back(static_cast<double>(delta));
    }
    return series;
}

std::vector<double> omega_error_curve(const OmegaSeries& series, const StateVector& exact) {
    std::vector<double> errors;
    errors.reserve(series.terms.size());
    for (const auto& term : series.terms) {
        if (term.size() != exact.size()) {
            throw DimensionError("omega term and exact state differ in dimension");
        }
        errors.push_back((term - exact).norm());
    }
    return errors;
}

EulerStudy run_euler_study(const LtiSystem& sys, const SubdivisionSet& sub, double tf,
                           unsigned threads) {
    validate_subdivisions(sub);
    const long coarse_steps = step_count(0.0, tf, sub.h0);

    EulerStudy study;
    study.psi.resize(sub.deltas.size());
    parallel_for(sub.deltas.size(), threads, [&](std::size_t i) {
        study.psi[i] = build_psi(sys, sub.h0, sub.deltas[i], tf);
    });

    study.omega.resize(static_cast<std::size_t>(coarse_steps));
    for (long k0 = 1; k0 <= coarse_steps; ++k0) {
        OmegaSeries& series = study.omega[static_cast<std::size_t>(k0 - 1)];
        series.anchor_time = static_cast<double>(k0) * sub.h0;
        for (std::size_t i = 0; i < sub.deltas.size(); ++i) {
            series.terms.push_back(study.psi[i].states[static_cast<std::size_t>(k0)]);
            series.labels.push_back(static_cast<double>(sub.deltas[i]));
        }
    }
    return study;
}

} // namespace pita
