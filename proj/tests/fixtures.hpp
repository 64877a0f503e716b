#pragma once

#include "pita/accel.hpp"
#include "pita/omega_study.hpp"

#include <cmath>

namespace test {

/// Omega series 1 + 0.5 * 0.6^i + 0.2 * (-0.3)^i, i = 0..6, labels spaced by 1.
inline pita::OmegaSeries planted_series() {
    pita::OmegaSeries omega;
    for (int i = 0; i < 7; ++i) {
        omega.terms.push_back(pita::StateVector::Constant(1, 1.0 + 0.5 * std::pow(0.6, i) + 0.2 * std::pow(-0.3, i)));
        omega.labels.push_back(100.0 + i);
    }
    return omega;
}

/// Its coupled extrapolation at q = 2, which makes q = 2 an exact zero of the objective.
inline pita::StateVector planted_reference() {
    pita::AccelSpec spec;
    spec.aux = pita::AuxSeriesParams{0.0, 2.0, pita::AuxForm::literal};
    return pita::vector_accelerate(spec, planted_series().terms);
}

} // namespace test
