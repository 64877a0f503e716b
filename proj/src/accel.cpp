#include "pita/accel.hpp"

#include "pita/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pita {

double shanks(double s0, double s1, double s2, double guard) {
    const double denominator = s0 + s2 - 2.0 * s1;
    const double scale = std::max({1.0, std::abs(s0), std::abs(s1), std::abs(s2)});
    if (!(std::abs(denominator) > guard * scale)) {
        throw DegenerateDenominatorError("Shanks denominator vanishes: sequence is locally "
                                         "arithmetic or constant");
    }
    return (s0 * s2 - s1 * s1) / denominator;
}

EpsilonTable::EpsilonTable(std::span<const double> sequence, double guard) {
    if (sequence.empty()) {
        throw InvalidArgument("epsilon table needs at least one term");
    }
    for (double s : sequence) {
        if (!std::isfinite(s)) {
            throw NonFiniteError("epsilon table input contains a non-finite term");
        }
    }
    const std::size_t len = sequence.size();
    columns_.reserve(len);
    guarded_.reserve(len);
    columns_.emplace_back(sequence.begin(), sequence.end());
    guarded_.emplace_back(len, false);

    // e_{-1}: one longer than column 0, all zeros.
    std::vector<double> previous(len + 1, 0.0);
    for (std::size_t c = 0; c + 1 < len; ++c) {
        const std::vector<double>& current = columns_[c];
        const std::vector<bool>& poles = guarded_[c];
        std::vector<double> next(current.size() - 1);
        std::vector<bool> flags(next.size(), false);
        for (std::size_t i = 0; i < next.size(); ++i) {
            const double diff = current[i + 1] - current[i];
            if (poles[i] || poles[i + 1]) {
                // A guarded neighbour stands for an infinite entry: 1/inf = 0.
                next[i] = previous[i + 1];
            } else if (std::abs(diff) <= guard * (1.0 + std::abs(current[i]))) {
                next[i] = previous[i + 1];
                flags[i] = true;
            } else {
                next[i] = previous[i + 1] + 1.0 / diff;
            }
        }
        previous = current;
        columns_.push_back(std::move(next));
        guarded_.push_back(std::move(flags));
    }
}

double EpsilonTable::extrapolant(std::size_t k, std::size_t n) const {
    if (k % 2 != 0) {
        throw InvalidArgument("odd epsilon columns are auxiliary and not extrapolants");
    }
    if (k >= columns_.size() || n >= columns_[k].size()) {
        throw InvalidArgument("epsilon table entry (" + std::to_string(k) + ", " +
                              std::to_string(n) + ") out of range");
    }
    return columns_[k][n];
}

bool EpsilonTable::guarded(std::size_t c, std::size_t n) const {
    return guarded_.at(c).at(n);
}

bool EpsilonTable::any_guarded() const noexcept {
    return std::any_of(guarded_.begin(), guarded_.end(), [](const std::vector<bool>& col) {
        return std::find(col.begin(), col.end(), true) != col.end();
    });
}

EpsilonTable epsilon_table(std::span<const double> sequence, double guard) {
    return EpsilonTable(sequence, guard);
}

std::string_view to_string(AuxForm form) noexcept {
    switch (form) {
    case AuxForm::literal: return "literal";
    case AuxForm::summed: return "summed";
    case AuxForm::off: return "off";
    }
    return "unknown";
}

AuxForm parse_aux_form(std::string_view text) {
    if (text == "literal") return AuxForm::literal;
    if (text == "summed") return AuxForm::summed;
    if (text == "off") return AuxForm::off;
    throw InvalidArgument("unknown aux form '" + std::string(text) +
                          "' (expected literal, summed or off)");
}

void validate_spec(const AccelSpec& spec) {
    if (spec.k < 0 || spec.k % 2 != 0) {
        throw InvalidArgument("extrapolation order k must be even and non-negative, got " +
                              std::to_string(spec.k));
    }
    if (spec.n < 0) {
        throw InvalidArgument("starting index n must be non-negative");
    }
    if (!(spec.rho > 0.0)) {
        throw InvalidArgument("scaling factor rho must be positive");
    }
    if (spec.aux && !(spec.aux->q > 0.0)) {
        throw InvalidArgument("aux damping exponent q must be positive");
    }
    if (spec.aux && !std::isfinite(spec.aux->s_b0)) {
        throw InvalidArgument("aux initial term S_b0 must be finite");
    }
}

std::size_t terms_needed(int k, int n) {
    if (k < 0 || k % 2 != 0) {
        throw InvalidArgument("only even k >= 0 are extrapolation orders, got " +
                              std::to_string(k));
    }
    if (n < 0) {
        throw InvalidArgument("starting index n must be non-negative");
    }
    return static_cast<std::size_t>(n) + static_cast<std::size_t>(k) + 1;
}

double s_epsilon(const AccelSpec& spec, std::span<const double> sequence) {
    validate_spec(spec);
    const std::size_t required = terms_needed(spec.k, spec.n);
    if (sequence.size() < required) {
        throw InsufficientTermsError("order " + std::to_string(spec.k) + " from index " +
                                         std::to_string(spec.n) + " needs " +
                                         std::to_string(required) + " terms, got " +
                                         std::to_string(sequence.size()),
                                     required);
    }
    // e_k^{(n)} depends on S_n .. S_{n+k} only.
    const auto window = sequence.subspan(static_cast<std::size_t>(spec.n),
                                         static_cast<std::size_t>(spec.k) + 1);
    return EpsilonTable(window, spec.denom_guard).extrapolant(static_cast<std::size_t>(spec.k), 0);
}

double aux_series_term(const AuxSeriesParams& params, int n) {
    if (n < 0) {
        throw InvalidArgument("aux series index must be non-negative");
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    switch (params.form) {
    case AuxForm::literal:
        return params.s_b0 + sign * static_cast<double>(n) / std::pow(n + 1.0, params.q);
    case AuxForm::summed: {
        double sum = 0.0;
        for (int j = 1; j <= n; ++j) {
            sum += 1.0 / std::pow(j + 1.0, params.q);
        }
        return params.s_b0 + sign * sum;
    }
    case AuxForm::off:
        return params.s_b0;
    }
    return params.s_b0;
}

std::vector<double> aux_series(const AuxSeriesParams& params, std::size_t length) {
    std::vector<double> terms(length);
    for (std::size_t i = 0; i < length; ++i) {
        terms[i] = aux_series_term(params, static_cast<int>(i));
    }
    return terms;
}

double accelerate_with_aux(const AccelSpec& spec, std::span<const double> omega) {
    if (!spec.aux) {
        throw InvalidArgument("accelerate_with_aux requires auxiliary series parameters");
    }
    const std::vector<double> aux = aux_series(*spec.aux, omega.size());
    std::vector<double> coupled(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) {
        coupled[i] = spec.rho * omega[i] + aux[i];
    }
    const double coupled_limit = s_epsilon(spec, coupled);
    const double aux_limit = s_epsilon(spec, aux);
    return (coupled_limit - aux_limit) / spec.rho;
}

StateVector vector_accelerate(const AccelSpec& spec, std::span<const StateVector> sequence) {
    if (sequence.empty()) {
        throw InsufficientTermsError("vector extrapolation of an empty sequence",
                                     terms_needed(spec.k, spec.n));
    }
    const auto d = sequence.front().size();
    for (const auto& v : sequence) {
        if (v.size() != d) {
            throw DimensionError("vector sequence terms differ in dimension");
        }
    }
    StateVector result(d);
    std::vector<double> component(sequence.size());
    for (Eigen::Index c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < sequence.size(); ++i) {
            component[i] = sequence[i][c];
        }
        result[c] = spec.aux ? accelerate_with_aux(spec, component) : s_epsilon(spec, component);
    }
    return result;
}

} // namespace pita
