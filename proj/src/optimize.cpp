#include "pita/optimize.hpp"

#include "pita/errors.hpp"
#include "pita/parallel.hpp"
#include "pita/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace pita {

namespace {

double reflect(double x, double lo, double hi) {
    const double width = hi - lo;
    if (width <= 0.0) {
        return lo;
    }
    // Fold x back into [lo, hi] as if the walls were mirrors.
    double offset = std::fmod(x - lo, 2.0 * width);
    if (offset < 0.0) {
        offset += 2.0 * width;
    }
    return offset <= width ? lo + offset : hi - (offset - width);
}

// A candidate becomes the new best only if it beats it by more than rounding
// noise; flat objectives then keep their starting point.
bool improves(double candidate, double best) {
    return candidate < best && !(best - candidate <= 1e-9 * std::abs(best));
}

} // namespace

void validate_anneal(const AnnealConfig& cfg) {
    if (!(cfg.q_min > 0.0) || !(cfg.q_min < cfg.q_max)) {
        throw InvalidArgument("annealing bounds must satisfy 0 < q_min < q_max");
    }
    if (cfg.q_initial != 0.0 && !(cfg.q_initial >= cfg.q_min && cfg.q_initial <= cfg.q_max)) {
        throw InvalidArgument("initial q must lie inside [q_min, q_max]");
    }
    if (!(cfg.cooling > 0.0 && cfg.cooling < 1.0)) {
        throw InvalidArgument("cooling factor must lie in (0, 1)");
    }
    if (cfg.steps < 1) {
        throw InvalidArgument("annealing needs at least one step");
    }
    if (!(cfg.proposal_scale > 0.0)) {
        throw InvalidArgument("proposal scale must be positive");
    }
    if (cfg.initial_temp < 0.0) {
        throw InvalidArgument("initial temperature must be non-negative (0 = automatic)");
    }
}

void check_label_spacing(const OmegaSeries& omega, SpacingBounds bounds) {
    for (std::size_t i = 1; i < omega.labels.size(); ++i) {
        const double spacing = std::abs(omega.labels[i] - omega.labels[i - 1]);
        if (!(bounds.delta1 < spacing && spacing < bounds.delta2)) {
            throw ScheduleError("Omega label spacing " + std::to_string(spacing) +
                                " leaves the delta-distance band (" +
                                std::to_string(bounds.delta1) + ", " +
                                std::to_string(bounds.delta2) + ")");
        }
    }
}

StateVector bootstrap_reference(const LtiSystem& sys, double t_start, const StateVector& y_start,
                                double t_end, double h_tiny) {
    const double radius = stability_radius(sys, h_tiny);
    if (radius >= 1.0) {
        throw StabilityError("bootstrap step " + std::to_string(h_tiny) +
                             " is outside the explicit stability region (radius " +
                             std::to_string(radius) + ")");
    }
    return explicit_euler_endpoint(sys, y_start, t_start, t_end, h_tiny);
}

StateVector bootstrap_reference(const LtiSystem& sys, double t1, double h_tiny) {
    return bootstrap_reference(sys, 0.0, sys.y0, t1, h_tiny);
}

AccelSpec default_calibration_spec() {
    AccelSpec spec;
    spec.k = 4;
    spec.n = 2;
    spec.aux = AuxSeriesParams{};
    return spec;
}

double objective(double q, const OmegaSeries& omega, const StateVector& reference, double rho,
                 const AccelSpec& base_spec) {
    AccelSpec spec = base_spec;
    spec.rho = rho;
    AuxSeriesParams aux = spec.aux.value_or(AuxSeriesParams{});
    aux.q = q;
    spec.aux = aux;
    const StateVector value = vector_accelerate(spec, omega.terms);
    if (value.size() != reference.size()) {
        throw DimensionError("reference and Omega terms differ in dimension");
    }
    const double distance = (value - reference).norm();
    return std::isfinite(distance) ? distance : std::numeric_limits<double>::infinity();
}

CalibrationResult anneal_q(const OmegaSeries& omega, const StateVector& reference, double rho,
                           const AnnealConfig& cfg, const AccelSpec& base_spec,
                           std::optional<SpacingBounds> spacing) {
    validate_anneal(cfg);
    validate_omega(omega);
    if (spacing) {
        check_label_spacing(omega, *spacing);
    }

    const double lo = std::log10(cfg.q_min);
    const double hi = std::log10(cfg.q_max);
    double current_log = cfg.q_initial > 0.0 ? std::log10(cfg.q_initial) : 0.5 * (lo + hi);
    double current_q = std::clamp(std::pow(10.0, current_log), cfg.q_min, cfg.q_max);
    double current = objective(current_q, omega, reference, rho, base_spec);

    CalibrationResult result;
    result.reference_limit = reference;
    result.q_initial = current_q;
    result.objective_at_initial = current;
    result.q_opt = current_q;
    result.objective_at_opt = current;
    result.evaluations = 1;

    double temperature = cfg.initial_temp > 0.0 ? cfg.initial_temp : current;
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        temperature = 1.0;
    }

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> proposal(0.0, cfg.proposal_scale);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    for (int step = 0; step < cfg.steps; ++step) {
        const double candidate_log = reflect(current_log + proposal(rng), lo, hi);
        const double candidate_q = std::clamp(std::pow(10.0, candidate_log), cfg.q_min, cfg.q_max);
        const double candidate = objective(candidate_q, omega, reference, rho, base_spec);
        ++result.evaluations;

        const double u = uniform(rng);
        const bool accept = candidate <= current ||
                            (std::isfinite(candidate) && u < std::exp(-(candidate - current) / temperature));
        if (accept) {
            current_log = candidate_log;
            current_q = candidate_q;
            current = candidate;
        }
        if (improves(candidate, result.objective_at_opt)) {
            result.q_opt = candidate_q;
            result.objective_at_opt = candidate;
        }
        temperature *= cfg.cooling;
    }
    return result;
}

CalibrationResult anneal_q_multi(const OmegaSeries& omega, const StateVector& reference, double rho,
                                 const AnnealConfig& cfg, int chains, unsigned threads,
                                 const AccelSpec& base_spec, std::optional<SpacingBounds> spacing) {
    if (chains < 1) {
        throw InvalidArgument("need at least one annealing chain");
    }
    std::vector<CalibrationResult> results(static_cast<std::size_t>(chains));
    parallel_for(results.size(), threads, [&](std::size_t i) {
        AnnealConfig chain = cfg;
        chain.seed = cfg.seed + i;
        results[i] = anneal_q(omega, reference, rho, chain, base_spec, spacing);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].objective_at_opt < results[best].objective_at_opt) {
            best = i;
        }
    }
    CalibrationResult out = results[best];
    out.evaluations = 0;
    for (const auto& r : results) {
        out.evaluations += r.evaluations;
    }
    return out;
}

AccelSpec propagate_calibration(const CalibrationResult& result, AccelSpec spec) {
    AuxSeriesParams aux = spec.aux.value_or(AuxSeriesParams{});
    aux.q = result.q_opt;
    spec.aux = aux;
    return spec;
}

std::vector<int> refresh_schedule(int interval, int slices) {
    if (interval < 1) {
        throw InvalidArgument("refresh interval must be at least one slice");
    }
    std::vector<int> at;
    for (int j = 1; j <= slices; j += interval) {
        at.push_back(j);
    }
    return at;
}

} // namespace pita
