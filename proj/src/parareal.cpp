#include "pita/parareal.hpp"

#include "pita/errors.hpp"
#include "pita/parallel.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace pita {

namespace {

double effective_coarse_step(const TimeGrid& grid, double coarse_step) {
    return coarse_step > 0.0 ? coarse_step : grid.slice_length();
}

std::string where(int k, int j) {
    return "pass " + std::to_string(k) + ", slice " + std::to_string(j + 1) + ": ";
}

/// Fixed-count Euler advance over one slice. Identical arithmetic to
/// explicit_euler_endpoint / implicit_euler_endpoint, so the results agree
/// bit for bit with coarse_G and fine_F.
class SliceStepper {
public:
    SliceStepper(const LtiSystem& sys, PropagatorKind kind, double h, long steps)
        : sys_(sys), forcing_(sys.forcing()), kind_(kind), h_(h), steps_(steps) {
        if (kind == PropagatorKind::implicit_euler) {
            implicit_.emplace(sys, h);
        }
    }

    [[nodiscard]] StateVector operator()(const StateVector& start) const {
        StateVector y = start;
        for (long i = 1; i <= steps_; ++i) {
            if (implicit_) {
                y = implicit_->step(y);
            } else {
                y += h_ * (sys_.A * y + forcing_);
            }
            if (!y.allFinite()) {
                throw NonFiniteError(std::string(to_string(kind_)) + " Euler overflowed at step " +
                                         std::to_string(i),
                                     i);
            }
        }
        return y;
    }

private:
    const LtiSystem& sys_;
    Vector forcing_;
    PropagatorKind kind_;
    double h_;
    long steps_;
    std::optional<ImplicitStepper> implicit_;
};

void require_state(const LtiSystem& sys) {
    if (sys.y0.size() != sys.dimension()) {
        throw DimensionError("initial state does not match the system dimension");
    }
}

std::vector<StateVector> seed_sweep(const SliceStepper& coarse, const LtiSystem& sys, int slices) {
    std::vector<StateVector> u(static_cast<std::size_t>(slices) + 1);
    u[0] = sys.y0;
    for (int j = 0; j < slices; ++j) {
        try {
            u[static_cast<std::size_t>(j) + 1] = coarse(u[static_cast<std::size_t>(j)]);
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(where(0, j) + e.what(), e.step());
        }
    }
    return u;
}

/// One correction pass: U_{j+1}^k = G(U_j^k) + F(U_j^{k-1}) - subtracted[j].
/// Writes G(U_j^k) into `predicted` for reuse by the next pass.
std::vector<StateVector> correction_pass(const LtiSystem& sys, const std::vector<StateVector>& previous,
                                         const SliceStepper& coarse, const SliceStepper& fine,
                                         const std::vector<StateVector>& subtracted,
                                         std::vector<StateVector>& predicted, int k,
                                         unsigned threads) {
    const std::size_t slices = previous.size() - 1;

    // Fine solves depend only on the previous pass: parallel map keyed by slice.
    std::vector<StateVector> fine_values(slices);
    parallel_for(slices, threads, [&](std::size_t j) {
        try {
            fine_values[j] = fine(previous[j]);
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(where(k, static_cast<int>(j)) + "fine propagator: " + e.what(),
                                 e.step());
        }
    });

    std::vector<StateVector> next(slices + 1);
    next[0] = sys.y0;
    predicted.assign(slices, StateVector());
    for (std::size_t j = 0; j < slices; ++j) {
        try {
            predicted[j] = coarse(next[j]);
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(where(k, static_cast<int>(j)) + "coarse propagator: " + e.what(),
                                 e.step());
        }
        next[j + 1] = predicted[j] + fine_values[j] - subtracted[j];
        if (!next[j + 1].allFinite()) {
            throw NonFiniteError(where(k, static_cast<int>(j)) + "non-finite corrected value");
        }
    }
    return next;
}

void collect_omega(ParerealResult& result, const std::vector<double>& labels) {
    const int slices = result.slices();
    const int passes = result.iterations();
    result.omega_per_slice.assign(static_cast<std::size_t>(slices), OmegaSeries{});
    for (int j = 1; j <= slices; ++j) {
        OmegaSeries& series = result.omega_per_slice[static_cast<std::size_t>(j) - 1];
        series.anchor_time = result.boundaries[static_cast<std::size_t>(j)];
        for (int k = 2; k <= passes; ++k) {
            series.terms.push_back(result.iterates[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]);
            series.labels.push_back(labels[static_cast<std::size_t>(k) - 1]);
        }
    }
}

} // namespace

std::vector<double> DeltaSchedule::nominal(int iterations) const {
    std::vector<double> deltas(static_cast<std::size_t>(std::max(iterations, 0)));
    for (int k = 1; k <= iterations; ++k) {
        deltas[static_cast<std::size_t>(k) - 1] = delta_base + (k - 1) * delta_step;
    }
    return deltas;
}

void validate_schedule(const DeltaSchedule& s) {
    if (!(s.delta_base > 0.0)) {
        throw ScheduleError("delta_base must be positive");
    }
    if (!(s.delta1 > 0.0) || !(s.delta1 < s.delta2)) {
        throw ScheduleError("delta-distance bounds must satisfy 0 < delta1 < delta2");
    }
    const double spacing = std::abs(s.delta_step);
    if (!(s.delta1 < spacing && spacing < s.delta2)) {
        throw ScheduleError("delta_step " + std::to_string(s.delta_step) +
                            " lies outside the delta-distance band (" + std::to_string(s.delta1) +
                            ", " + std::to_string(s.delta2) + ")");
    }
}

std::vector<double> realized_deltas(std::span<const double> nominal, double slice_length,
                                    double coarse_step) {
    std::vector<double> realized;
    realized.reserve(nominal.size());
    for (double delta : nominal) {
        if (!(delta > 0.0)) {
            throw ScheduleError("subdivision factors must be positive");
        }
        const double count = std::round(delta * slice_length / coarse_step);
        if (count < 1.0) {
            throw ScheduleError("delta " + std::to_string(delta) +
                                " yields no fine step on a slice");
        }
        realized.push_back(count * coarse_step / slice_length);
    }
    return realized;
}

void validate_config(const ParerealConfig& cfg) {
    validate_grid(cfg.grid);
    if (cfg.iterations < 2) {
        throw InvalidArgument("Parareal needs K >= 2 correction passes");
    }
    const double h_g = effective_coarse_step(cfg.grid, cfg.coarse_step);
    step_count(0.0, cfg.grid.slice_length(), h_g);
    if (const auto* classic = std::get_if<ClassicMode>(&cfg.mode)) {
        if (!(classic->fine_step > 0.0) || classic->fine_step > h_g) {
            throw InvalidArgument("classic mode requires 0 < h_f <= h_g");
        }
        step_count(0.0, cfg.grid.slice_length(), classic->fine_step);
    } else {
        const auto& semi = std::get<SemiExplicitMode>(cfg.mode);
        validate_schedule(semi.schedule);
        const auto realized = realized_deltas(semi.schedule.nominal(cfg.iterations),
                                              cfg.grid.slice_length(), h_g);
        for (std::size_t i = 1; i < realized.size(); ++i) {
            const double spacing = std::abs(realized[i] - realized[i - 1]);
            if (!(semi.schedule.delta1 < spacing && spacing < semi.schedule.delta2)) {
                throw ScheduleError("realized spacing |delta_" + std::to_string(i) + " - delta_" +
                                    std::to_string(i + 1) + "| = " + std::to_string(spacing) +
                                    " leaves (" + std::to_string(semi.schedule.delta1) + ", " +
                                    std::to_string(semi.schedule.delta2) +
                                    ") after rounding to whole fine steps");
            }
        }
    }
}

StateVector coarse_G(PropagatorKind kind, const LtiSystem& sys, double t_j, double t_j1,
                     const StateVector& u, double h_g) {
    return kind == PropagatorKind::implicit_euler ? implicit_euler_endpoint(sys, u, t_j, t_j1, h_g)
                                                  : explicit_euler_endpoint(sys, u, t_j, t_j1, h_g);
}

StateVector fine_F(const LtiSystem& sys, double t_j, double t_j1, const StateVector& u,
                   double h_fine) {
    return explicit_euler_endpoint(sys, u, t_j, t_j1, h_fine);
}

ParerealResult classic_parareal(const LtiSystem& sys, const ParerealConfig& cfg) {
    const auto* classic = std::get_if<ClassicMode>(&cfg.mode);
    if (classic == nullptr) {
        throw InvalidArgument("classic_parareal called with a semi-explicit configuration");
    }
    validate_config(cfg);
    require_state(sys);

    const double slice = cfg.grid.slice_length();
    const double h_g = effective_coarse_step(cfg.grid, cfg.coarse_step);
    const SliceStepper coarse(sys, classic->coarse, h_g, step_count(0.0, slice, h_g));
    const SliceStepper fine(sys, PropagatorKind::explicit_euler, classic->fine_step,
                            step_count(0.0, slice, classic->fine_step));

    ParerealResult result;
    result.boundaries = slice_boundaries(cfg.grid);
    result.iterates.push_back(seed_sweep(coarse, sys, cfg.grid.slices));
    // G(U_j^0) is the seed itself.
    std::vector<StateVector> predicted(result.iterates[0].begin() + 1, result.iterates[0].end());

    for (int k = 1; k <= cfg.iterations; ++k) {
        std::vector<StateVector> subtracted = std::move(predicted);
        result.iterates.push_back(correction_pass(sys, result.iterates.back(), coarse, fine,
                                                  subtracted, predicted, k, cfg.threads));
        result.fine_deltas.push_back(h_g / classic->fine_step);
    }

    std::vector<double> labels(static_cast<std::size_t>(cfg.iterations));
    for (int k = 1; k <= cfg.iterations; ++k) {
        labels[static_cast<std::size_t>(k) - 1] = static_cast<double>(k);
    }
    collect_omega(result, labels);
    return result;
}

ParerealResult semi_explicit_parareal(const LtiSystem& sys, const TimeGrid& grid,
                                      std::span<const double> deltas, double coarse_step,
                                      unsigned threads) {
    validate_grid(grid);
    require_state(sys);
    if (deltas.size() < 2) {
        throw InvalidArgument("Parareal needs K >= 2 correction passes");
    }
    const double slice = grid.slice_length();
    const double h_g = effective_coarse_step(grid, coarse_step);
    const long coarse_steps = step_count(0.0, slice, h_g);
    const SliceStepper implicit_coarse(sys, PropagatorKind::implicit_euler, h_g, coarse_steps);
    const SliceStepper explicit_coarse(sys, PropagatorKind::explicit_euler, h_g, coarse_steps);

    ParerealResult result;
    result.boundaries = slice_boundaries(grid);
    result.fine_deltas = realized_deltas(deltas, slice, h_g);
    result.iterates.push_back(seed_sweep(implicit_coarse, sys, grid.slices));
    // G_i(U_j^0) is the seed itself; pass 1 subtracts it.
    std::vector<StateVector> predicted(result.iterates[0].begin() + 1, result.iterates[0].end());

    const int passes = static_cast<int>(deltas.size());
    for (int k = 1; k <= passes; ++k) {
        const double delta = result.fine_deltas[static_cast<std::size_t>(k) - 1];
        const long fine_steps = std::lround(delta * slice / h_g);
        const SliceStepper fine(sys, PropagatorKind::explicit_euler, slice / static_cast<double>(fine_steps),
                                fine_steps);
        std::vector<StateVector> subtracted = std::move(predicted);
        result.iterates.push_back(correction_pass(sys, result.iterates.back(), explicit_coarse,
                                                  fine, subtracted, predicted, k, threads));
    }
    collect_omega(result, result.fine_deltas);
    return result;
}

ParerealResult semi_explicit_parareal(const LtiSystem& sys, const ParerealConfig& cfg) {
    const auto* semi = std::get_if<SemiExplicitMode>(&cfg.mode);
    if (semi == nullptr) {
        throw InvalidArgument("semi_explicit_parareal called with a classic configuration");
    }
    validate_config(cfg);
    const auto deltas = semi->schedule.nominal(cfg.iterations);
    return semi_explicit_parareal(sys, cfg.grid, deltas, cfg.coarse_step, cfg.threads);
}

ParerealResult run_parareal(const LtiSystem& sys, const ParerealConfig& cfg) {
    return std::holds_alternative<ClassicMode>(cfg.mode) ? classic_parareal(sys, cfg)
                                                         : semi_explicit_parareal(sys, cfg);
}

std::vector<StateVector> extrapolated_solution(const ParerealResult& result,
                                               std::span<const AccelSpec> per_slice) {
    const auto slices = result.omega_per_slice.size();
    if (per_slice.size() != slices) {
        throw InvalidArgument("need one extrapolation spec per slice");
    }
    for (std::size_t j = 0; j < slices; ++j) {
        const auto required = terms_needed(per_slice[j].k, per_slice[j].n);
        if (result.omega_per_slice[j].size() < required) {
            throw InsufficientTermsError(
                "slice " + std::to_string(j + 1) + " holds " +
                    std::to_string(result.omega_per_slice[j].size()) + " Omega terms, " +
                    std::to_string(required) + " needed (run K >= n + k + 2 passes)",
                required);
        }
    }
    std::vector<StateVector> solution(slices);
    for (std::size_t j = 0; j < slices; ++j) {
        solution[j] = vector_accelerate(per_slice[j], result.omega_per_slice[j].terms);
    }
    return solution;
}

std::vector<StateVector> extrapolated_solution(const ParerealResult& result, const AccelSpec& spec) {
    const std::vector<AccelSpec> specs(result.omega_per_slice.size(), spec);
    return extrapolated_solution(result, specs);
}

std::vector<StateVector> sequential_fine_solution(const LtiSystem& sys, const TimeGrid& grid,
                                                  double h_fine) {
    validate_grid(grid);
    const auto t = slice_boundaries(grid);
    std::vector<StateVector> u(t.size());
    u[0] = sys.y0;
    for (std::size_t j = 0; j + 1 < t.size(); ++j) {
        u[j + 1] = fine_F(sys, t[j], t[j + 1], u[j], h_fine);
    }
    return u;
}

} // namespace pita
