#pragma once

#include "pita/accel.hpp"
#include "pita/model.hpp"
#include "pita/omega_study.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pita {

/// Simulated annealing over log10(q).
struct AnnealConfig {
    double q_min = 1e-12;
    double q_max = 10.0;
    /// Starting point; 0 selects the geometric mean of the bounds.
    double q_initial = 0.0;
    /// 0 selects the objective value at the starting point.
    double initial_temp = 0.0;
    double cooling = 0.95;
    int steps = 2000;
    /// Standard deviation of the proposal, in log10 units.
    double proposal_scale = 0.5;
    std::uint64_t seed = 42;
};

void validate_anneal(const AnnealConfig& cfg);

struct CalibrationResult {
    double q_opt = 0.0;
    double objective_at_opt = 0.0;
    StateVector reference_limit;
    int evaluations = 0;
    double q_initial = 0.0;
    double objective_at_initial = 0.0;
};

/// Open band (delta1, delta2) that consecutive Omega labels must respect.
struct SpacingBounds {
    double delta1 = 0.5;
    double delta2 = 1.5;
};

/// Throws ScheduleError if some |label_{i+1} - label_i| leaves the band.
void check_label_spacing(const OmegaSeries& omega, SpacingBounds bounds);

/// Explicit Euler from (t_start, y_start) to t_end with a very small step:
/// the stand-in for the limit of an Omega series.
///
/// Throws StabilityError if the spectral radius of I + h_tiny A is >= 1.
StateVector bootstrap_reference(const LtiSystem& sys, double t_start, const StateVector& y_start,
                                double t_end, double h_tiny);

/// Same, from the system's initial state at t = 0.
StateVector bootstrap_reference(const LtiSystem& sys, double t1, double h_tiny);

/// Euclidean distance between the aux-coupled extrapolation of `omega` (with
/// damping q and scaling rho, other settings from base_spec) and `reference`.
/// A non-finite extrapolation scores +infinity.
double objective(double q, const OmegaSeries& omega, const StateVector& reference, double rho,
                 const AccelSpec& base_spec);

/// Default extrapolation used for calibration: k = 4, n = 2, literal aux series.
AccelSpec default_calibration_spec();

/// Metropolis chain on log10(q) with geometric cooling, keeping the best point.
/// Deterministic for a given seed.
CalibrationResult anneal_q(const OmegaSeries& omega, const StateVector& reference, double rho,
                           const AnnealConfig& cfg,
                           const AccelSpec& base_spec = default_calibration_spec(),
                           std::optional<SpacingBounds> spacing = std::nullopt);

/// Runs `chains` independent chains (seeds cfg.seed, cfg.seed + 1, ...) and
/// keeps the best; ties go to the lower seed.
CalibrationResult anneal_q_multi(const OmegaSeries& omega, const StateVector& reference, double rho,
                                 const AnnealConfig& cfg, int chains, unsigned threads,
                                 const AccelSpec& base_spec = default_calibration_spec(),
                                 std::optional<SpacingBounds> spacing = std::nullopt);

/// `spec` with q := q_opt. Creates the aux series (S_b0 = 0, literal) if absent.
AccelSpec propagate_calibration(const CalibrationResult& result, AccelSpec spec);

/// Slices (1-based) at which calibration is re-run: 1, 1 + interval, ...
std::vector<int> refresh_schedule(int interval, int slices);

} // namespace pita
