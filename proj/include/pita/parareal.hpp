#pragma once

#include "pita/accel.hpp"
#include "pita/model.hpp"
#include "pita/omega_study.hpp"
#include "pita/propagators.hpp"

#include <span>
#include <variant>
#include <vector>

namespace pita {

/// Constant-increment refinement schedule for the fine propagator:
/// delta_k = delta_base + (k - 1) * delta_step for correction pass k >= 1.
/// Consecutive factors must stay within the open band (delta1, delta2).
struct DeltaSchedule {
    double delta_base = 100.0;
    double delta_step = 1.0;
    double delta1 = 0.5;
    double delta2 = 1.5;

    /// delta_1 .. delta_K as requested (before rounding to whole step counts).
    [[nodiscard]] std::vector<double> nominal(int iterations) const;
};

/// Throws ScheduleError unless delta_base > 0, 0 < delta1 < delta2 and
/// delta1 < |delta_step| < delta2.
void validate_schedule(const DeltaSchedule& schedule);

/// Factors actually realized on a slice of length `slice_length` with coarse
/// step `coarse_step`: each fine step count round(delta_k * slice_length / coarse_step)
/// is an integer, and the realized delta is that count * coarse_step / slice_length.
std::vector<double> realized_deltas(std::span<const double> nominal, double slice_length,
                                    double coarse_step);

/// Classic Parareal: one coarse kind for both predictor terms, fixed fine step.
struct ClassicMode {
    double fine_step = 1e-3;
    PropagatorKind coarse = PropagatorKind::implicit_euler;
};

/// Implicit seed, explicit coarse and fine afterwards, fine step refined per pass.
struct SemiExplicitMode {
    DeltaSchedule schedule;
};

struct ParerealConfig {
    TimeGrid grid;
    /// Number of correction passes K (the seed sweep is pass 0).
    int iterations = 8;
    /// Coarse step h_g; 0 means one step per slice.
    double coarse_step = 0.0;
    std::variant<ClassicMode, SemiExplicitMode> mode = SemiExplicitMode{};
    /// Workers for the fine sweep; 0 means all available cores.
    unsigned threads = 1;
};

struct ParerealResult {
    std::vector<double> boundaries;                  // t_0 .. t_N
    std::vector<std::vector<StateVector>> iterates;  // iterates[k][j] = U_j^k, k = 0 .. K
    std::vector<double> fine_deltas;                 // realized delta_k for k = 1 .. K (index k-1)
    /// omega_per_slice[j-1] = (U_j^2, ..., U_j^K); labels are realized deltas in
    /// semi-explicit mode and iteration indices in classic mode.
    std::vector<OmegaSeries> omega_per_slice;
    std::vector<StateVector> final_solution;         // filled by the caller from extrapolated_solution

    [[nodiscard]] int iterations() const noexcept { return static_cast<int>(iterates.size()) - 1; }
    [[nodiscard]] int slices() const noexcept { return static_cast<int>(boundaries.size()) - 1; }
};

/// Throws InvalidArgument / ScheduleError on an inconsistent configuration.
void validate_config(const ParerealConfig& cfg);

/// Coarse propagator G over [t_j, t_j1] with step h_g.
StateVector coarse_G(PropagatorKind kind, const LtiSystem& sys, double t_j, double t_j1,
                     const StateVector& u, double h_g);

/// Fine propagator F: explicit Euler over [t_j, t_j1] with step h_fine.
StateVector fine_F(const LtiSystem& sys, double t_j, double t_j1, const StateVector& u,
                   double h_fine);

/// U_{j+1}^{k} = G(U_j^{k}) + F(U_j^{k-1}) - G(U_j^{k-1}) for k = 1 .. K,
/// seeded by a sequential coarse sweep.
ParerealResult classic_parareal(const LtiSystem& sys, const ParerealConfig& cfg);

/// Semi-explicit variant. Pass 1 subtracts the implicit coarse predictor used
/// by the seed sweep; later passes subtract the explicit one. The fine step of
/// pass k is h_g / delta_k.
///
/// Throws ScheduleError if the realized spacing of consecutive deltas leaves
/// (delta1, delta2).
ParerealResult semi_explicit_parareal(const LtiSystem& sys, const ParerealConfig& cfg);

/// Same sweep driven by an explicit list of factors delta_1 .. delta_K, with no
/// spacing constraint. Useful for studies with held-constant deltas.
ParerealResult semi_explicit_parareal(const LtiSystem& sys, const TimeGrid& grid,
                                      std::span<const double> deltas, double coarse_step = 0.0,
                                      unsigned threads = 1);

/// Dispatches on cfg.mode.
ParerealResult run_parareal(const LtiSystem& sys, const ParerealConfig& cfg);

/// Extrapolated limit of every slice's Omega series, j = 1 .. N.
///
/// Throws InsufficientTermsError naming the first slice with fewer than
/// n + k + 1 terms.
std::vector<StateVector> extrapolated_solution(const ParerealResult& result, const AccelSpec& spec);

/// Same with one spec per slice (per_slice[j-1] for slice j).
std::vector<StateVector> extrapolated_solution(const ParerealResult& result,
                                               std::span<const AccelSpec> per_slice);

/// Plain sequential explicit Euler at the slice boundaries with fine step h_fine,
/// restarted at each boundary. The reference Parareal converges to.
std::vector<StateVector> sequential_fine_solution(const LtiSystem& sys, const TimeGrid& grid,
                                                  double h_fine);

} // namespace pita
