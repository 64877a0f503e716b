#pragma once

#include "pita/config.hpp"
#include "pita/omega_study.hpp"
#include "pita/optimize.hpp"
#include "pita/parareal.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pita {

/// Shortest decimal form that round-trips (17 significant digits at most).
std::string format_real(double value);

/// Fixed significant digits, for human-facing tables.
std::string format_sig(double value, int digits);

struct ErrorReportRow {
    int j = 0;
    double q_opt = 0.0;
    double err_vs_omega_lim = 0.0;
    double err_vs_exact = 0.0;
};

/// Calibration of one refresh slice.
struct SliceCalibration {
    int slice = 0;  // 1-based
    CalibrationResult result;
};

/// Everything produced by the parareal pipeline, before any file is written.
struct ParerealRun {
    ParerealResult result;
    std::vector<SliceCalibration> calibrations;
    std::vector<AccelSpec> slice_specs;     // slice_specs[j-1]
    std::vector<StateVector> omega_limit;   // bootstrap (or exact) limit at t_j
    std::vector<StateVector> exact;         // exact state at t_j
    std::vector<ErrorReportRow> rows;
};

/// Parareal sweep, per-slice q calibration and extrapolation. No I/O.
ParerealRun run_parareal_pipeline(const ExperimentConfig& cfg);

/// Exact states at the coarse instants t0 + k h0.
Trajectory exact_trajectory(const ExperimentConfig& cfg);

/// Text of report.txt.
std::string render_report(const ExperimentConfig& cfg, const ParerealRun& run);

// Commands. Each writes into cfg.out_dir (created if needed) and returns what
// it computed. I/O failures throw IoError.

Trajectory cmd_exact(const ExperimentConfig& cfg);

/// psi_<delta>.csv for every ladder entry, omega_err.csv, and omega_accel.csv
/// when the ladder is long enough for the configured extrapolation.
EulerStudy cmd_euler_study(const ExperimentConfig& cfg);

/// omega_err_para.csv, solution.csv, calibration.csv and report.txt.
ParerealRun cmd_parareal(const ExperimentConfig& cfg);

/// Calibration only: calibration.csv.
ParerealRun cmd_optimize_q(const ExperimentConfig& cfg);

} // namespace pita
