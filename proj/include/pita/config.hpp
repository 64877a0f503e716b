#pragma once

#include "pita/accel.hpp"
#include "pita/model.hpp"
#include "pita/optimize.hpp"
#include "pita/parareal.hpp"
#include "pita/propagators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pita {

enum class Mode {
    euler_study,
    parareal_semi,
    parareal_classic,
};

enum class ReferenceKind {
    bootstrap,  // fine explicit Euler run
    exact,      // matrix exponential
};

/// Everything one experiment needs. Built by parse_config, which enforces the
/// invariants of every module involved.
struct ExperimentConfig {
    LtiSystem system;
    TimeGrid grid;
    Mode mode = Mode::parareal_semi;
    /// Reference / coarse step. Defaults to one step per slice.
    double h0 = 0.0;

    std::vector<int> ladder{1, 2, 4, 8, 16, 32, 64, 128, 256, 512};

    int iterations = 8;
    DeltaSchedule schedule;
    double fine_step = 1e-3;
    PropagatorKind classic_coarse = PropagatorKind::implicit_euler;

    AccelSpec accel = default_calibration_spec();
    AnnealConfig anneal;
    int chains = 1;

    double h_tiny = 1e-5;
    /// Recalibration interval in slices; 0 means once, at slice 1.
    int refresh_interval = 0;
    ReferenceKind reference = ReferenceKind::bootstrap;

    /// Reported errors are multiplied by 10^report_scale.
    int report_scale = 4;

    std::string out_dir = "out";
    unsigned threads = 0;

    [[nodiscard]] ParerealConfig parareal_config() const;
    [[nodiscard]] SubdivisionSet subdivisions() const;
    [[nodiscard]] long coarse_instants() const;
};

/// Command-line sources layered over the config file: preset, then file,
/// then --set entries, then the dedicated flags.
struct ConfigSources {
    std::optional<std::string> preset;
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;  // "key=value"
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

/// Throws ConfigError naming the key (and file line) at fault, or
/// ScheduleError for a delta schedule outside its band.
ExperimentConfig parse_config(const ConfigSources& sources);

/// Parses flat `key = value` text on its own (no preset, no overrides).
ExperimentConfig parse_config_text(std::string_view text, std::string_view origin = "<text>");

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Raw text of a preset. Throws ConfigError for unknown names.
std::string preset_text(std::string_view name);

/// One line per key with its default, for --help.
std::string config_reference();

std::string_view to_string(Mode mode) noexcept;

} // namespace pita
