#include "pita/experiment.hpp"

#include "pita/errors.hpp"
#include "pita/propagators.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace pita {

namespace fs = std::filesystem;

std::string format_real(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ec == std::errc{} ? ptr : buf.data());
}

std::string format_sig(double value, int digits) {
    std::array<char, 48> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                         std::chars_format::general, digits);
    return std::string(buf.data(), ec == std::errc{} ? ptr : buf.data());
}

namespace {

fs::path prepare_out(const ExperimentConfig& cfg) {
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

std::string state_header(Eigen::Index dim) {
    std::string header = "t";
    for (Eigen::Index i = 1; i <= dim; ++i) {
        header += ",x" + std::to_string(i);
    }
    return header + "\n";
}

void append_state_row(std::string& out, double t, const StateVector& y) {
    out += format_real(t);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        out += ',';
        out += format_real(y[i]);
    }
    out += '\n';
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = state_header(traj.states.empty() ? 0 : traj.states.front().size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        append_state_row(out, traj.times[i], traj.states[i]);
    }
    return out;
}

StateVector limit_state(const ExperimentConfig& cfg, double t_prev, const StateVector& prev, double t) {
    if (cfg.reference == ReferenceKind::exact) {
        return exact_solution(cfg.system, t - cfg.grid.t0);
    }
    return bootstrap_reference(cfg.system, t_prev, prev, t, cfg.h_tiny);
}

std::string calibration_csv(const ParerealRun& run) {
    std::string out = "j,q_opt,objective,q_initial,objective_initial,evaluations\n";
    for (const auto& c : run.calibrations) {
        out += std::to_string(c.slice) + ',' + format_real(c.result.q_opt) + ',' +
               format_real(c.result.objective_at_opt) + ',' + format_real(c.result.q_initial) + ',' +
               format_real(c.result.objective_at_initial) + ',' +
               std::to_string(c.result.evaluations) + '\n';
    }
    return out;
}

} // namespace

Trajectory exact_trajectory(const ExperimentConfig& cfg) {
    const long steps = cfg.coarse_instants();
    Trajectory traj;
    traj.times.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    for (long k = 0; k <= steps; ++k) {
        const double elapsed = k == steps ? cfg.grid.tf - cfg.grid.t0 : static_cast<double>(k) * cfg.h0;
        traj.times.push_back(cfg.grid.t0 + elapsed);
        traj.states.push_back(exact_solution(cfg.system, elapsed));
    }
    return traj;
}

ParerealRun run_parareal_pipeline(const ExperimentConfig& cfg) {
    if (cfg.mode == Mode::euler_study) {
        throw ConfigError("key 'mode': parareal commands need parareal-semi or parareal-classic");
    }
    ParerealRun run;
    run.result = run_parareal(cfg.system, cfg.parareal_config());
    const int slices = run.result.slices();
    const auto& t = run.result.boundaries;

    run.omega_limit.reserve(static_cast<std::size_t>(slices));
    run.exact.reserve(static_cast<std::size_t>(slices));
    StateVector prev = cfg.system.y0;
    for (int j = 1; j <= slices; ++j) {
        // The bootstrap restarts at each boundary; with whole step counts per
        // slice this is the same arithmetic as one continuous run.
        prev = limit_state(cfg, t[j - 1], prev, t[j]);
        run.omega_limit.push_back(prev);
        run.exact.push_back(exact_solution(cfg.system, t[j] - cfg.grid.t0));
    }

    std::optional<SpacingBounds> spacing;
    if (cfg.mode == Mode::parareal_semi) {
        spacing = SpacingBounds{cfg.schedule.delta1, cfg.schedule.delta2};
    }

    const int interval = cfg.refresh_interval == 0 ? slices : cfg.refresh_interval;
    run.slice_specs.assign(static_cast<std::size_t>(slices), cfg.accel);
    for (int at : refresh_schedule(interval, slices)) {
        const auto idx = static_cast<std::size_t>(at - 1);
        SliceCalibration cal;
        cal.slice = at;
        cal.result = anneal_q_multi(run.result.omega_per_slice[idx], run.omega_limit[idx], cfg.accel.rho,
                                    cfg.anneal, cfg.chains, cfg.threads, cfg.accel, spacing);
        const AccelSpec spec = propagate_calibration(cal.result, cfg.accel);
        for (int j = at; j < at + interval && j <= slices; ++j) {
            run.slice_specs[static_cast<std::size_t>(j - 1)] = spec;
        }
        run.calibrations.push_back(std::move(cal));
    }

    run.result.final_solution = extrapolated_solution(run.result, run.slice_specs);

    for (int j = 1; j <= slices; ++j) {
        const auto idx = static_cast<std::size_t>(j - 1);
        ErrorReportRow row;
        row.j = j;
        row.q_opt = run.slice_specs[idx].aux ? run.slice_specs[idx].aux->q : 0.0;
        row.err_vs_omega_lim = (run.result.final_solution[idx] - run.omega_limit[idx]).norm();
        row.err_vs_exact = (run.result.final_solution[idx] - run.exact[idx]).norm();
        run.rows.push_back(row);
    }
    return run;
}

std::string render_report(const ExperimentConfig& cfg, const ParerealRun& run) {
    const double scale = std::pow(10.0, cfg.report_scale);
    std::ostringstream out;
    out << "# mode " << to_string(cfg.mode) << ", slices " << cfg.grid.slices << ", K "
        << cfg.iterations << ", h0 " << format_real(cfg.h0) << "\n";
    if (cfg.mode == Mode::parareal_semi) {
        out << "# delta_base " << format_real(cfg.schedule.delta_base) << ", delta_step "
            << format_real(cfg.schedule.delta_step) << "\n";
    } else {
        out << "# fine_step " << format_real(cfg.fine_step) << ", coarse "
            << to_string(cfg.classic_coarse) << "\n";
    }
    out << "# extrapolation k " << cfg.accel.k << ", n " << cfg.accel.n << ", rho "
        << format_real(cfg.accel.rho) << ", aux "
        << to_string(cfg.accel.aux ? cfg.accel.aux->form : AuxForm::off) << ", seed "
        << cfg.anneal.seed << "\n";
    out << "# errors x 10^" << cfg.report_scale << "\n";
    out << "j  q_opt  err_vs_omega_lim  err_vs_exact\n";
    for (const auto& row : run.rows) {
        out << row.j << "  " << format_sig(row.q_opt, 4) << "  "
            << format_sig(row.err_vs_omega_lim * scale, 5) << "  "
            << format_sig(row.err_vs_exact * scale, 5) << "\n";
    }
    return out.str();
}

Trajectory cmd_exact(const ExperimentConfig& cfg) {
    Trajectory traj = exact_trajectory(cfg);
    const fs::path dir = prepare_out(cfg);
    write_file(dir / "exact.csv", trajectory_csv(traj));
    return traj;
}

EulerStudy cmd_euler_study(const ExperimentConfig& cfg) {
    if (cfg.mode != Mode::euler_study) {
        throw ConfigError("key 'mode': euler-study needs mode = euler-study (try --set mode=euler-study)");
    }
    const double span = cfg.grid.tf - cfg.grid.t0;
    EulerStudy study = run_euler_study(cfg.system, cfg.subdivisions(), span, cfg.threads);
    for (auto& psi : study.psi) {
        for (double& t : psi.times) {
            t += cfg.grid.t0;
        }
    }
    for (auto& omega : study.omega) {
        omega.anchor_time += cfg.grid.t0;
    }

    const fs::path dir = prepare_out(cfg);
    for (std::size_t i = 0; i < study.psi.size(); ++i) {
        write_file(dir / ("psi_" + std::to_string(cfg.ladder[i]) + ".csv"), trajectory_csv(study.psi[i]));
    }

    std::string err = "k0,delta,err\n";
    std::vector<StateVector> exact;
    exact.reserve(study.omega.size());
    for (std::size_t k = 0; k < study.omega.size(); ++k) {
        exact.push_back(exact_solution(cfg.system, static_cast<double>(k + 1) * cfg.h0));
        const auto curve = omega_error_curve(study.omega[k], exact.back());
        for (std::size_t i = 0; i < curve.size(); ++i) {
            err += std::to_string(k + 1) + ',' + std::to_string(cfg.ladder[i]) + ',' +
                   format_real(curve[i]) + '\n';
        }
    }
    write_file(dir / "omega_err.csv", err);

    AccelSpec plain = cfg.accel;
    plain.aux.reset();
    if (cfg.ladder.size() >= terms_needed(plain.k, plain.n)) {
        std::string acc = "k0,last_term_err,accel_err\n";
        for (std::size_t k = 0; k < study.omega.size(); ++k) {
            const auto& terms = study.omega[k].terms;
            const StateVector value = vector_accelerate(plain, terms);
            acc += std::to_string(k + 1) + ',' + format_real((terms.back() - exact[k]).norm()) + ',' +
                   format_real((value - exact[k]).norm()) + '\n';
        }
        write_file(dir / "omega_accel.csv", acc);
    }
    return study;
}

ParerealRun cmd_parareal(const ExperimentConfig& cfg) {
    ParerealRun run = run_parareal_pipeline(cfg);
    const fs::path dir = prepare_out(cfg);

    std::string err = "j,k,err\n";
    for (int j = 1; j <= run.result.slices(); ++j) {
        const auto& exact = run.exact[static_cast<std::size_t>(j - 1)];
        for (int k = 2; k <= run.result.iterations(); ++k) {
            const auto& u = run.result.iterates[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            err += std::to_string(j) + ',' + std::to_string(k) + ',' + format_real((u - exact).norm()) + '\n';
        }
    }
    write_file(dir / "omega_err_para.csv", err);

    std::string solution = state_header(cfg.system.dimension());
    for (int j = 1; j <= run.result.slices(); ++j) {
        append_state_row(solution, run.result.boundaries[static_cast<std::size_t>(j)],
                         run.result.final_solution[static_cast<std::size_t>(j - 1)]);
    }
    write_file(dir / "solution.csv", solution);
    write_file(dir / "calibration.csv", calibration_csv(run));
    write_file(dir / "report.txt", render_report(cfg, run));
    return run;
}

ParerealRun cmd_optimize_q(const ExperimentConfig& cfg) {
    ParerealRun run = run_parareal_pipeline(cfg);
    const fs::path dir = prepare_out(cfg);
    write_file(dir / "calibration.csv", calibration_csv(run));
    return run;
}

} // namespace pita
