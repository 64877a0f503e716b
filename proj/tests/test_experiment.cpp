#include "pita/config.hpp"
#include "pita/errors.hpp"
#include "pita/experiment.hpp"
#include "pita/propagators.hpp"
#include "support.hpp"

#include "catch_amalgamated.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace pita;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& path, std::string* header = nullptr) {
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    if (header != nullptr) {
        *header = line;
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            double v = 0.0;
            std::from_chars(cell.data(), cell.data() + cell.size(), v);
            row.push_back(v);
        }
        rows.push_back(row);
    }
    return rows;
}

ExperimentConfig preset(const std::string& name, const fs::path& out, std::vector<std::string> sets = {}) {
    ConfigSources src;
    src.preset = name;
    src.out_dir = out.string();
    src.overrides = std::move(sets);
    return parse_config(src);
}

} // namespace

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1.923076923076923}) {
        const std::string s = format_real(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
        CHECK(s.find(',') == std::string::npos);
    }
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_sig(4.87704, 4) == "4.877");
}

TEST_CASE("exact command") {
    const auto dir = test::scratch_dir("exact");
    const Trajectory traj = cmd_exact(preset("paper-sigma", dir, {"grid.Tf=20", "grid.N=200"}));
    std::string header;
    const auto rows = read_csv(dir / "exact.csv", &header);
    CHECK(header == "t,x1,x2");
    REQUIRE(rows.size() == 201);
    CHECK(slurp(dir / "exact.csv").find("\n0,0,1\n") != std::string::npos);
    CHECK(rows.back()[0] == 20.0);
    CHECK(rows.back()[1] == Catch::Approx(1.923077).margin(1e-6));
    CHECK(rows.back()[2] == Catch::Approx(0.384615).margin(1e-6));
    CHECK(traj.size() == 201);
}

TEST_CASE("euler study command") {
    const auto dir = test::scratch_dir("euler");
    ExperimentConfig cfg = preset("paper-sigma-euler", dir, {"grid.Tf=0.9", "grid.N=9"});
    cmd_euler_study(cfg);
    for (int delta : cfg.ladder) {
        CHECK(fs::exists(dir / ("psi_" + std::to_string(delta) + ".csv")));
    }
    const auto psi1 = read_csv(dir / "psi_1.csv");
    const Trajectory coarse = explicit_euler_propagate(cfg.system, cfg.system.y0, 0.0, 0.9, 0.1);
    REQUIRE(psi1.size() == coarse.size());
    for (std::size_t i = 0; i < psi1.size(); ++i) {
        CHECK(psi1[i][1] == coarse.states[i][0]);
        CHECK(psi1[i][2] == coarse.states[i][1]);
    }

    std::string header;
    const auto err = read_csv(dir / "omega_err.csv", &header);
    CHECK(header == "k0,delta,err");
    REQUIRE(err.size() == 9 * cfg.ladder.size());
    double at200 = 0.0;
    double at400 = 0.0;
    for (std::size_t i = 1; i < err.size(); ++i) {
        if (err[i][0] == err[i - 1][0] && err[i][1] > 2.0) {
            CHECK(err[i][2] < err[i - 1][2]);
        }
    }
    const auto ladder2 = preset("paper-sigma-euler", dir / "b", {"grid.Tf=0.9", "grid.N=9", "euler.deltas=200 400"});
    cmd_euler_study(ladder2);
    for (const auto& row : read_csv(dir / "b" / "omega_err.csv")) {
        if (row[0] == 1.0 && row[1] == 200.0) {
            at200 = row[2];
        }
        if (row[0] == 1.0 && row[1] == 400.0) {
            at400 = row[2];
        }
    }
    CHECK(at400 / at200 == Catch::Approx(0.5).epsilon(0.25));
    CHECK(fs::exists(dir / "omega_accel.csv"));

    const auto one = preset("paper-sigma-euler", dir / "c", {"euler.deltas=1"});
    cmd_euler_study(one);
    CHECK(read_csv(dir / "c" / "psi_1.csv").size() == 51);
    CHECK_FALSE(fs::exists(dir / "c" / "omega_accel.csv"));

    CHECK_THROWS_AS(cmd_euler_study(preset("paper-sigma", dir / "d")), ConfigError);
    CHECK_THROWS_AS(cmd_parareal(preset("paper-sigma-euler", dir / "e")), ConfigError);
}

TEST_CASE("parareal command writes its data set") {
    const auto dir = test::scratch_dir("para");
    const ExperimentConfig cfg = preset("paper-sigma", dir, {"anneal.steps=300"});
    const ParerealRun run = cmd_parareal(cfg);

    std::string header;
    const auto err = read_csv(dir / "omega_err_para.csv", &header);
    CHECK(header == "j,k,err");
    CHECK(err.size() == 9 * 7);

    const auto sol = read_csv(dir / "solution.csv", &header);
    CHECK(header == "t,x1,x2");
    REQUIRE(sol.size() == 9);
    CHECK(sol.back()[0] == 0.9);

    const std::string report = slurp(dir / "report.txt");
    CHECK(report.find("j  q_opt  err_vs_omega_lim  err_vs_exact") != std::string::npos);
    CHECK(report.find("x 10^4") != std::string::npos);
    REQUIRE(run.rows.size() == 9);
    for (const auto& row : run.rows) {
        CHECK(row.q_opt == run.calibrations.front().result.q_opt);
        CHECK(row.err_vs_exact > 0.0);
    }
    REQUIRE(run.calibrations.size() == 1);
    CHECK(run.calibrations.front().slice == 1);

    // The final iterate improves on the first Omega term on every slice.
    for (int j = 1; j <= 9; ++j) {
        const StateVector exact = exact_solution(cfg.system, run.result.boundaries[j]);
        CHECK((run.result.iterates[8][j] - exact).norm() < (run.result.iterates[2][j] - exact).norm());
    }
}

TEST_CASE("classic parareal with G equal to F reproduces the fine solution") {
    const auto dir = test::scratch_dir("classic");
    const ExperimentConfig cfg =
        preset("paper-sigma-classic", dir,
               {"classic.coarse=explicit", "h0=0.01", "classic.fine_step=0.01", "anneal.steps=50"});
    const ParerealRun run = cmd_parareal(cfg);
    const auto fine = sequential_fine_solution(cfg.system, cfg.grid, 0.01);
    const auto sol = read_csv(dir / "solution.csv");
    REQUIRE(sol.size() == 9);
    for (int j = 1; j <= 9; ++j) {
        CHECK(sol[j - 1][1] == Catch::Approx(fine[j][0]).epsilon(1e-13));
        CHECK(sol[j - 1][2] == Catch::Approx(fine[j][1]).epsilon(1e-13));
    }
    CHECK(run.rows.size() == 9);
}

TEST_CASE("refresh recalibrates on schedule") {
    const auto dir = test::scratch_dir("refresh");
    const ParerealRun run = cmd_optimize_q(preset("paper-sigma", dir, {"calib.refresh=3", "anneal.steps=100"}));
    REQUIRE(run.calibrations.size() == 3);
    CHECK(run.calibrations[0].slice == 1);
    CHECK(run.calibrations[1].slice == 4);
    CHECK(run.calibrations[2].slice == 7);
    CHECK(run.slice_specs[4].aux->q == run.calibrations[1].result.q_opt);
    CHECK(read_csv(dir / "calibration.csv").size() == 3);
    CHECK_FALSE(fs::exists(dir / "report.txt"));
}

TEST_CASE("reports are reproducible") {
    const auto a = test::scratch_dir("det_a");
    const auto b = test::scratch_dir("det_b");
    cmd_parareal(preset("paper-sigma", a, {"anneal.steps=200", "threads=1"}));
    cmd_parareal(preset("paper-sigma", b, {"anneal.steps=200", "threads=3"}));
    for (const char* name : {"report.txt", "solution.csv", "omega_err_para.csv", "calibration.csv"}) {
        CHECK(slurp(a / name) == slurp(b / name));
    }
}

TEST_CASE("unwritable output is an I/O error") {
    const auto dir = test::scratch_dir("io");
    {
        std::ofstream blocker(dir / "file");
        blocker << "x";
    }
    CHECK_THROWS_AS(cmd_exact(preset("paper-sigma", dir / "file" / "sub")), IoError);
}
