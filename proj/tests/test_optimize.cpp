#include "pita/errors.hpp"
#include "pita/optimize.hpp"
#include "pita/propagators.hpp"
#include "fixtures.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>
#include <vector>

using namespace pita;

namespace {

OmegaSeries constant_series(double value) {
    OmegaSeries omega;
    for (int i = 0; i < 7; ++i) {
        omega.terms.push_back(StateVector::Constant(2, value));
        omega.labels.push_back(100.0 + i);
    }
    return omega;
}

AnnealConfig planted_config(std::uint64_t seed) {
    AnnealConfig cfg;
    cfg.q_min = 1e-4;
    cfg.q_max = 10.0;
    cfg.steps = 2000;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("bootstrap reference") {
    const LtiSystem sys = damped_oscillator_system();
    const StateVector ref = bootstrap_reference(sys, 0.1, 1e-5);
    const double err = (ref - exact_solution(sys, 0.1)).norm();
    CHECK(err < 1e-4);
    CHECK(err == Catch::Approx(2.375e-5).epsilon(0.01));

    CHECK(bootstrap_reference(sys, 0.05, 0.05) == explicit_euler_step(sys, sys.y0, 0.05));
    CHECK_THROWS_AS(bootstrap_reference(sys, 0.1, 0.1), StabilityError);

    // Restarting at a boundary is the same arithmetic as one run.
    const StateVector mid = bootstrap_reference(sys, 0.1, 1e-4);
    CHECK(bootstrap_reference(sys, 0.1, mid, 0.2, 1e-4) == bootstrap_reference(sys, 0.2, 1e-4));
}

TEST_CASE("objective") {
    const OmegaSeries omega = test::planted_series();
    const AccelSpec base = default_calibration_spec();
    CHECK(objective(2.0, omega, test::planted_reference(), 1.0, base) == 0.0);

    AccelSpec spec = base;
    spec.aux->q = 0.3;
    const StateVector self = vector_accelerate(spec, omega.terms);
    CHECK(objective(0.3, omega, self, 1.0, base) == 0.0);

    const OmegaSeries flat = constant_series(1.25);
    const StateVector target = StateVector::Constant(2, 1.0);
    const double at_one = objective(1.0, flat, target, 1.0, base);
    CHECK(at_one == Catch::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-10));
    for (double q : {1e-6, 0.01, 0.5, 3.0, 9.0}) {
        CHECK(objective(q, flat, target, 1.0, base) == Catch::Approx(at_one).epsilon(1e-10));
    }

    CHECK_THROWS_AS(objective(1.0, flat, StateVector::Zero(3), 1.0, base), DimensionError);
}

TEST_CASE("objective over a q scan") {
    // Geometric tail toward 3. Small q makes the literal aux terms O(n) and the
    // coupling loses accuracy; from q = 1 upward it beats the raw last term.
    OmegaSeries omega;
    for (int i = 0; i < 7; ++i) {
        omega.terms.push_back(StateVector::Constant(1, 3.0 - 0.8 * std::pow(0.7, i)));
        omega.labels.push_back(i);
    }
    const StateVector limit = StateVector::Constant(1, 3.0);
    const double raw = (omega.terms.back() - limit).norm();
    for (int e = -16; e <= 4; ++e) {
        const double q = std::pow(10.0, e / 4.0);
        const double value = objective(q, omega, limit, 1.0, default_calibration_spec());
        CHECK(value >= 0.0);
        if (q >= 1.0) {
            CHECK(value < raw);
        }
    }
    CHECK(objective(10.0, omega, limit, 1.0, default_calibration_spec()) < 1e-5);
}

TEST_CASE("annealing recovers a planted optimum") {
    const OmegaSeries omega = test::planted_series();
    const StateVector ref = test::planted_reference();
    const CalibrationResult r = anneal_q(omega, ref, 1.0, planted_config(42));
    CHECK(std::abs(r.q_opt - 2.0) <= 0.2);
    CHECK(r.objective_at_opt < 1e-4);
    CHECK(r.evaluations == 2001);
    CHECK(r.q_opt >= 1e-4);
    CHECK(r.q_opt <= 10.0);
}

TEST_CASE("annealing is deterministic and never regresses") {
    const OmegaSeries omega = test::planted_series();
    const StateVector ref = test::planted_reference();
    const CalibrationResult a = anneal_q(omega, ref, 1.0, planted_config(7));
    const CalibrationResult b = anneal_q(omega, ref, 1.0, planted_config(7));
    CHECK(a.q_opt == b.q_opt);
    CHECK(a.objective_at_opt == b.objective_at_opt);
    CHECK(a.evaluations == b.evaluations);

    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        AnnealConfig cfg = planted_config(seed);
        cfg.steps = 200;
        cfg.q_min = 1e-12;
        const CalibrationResult r = anneal_q(omega, ref, 1.0, cfg);
        CHECK(r.objective_at_opt <= r.objective_at_initial);
        CHECK(r.q_opt >= cfg.q_min);
        CHECK(r.q_opt <= cfg.q_max);
    }
}

TEST_CASE("annealing edge cases") {
    const OmegaSeries omega = test::planted_series();
    const StateVector ref = test::planted_reference();

    AnnealConfig one = planted_config(3);
    one.steps = 1;
    one.q_initial = 0.01;
    const CalibrationResult r = anneal_q(omega, ref, 1.0, one);
    CHECK(r.evaluations == 2);
    CHECK(r.q_initial == Catch::Approx(0.01).epsilon(1e-12));
    CHECK(r.objective_at_opt <= r.objective_at_initial);
    CHECK(r.objective_at_opt == objective(r.q_opt, omega, ref, 1.0, default_calibration_spec()));

    const OmegaSeries flat = constant_series(2.0);
    AnnealConfig cfg = planted_config(9);
    cfg.steps = 300;
    const CalibrationResult c = anneal_q(flat, StateVector::Constant(2, 1.5), 1.0, cfg);
    CHECK(c.q_opt == c.q_initial);
    CHECK(c.objective_at_opt == c.objective_at_initial);
    CHECK(c.q_initial == Catch::Approx(std::sqrt(1e-4 * 10.0)).epsilon(1e-12));

    CHECK_THROWS_AS(anneal_q(omega, ref, 1.0, planted_config(1), default_calibration_spec(), SpacingBounds{1.5, 3.0}),
                    ScheduleError);
    CHECK_NOTHROW(anneal_q(omega, ref, 1.0, planted_config(1), default_calibration_spec(), SpacingBounds{0.5, 1.5}));

    AnnealConfig bad = planted_config(1);
    bad.cooling = 1.0;
    CHECK_THROWS_AS(validate_anneal(bad), InvalidArgument);
    bad = planted_config(1);
    bad.q_min = 20.0;
    CHECK_THROWS_AS(validate_anneal(bad), InvalidArgument);
}

TEST_CASE("multiple chains keep the best and are deterministic") {
    const OmegaSeries omega = test::planted_series();
    const StateVector ref = test::planted_reference();
    AnnealConfig cfg = planted_config(11);
    cfg.steps = 100;
    const CalibrationResult single = anneal_q(omega, ref, 1.0, cfg);
    const CalibrationResult multi1 = anneal_q_multi(omega, ref, 1.0, cfg, 4, 1);
    const CalibrationResult multi4 = anneal_q_multi(omega, ref, 1.0, cfg, 4, 4);
    CHECK(multi1.objective_at_opt <= single.objective_at_opt);
    CHECK(multi1.q_opt == multi4.q_opt);
    CHECK(multi1.evaluations == 4 * 101);
}

TEST_CASE("calibration propagation and refresh schedule") {
    CalibrationResult r;
    r.q_opt = 0.0035;
    AccelSpec spec = default_calibration_spec();
    spec.aux->s_b0 = 0.25;
    const AccelSpec once = propagate_calibration(r, spec);
    CHECK(once.aux->q == 0.0035);
    CHECK(once.aux->s_b0 == 0.25);
    CHECK(once.k == spec.k);
    const AccelSpec twice = propagate_calibration(r, once);
    CHECK(twice.aux->q == once.aux->q);
    CHECK(twice.aux->s_b0 == once.aux->s_b0);

    AccelSpec bare;
    bare.aux.reset();
    const AccelSpec created = propagate_calibration(r, bare);
    REQUIRE(created.aux.has_value());
    CHECK(created.aux->s_b0 == 0.0);
    CHECK(created.aux->q == 0.0035);

    CHECK(refresh_schedule(9, 9) == std::vector<int>{1});
    CHECK(refresh_schedule(1, 4) == std::vector<int>{1, 2, 3, 4});
    CHECK(refresh_schedule(3, 9) == std::vector<int>{1, 4, 7});
    CHECK_THROWS_AS(refresh_schedule(0, 9), InvalidArgument);
}
