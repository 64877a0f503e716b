#include "pita/errors.hpp"
#include "pita/model.hpp"

#include "catch_amalgamated.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace pita;

TEST_CASE("damped oscillator is accepted unchanged") {
    const LtiSystem sys = damped_oscillator_system();
    const LtiSystem checked = validate_system(sys);
    CHECK(checked.A == sys.A);
    CHECK(checked.B == sys.B);
    CHECK(checked.u == sys.u);
    CHECK(checked.y0 == sys.y0);
    CHECK(sys.A(0, 0) == -1.0);
    CHECK(sys.A(0, 1) == 5.0);
    CHECK(sys.A(1, 0) == -5.0);
    CHECK(sys.A(1, 1) == -1.0);
    CHECK(sys.forcing() == Vector::Map(std::array{0.0, 10.0}.data(), 2));
}

TEST_CASE("validation is idempotent") {
    const LtiSystem once = validate_system(damped_oscillator_system());
    const LtiSystem twice = validate_system(once);
    CHECK(twice.A == once.A);
    CHECK(twice.B == once.B);
    CHECK(twice.u == once.u);
    CHECK(twice.y0 == once.y0);
}

TEST_CASE("shape mismatch names the field") {
    LtiSystem sys = damped_oscillator_system();
    sys.B = Matrix::Zero(3, 1);
    try {
        validate_system(sys);
        FAIL("expected DimensionError");
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find('B') != std::string::npos);
    }

    sys = damped_oscillator_system();
    sys.y0 = Vector::Zero(3);
    CHECK_THROWS_AS(validate_system(sys), DimensionError);

    sys = damped_oscillator_system();
    sys.A = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(validate_system(sys), DimensionError);

    sys = damped_oscillator_system();
    sys.u = Vector::Zero(2);
    CHECK_THROWS_AS(validate_system(sys), DimensionError);
}

TEST_CASE("non-finite entries are rejected") {
    LtiSystem sys = damped_oscillator_system();
    sys.A(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_system(sys), NonFiniteError);

    sys = damped_oscillator_system();
    sys.y0[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_system(sys), NonFiniteError);
}

TEST_CASE("slice boundaries") {
    const auto b = slice_boundaries(TimeGrid{0.0, 1.0, 4});
    REQUIRE(b.size() == 5);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.25);
    CHECK(b[2] == 0.5);
    CHECK(b[3] == 0.75);
    CHECK(b[4] == 1.0);

    const auto nine = slice_boundaries(TimeGrid{0.0, 0.9, 9});
    REQUIRE(nine.size() == 10);
    CHECK(nine.back() == 0.9);
    for (std::size_t i = 1; i < nine.size(); ++i) {
        CHECK(nine[i] - nine[i - 1] == Catch::Approx(0.1).epsilon(1e-12));
    }

    const auto one = slice_boundaries(TimeGrid{2.0, 3.5, 1});
    REQUIRE(one.size() == 2);
    CHECK(one[0] == 2.0);
    CHECK(one[1] == 3.5);
}

TEST_CASE("last boundary is tf bit-exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> start(-10.0, 10.0);
    std::uniform_real_distribution<double> span(1e-3, 50.0);
    std::uniform_int_distribution<int> slices(1, 500);
    for (int trial = 0; trial < 500; ++trial) {
        TimeGrid g;
        g.t0 = start(rng);
        g.tf = g.t0 + span(rng);
        g.slices = slices(rng);
        const auto b = slice_boundaries(g);
        REQUIRE(b.size() == static_cast<std::size_t>(g.slices) + 1);
        CHECK(b.front() == g.t0);
        CHECK(b.back() == g.tf);
    }
}

TEST_CASE("invalid grids") {
    CHECK_THROWS_AS(validate_grid(TimeGrid{1.0, 1.0, 4}), InvalidArgument);
    CHECK_THROWS_AS(validate_grid(TimeGrid{0.0, 1.0, 0}), InvalidArgument);
    CHECK_NOTHROW(validate_grid(TimeGrid{0.0, 0.9, 9}));
}

TEST_CASE("trajectory validation") {
    Trajectory t;
    t.times = {0.0, 0.1};
    t.states = {Vector::Zero(2), Vector::Zero(2)};
    CHECK_NOTHROW(validate_trajectory(t));
    t.times = {0.1, 0.0};
    CHECK_THROWS_AS(validate_trajectory(t), InvalidArgument);
    t.times = {0.0};
    CHECK_THROWS_AS(validate_trajectory(t), DimensionError);
}
