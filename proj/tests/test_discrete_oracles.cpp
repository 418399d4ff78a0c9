#include <doctest.h>

#include <cmath>

#include "towlab/discrete.hpp"
#include "towlab/domain.hpp"
#include "towlab/game.hpp"

using namespace towlab;

TEST_CASE("discrete hitting values: linear solution for 0/1 payoff") {
    DiscreteWalkSpec spec;
    spec.a = 0;
    spec.b = 1;
    spec.eps = 0.125;
    spec.payoff_a = 0;
    spec.payoff_b = 1;
    const auto u = discrete_hitting_value(spec);
    REQUIRE(u.size() == 9);
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(u[i] == doctest::Approx(static_cast<double>(i) * 0.125).epsilon(1e-13));
}

TEST_CASE("discrete hitting values: constants and affine payoffs") {
    DiscreteWalkSpec spec;
    spec.eps = 0.25;
    spec.payoff_a = spec.payoff_b = 7.0;
    for (double v : discrete_hitting_value(spec)) CHECK(v == doctest::Approx(7.0));

    spec.payoff_a = -1.0;
    spec.payoff_b = 3.0;
    const auto u = discrete_hitting_value(spec);
    for (size_t i = 0; i < u.size(); ++i) {
        const double x = spec.node(static_cast<int>(i));
        CHECK(u[i] == doctest::Approx(-1.0 + x * 4.0).epsilon(1e-13));
    }
}

TEST_CASE("discrete running time: surplus-of-two game") {
    DiscreteWalkSpec spec;
    spec.a = -2;
    spec.b = 2;
    spec.eps = 1;
    spec.payoff_a = spec.payoff_b = 0;
    spec.step_cost = 1;
    const auto u = discrete_running_time(spec);
    REQUIRE(u.size() == 5);
    for (int i = 0; i < 5; ++i) {
        const double x = spec.node(i);
        CHECK(u[static_cast<size_t>(i)] == doctest::Approx(-x * x + 4.0).epsilon(1e-13));
    }
}

TEST_CASE("discrete running time: zero cost and eps-grid closed form") {
    DiscreteWalkSpec spec;
    spec.eps = 0.1;
    spec.payoff_a = spec.payoff_b = 0;
    spec.step_cost = 0;
    for (double v : discrete_running_time(spec)) CHECK(v == doctest::Approx(0.0));

    spec.step_cost = 1;
    const auto u = discrete_running_time(spec);
    for (size_t i = 0; i < u.size(); ++i) {
        const double x = spec.node(static_cast<int>(i));
        CHECK(u[i] == doctest::Approx(x * (1 - x) / (0.1 * 0.1)).epsilon(1e-12));
    }
}

TEST_CASE("discrete oracles satisfy their defining recursions") {
    DiscreteWalkSpec spec;
    spec.a = -0.5;
    spec.b = 1.5;
    spec.eps = 0.25;
    spec.payoff_a = 0.3;
    spec.payoff_b = -1.1;
    spec.step_cost = 0.7;
    const auto hit = discrete_hitting_value(spec);
    const auto run = discrete_running_time(spec);
    for (size_t i = 1; i + 1 < hit.size(); ++i) {
        CHECK(hit[i] == doctest::Approx(0.5 * (hit[i - 1] + hit[i + 1])).epsilon(1e-12));
        CHECK(run[i] ==
              doctest::Approx(0.5 * (run[i - 1] + run[i + 1]) + spec.step_cost).epsilon(1e-12));
    }
}

TEST_CASE("discrete 2d: harmonic and constant data reproduced exactly") {
    const double eps = 0.25;
    const auto linear = [](const Point& p) { return p[0]; };
    const auto u = discrete_2d_value(3, linear, eps);
    const int side = 5;
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix)
            CHECK(u[static_cast<size_t>(iy) * side + ix] ==
                  doctest::Approx(ix * eps).epsilon(1e-12));

    const auto c = discrete_2d_value(3, [](const Point&) { return 4.25; }, eps);
    for (double v : c) CHECK(v == doctest::Approx(4.25));
}

TEST_CASE("discrete 2d: one-hot boundary matches a long walk simulation") {
    const double eps = 0.25;
    const auto onehot = [&](const Point& p) {
        return (std::abs(p[0] - 2 * eps) < 1e-12 && std::abs(p[1]) < 1e-12) ? 1.0 : 0.0;
    };
    const auto u = discrete_2d_value(3, onehot, eps);
    const int side = 5;
    // 4-neighbor recursion holds at interior nodes
    for (int iy = 1; iy <= 3; ++iy)
        for (int ix = 1; ix <= 3; ++ix) {
            const auto at = [&](int jx, int jy) {
                return u[static_cast<size_t>(jy) * side + jx];
            };
            CHECK(at(ix, iy) ==
                  doctest::Approx(0.25 * (at(ix - 1, iy) + at(ix + 1, iy) + at(ix, iy - 1) +
                                          at(ix, iy + 1)))
                      .epsilon(1e-12));
        }

    // Monte Carlo cross-check with the axis walk from the center
    const Domain dom = Domain::box(Point{0.0, 0.0}, Point{1.0, 1.0});
    const auto stats = estimate_discrete_walk(Point{0.5, 0.5}, dom, eps, onehot, 200000, 31337,
                                              100000, 2);
    const double center = u[2 * side + 2];
    CHECK(std::abs(stats.payoff.mean - center) <= 3.5 * stats.payoff.std_error);
}
