#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "towlab/elliptic.hpp"
#include "towlab/parabolic.hpp"
#include "towlab/rng.hpp"

using namespace towlab;

namespace {

const SpaceTimeFn kClampedLine = [](const Point& x, double) {
    return std::clamp(x[0], 0.0, 1.0);
};

}  // namespace

TEST_CASE("solve_parabolic: constants at every slice") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.1, 4);
    const auto params = GameParams::for_game(3, 1, 0.1);
    const auto f = solve_parabolic(lat, [](const Point&, double) { return 2.5; }, 0.1, params);
    for (int s = 0; s < f.slice_count; ++s)
        for (int64_t idx : lat->active_nodes()) CHECK(f.at(idx, s) == doctest::Approx(2.5));
}

TEST_CASE("solve_parabolic: stationary clamped-line datum stays near the line") {
    for (double eps : {0.1, 0.05}) {
        auto lat = Lattice::build(Domain::interval(0, 1), eps, 4);
        const auto params = GameParams::for_game(2, 1, eps);
        const auto f = solve_parabolic(lat, kClampedLine, 0.2, params);
        for (int s = 0; s < f.slice_count; ++s)
            for (int64_t idx : lat->interior_nodes()) {
                const double x = lat->node_point(idx)[0];
                CHECK(std::abs(f.at(idx, s) - x) <= eps);
            }
    }
}

TEST_CASE("solve_parabolic: long horizon converges to the elliptic solution") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.2, 3);
    const auto params = GameParams::for_game(3, 1, 0.2);
    SolveOptions opts;
    opts.tol = 1e-13;
    opts.max_sweeps = 200000;
    auto [ue, rep] = solve(lat, [](const Point& x) { return std::cos(3 * x[0]); }, params, opts);
    REQUIRE(rep.converged);
    const auto f = solve_parabolic(
        lat, [](const Point& x, double) { return std::cos(3 * x[0]); }, 40.0, params);
    double diff = 0;
    for (int64_t idx : lat->active_nodes())
        diff = std::max(diff, std::abs(f.at(idx, f.slice_count - 1) - ue[idx]));
    CHECK(diff < 1e-9);  // 10x the nominal solver tolerance
}

TEST_CASE("parabolic_defect: zero for marching output, responds to perturbations") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.2, 2);
    const auto params = GameParams::for_game(4, 1, 0.2);
    const SpaceTimeFn F = [](const Point& x, double t) { return x[0] + 0.3 * t; };
    auto f = solve_parabolic(lat, F, 0.3, params);
    CHECK(parabolic_defect(f, params) == 0.0);

    SpaceTimeField g = f;
    const double delta = 0.37;
    const int64_t node = lat->interior_nodes()[1];
    g.values[2][static_cast<size_t>(node)] += delta;
    CHECK(parabolic_defect(g, params) >= delta - 1e-14);
}

TEST_CASE("parabolic comparison and range bounds") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.25, 2);
    const auto params = GameParams::for_game(3, 1, 0.25);
    Rng rng(53);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = rng.uniform();
        const double c = rng.uniform();
        const SpaceTimeFn F1 = [a](const Point& x, double t) {
            return a * std::sin(4 * x[0]) + 0.2 * std::cos(t);
        };
        const SpaceTimeFn F2 = [&](const Point& x, double t) { return F1(x, t) + c; };
        const auto u1 = solve_parabolic(lat, F1, 0.2, params);
        const auto u2 = solve_parabolic(lat, F2, 0.2, params);
        double lo = 1e300, hi = -1e300;
        for (int s = 0; s < u1.slice_count; ++s) {
            const double t = u1.time_of(s);
            for (int64_t idx : lat->strip_nodes()) {
                lo = std::min(lo, F1(lat->node_point(idx), t));
                hi = std::max(hi, F1(lat->node_point(idx), t));
            }
        }
        for (int64_t idx : lat->active_nodes()) {
            lo = std::min(lo, F1(lat->node_point(idx), 0.0));
            hi = std::max(hi, F1(lat->node_point(idx), 0.0));
        }
        for (int s = 0; s < u1.slice_count; ++s)
            for (int64_t idx : lat->active_nodes()) {
                CHECK(u1.at(idx, s) <= u2.at(idx, s) + 1e-14);
                CHECK(u1.at(idx, s) >= lo - 1e-12);
                CHECK(u1.at(idx, s) <= hi + 1e-12);
            }
    }
}

TEST_CASE("causality: later lateral data cannot affect earlier slices") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.2, 3);
    const auto params = GameParams::for_game(3, 1, 0.2);
    const double eps2half = 0.5 * 0.2 * 0.2;
    const double cut = 4 * eps2half;  // slice 4
    const SpaceTimeFn F1 = [](const Point& x, double t) { return x[0] + t; };
    const SpaceTimeFn F2 = [&](const Point& x, double t) {
        return F1(x, t) + (t > cut + 1e-12 ? 5.0 : 0.0);
    };
    const auto u1 = solve_parabolic(lat, F1, 10 * eps2half, params);
    const auto u2 = solve_parabolic(lat, F2, 10 * eps2half, params);
    for (int s = 0; s <= 4; ++s)
        for (int64_t idx : lat->active_nodes()) CHECK(u1.at(idx, s) == u2.at(idx, s));
    bool changed = false;
    for (int64_t idx : lat->active_nodes())
        if (u1.at(idx, 6) != u2.at(idx, 6)) changed = true;
    CHECK(changed);
}

TEST_CASE("degenerate horizon returns the initial slice with a warning") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.2, 2);
    const auto params = GameParams::for_game(2, 1, 0.2);
    const auto f = solve_parabolic(lat, [](const Point& x, double) { return x[0]; }, 0.004,
                                   params);
    CHECK(f.degenerate_horizon);
    CHECK(f.slice_count == 1);
    for (int64_t idx : lat->active_nodes())
        CHECK(f.at(idx, 0) == doctest::Approx(lat->node_point(idx)[0]));
}

TEST_CASE("slice times are multiples of eps^2/2 clipped at the horizon") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.2, 2);
    const auto params = GameParams::for_game(2, 1, 0.2);
    const auto f = solve_parabolic(lat, [](const Point&, double) { return 1.0; }, 0.05, params);
    CHECK(f.slice_dt == doctest::Approx(0.02));
    CHECK(f.slice_count == 4);  // ceil(0.05/0.02) + 1
    CHECK(f.time_of(1) == doctest::Approx(0.02));
    CHECK(f.time_of(3) == doctest::Approx(0.05));  // clipped
}
