#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "towlab/domain.hpp"
#include "towlab/lattice.hpp"
#include "towlab/params.hpp"
#include "towlab/rng.hpp"
#include "towlab/io.hpp"
#include <filesystem>

using namespace towlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("probabilities: reference values") {
    // p = 2 in 1D reduces to the plain random walk on balls
    auto [a0, b0] = probabilities(2, 1);
    CHECK(a0 == 0.0);
    CHECK(b0 == 1.0);

    auto [a1, b1] = probabilities(4, 2);
    CHECK(a1 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(b1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    auto [a2, b2] = probabilities(kInf, 2);
    CHECK(a2 == 1.0);
    CHECK(b2 == 0.0);
}

TEST_CASE("probabilities: rejects bad input") {
    CHECK_THROWS_AS(probabilities(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(probabilities(0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(probabilities(3.0, 0), std::invalid_argument);
}

TEST_CASE("probabilities: alpha + beta = 1, alpha monotone in p") {
    Rng rng(7);
    double prev_alpha = -1;
    for (int i = 0; i < 300; ++i) {
        const double p = 2.0 + 0.1 * i;
        const int n = 1 + static_cast<int>(rng.uniform() * 3);
        auto [a, b] = probabilities(p, n);
        CHECK(a + b == 1.0);  // beta computed as 1 - alpha, sum exact
        CHECK(a >= 0.0);
        CHECK(b > 0.0);
        auto [a1d, b1d] = probabilities(p, 2);
        (void)b1d;
        if (prev_alpha >= 0) CHECK(a1d > prev_alpha);
        prev_alpha = a1d;
    }
}

TEST_CASE("GameParams constructors enforce the p ranges") {
    CHECK_THROWS_AS(GameParams::for_game(kInf, 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(GameParams::for_game(1.5, 2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(GameParams::for_game(3, 2, 0.0), std::invalid_argument);
    CHECK_NOTHROW(GameParams::for_game(2, 1, 0.1));
    CHECK_NOTHROW(GameParams::for_mean_value(1.5, 2, 0.1));
    CHECK_NOTHROW(GameParams::for_mean_value(kInf, 2, 0.1));
    CHECK_THROWS_AS(GameParams::for_mean_value(1.0, 2, 0.1), std::invalid_argument);
}

TEST_CASE("strip_contains on the reference shapes") {
    const Domain iv = Domain::interval(0, 1);
    CHECK(iv.strip_contains(Point{1.05}, 0.1));
    CHECK_FALSE(iv.strip_contains(Point{0.5}, 0.1));
    CHECK_FALSE(iv.strip_contains(Point{1.0}, 0.1));  // boundary is in the closure

    const Domain disk = Domain::ball(Point{0.0, 0.0}, 1.0);
    CHECK_FALSE(disk.strip_contains(Point{1.2, 0.0}, 0.1));
    CHECK(disk.strip_contains(Point{1.05, 0.0}, 0.1));

    CHECK_THROWS_AS(iv.strip_contains(Point{0.5, 0.5}, 0.1), std::invalid_argument);
}

TEST_CASE("build_lattice: coarse k=1 oracle grid") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.25, 1);
    CHECK(lat->grid_size() == 5);
    CHECK(lat->interior_nodes().size() == 3);
    CHECK(lat->strip_nodes().size() == 2);
    CHECK(lat->node_point(0)[0] == doctest::Approx(0.0));
    CHECK(lat->node_point(4)[0] == doctest::Approx(1.0));
    CHECK(lat->node_class(0) == NodeClass::strip);
    CHECK(lat->node_class(2) == NodeClass::interior);
    CHECK(lat->dpp_closure() == BallClosure::closed);
}

TEST_CASE("build_lattice: 1D eps=0.1 k=4") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.1, 4);
    CHECK(lat->spacing() == doctest::Approx(0.025));
    for (int64_t idx : lat->interior_nodes()) {
        const double x = lat->node_point(idx)[0];
        CHECK(x > 0.0);
        CHECK(x < 1.0);
    }
    const double tol = 0.1 + lat->spacing() * 1.0 + 1e-12;
    for (int64_t idx : lat->strip_nodes()) {
        const Point x = lat->node_point(idx);
        CHECK_FALSE(lat->domain().inside(x));
        CHECK(lat->domain().distance(x) <= tol);
    }
}

TEST_CASE("build_lattice: box stencil has at least 4 in-ball neighbors") {
    auto lat = Lattice::build(Domain::box(Point{0.0, 0.0}, Point{1.0, 1.0}), 0.2, 2);
    CHECK(lat->spacing() == doctest::Approx(0.1));
    for (int64_t idx : lat->interior_nodes()) {
        const auto nb = lat->ball_neighbors(idx, 0.2, BallClosure::open);
        CHECK(nb.size() >= 4);
    }
}

TEST_CASE("build_lattice rejects bad input") {
    CHECK_THROWS_AS(Lattice::build(Domain::interval(0, 1), -0.1, 4), std::invalid_argument);
    CHECK_THROWS_AS(Lattice::build(Domain::interval(0, 1), 0.1, 0), std::invalid_argument);
}

TEST_CASE("ball_neighbors: open vs closed on the 1D stencil") {
    auto lat = Lattice::build(Domain::interval(0, 1), 0.1, 4);
    // pick a node well inside
    int64_t center = -1;
    for (int64_t idx : lat->interior_nodes())
        if (std::abs(lat->node_point(idx)[0] - 0.5) < 1e-12) center = idx;
    REQUIRE(center >= 0);
    const auto open = lat->ball_neighbors(center, 0.1, BallClosure::open);
    CHECK(open.size() == 6);  // +-1..3 steps; |4h| = eps excluded
    const auto closed = lat->ball_neighbors(center, 0.1, BallClosure::closed);
    CHECK(closed.size() == 8);
    for (int64_t nb : open) CHECK(dist(lat->node_point(nb), lat->node_point(center)) < 0.1);

    // eps below the spacing: empty set, flagged by emptiness
    CHECK(lat->ball_neighbors(center, 0.01, BallClosure::open).empty());
    CHECK_THROWS_AS(lat->ball_neighbors(lat->grid_size() + 5, 0.1, BallClosure::open),
                    std::out_of_range);
}

TEST_CASE("ball_neighbors equals brute-force distance filtering") {
    const Domain shapes[] = {Domain::interval(-0.3, 0.7),
                             Domain::box(Point{0.0, 0.0}, Point{0.6, 0.4}),
                             Domain::ball(Point{0.1, -0.2}, 0.45)};
    for (const auto& dom : shapes) {
        auto lat = Lattice::build(dom, 0.15, 3);
        for (size_t pos = 0; pos < lat->interior_nodes().size(); pos += 7) {
            const int64_t node = lat->interior_nodes()[pos];
            const Point x = lat->node_point(node);
            for (auto cl : {BallClosure::open, BallClosure::closed}) {
                const auto got = lat->ball_neighbors(node, 0.15, cl);
                std::vector<int64_t> want;
                for (int64_t idx = 0; idx < lat->grid_size(); ++idx) {
                    if (idx == node) continue;
                    const double d = dist(lat->node_point(idx), x);
                    const bool in = cl == BallClosure::open ? d < 0.15 - 1e-12
                                                            : d <= 0.15 + 1e-12;
                    if (in) want.push_back(idx);
                }
                CHECK(got == want);
            }
        }
    }
}

TEST_CASE("lattice strip classification agrees with strip_contains up to tolerance") {
    auto lat = Lattice::build(Domain::ball(Point{0.0, 0.0}, 0.5), 0.1, 4);
    const double slack = lat->spacing() * std::sqrt(2.0) + 1e-12;
    for (int64_t idx : lat->strip_nodes()) {
        const Point x = lat->node_point(idx);
        CHECK_FALSE(lat->domain().inside(x));
        // strip nodes are within eps of the domain, up to the documented h*sqrt(n)
        CHECK(lat->domain().distance(x) <= 0.1 + slack);
    }
    // and interior nodes always have an in-ball neighbor
    for (int64_t idx : lat->interior_nodes())
        CHECK_FALSE(lat->ball_neighbors(idx, 0.1, BallClosure::open).empty());
}

TEST_CASE("domain project_to_boundary") {
    const Domain iv = Domain::interval(0, 1);
    CHECK(iv.project_to_boundary(Point{0.2})[0] == doctest::Approx(0.0));
    CHECK(iv.project_to_boundary(Point{0.8})[0] == doctest::Approx(1.0));
    const Domain disk = Domain::ball(Point{0.0, 0.0}, 1.0);
    const Point p = disk.project_to_boundary(Point{0.3, 0.4});
    CHECK(norm(p) == doctest::Approx(1.0));
}

TEST_CASE("field CSV round-trips onto the same lattice") {
    auto lat = Lattice::build(Domain::ball(Point{0.0, 0.0}, 0.4), 0.1, 3);
    LatticeField f(lat, 0.0);
    Rng rng(314);
    for (int64_t idx : lat->active_nodes()) f[idx] = rng.uniform() * 10 - 5;
    const auto path =
        (std::filesystem::temp_directory_path() / "towlab_field_roundtrip.csv").string();
    write_field_csv_file(f, path);
    const LatticeField g = read_field_csv_file(lat, path);
    for (int64_t idx : lat->active_nodes()) CHECK(f[idx] == g[idx]);

    // mismatched lattice is rejected
    auto other = Lattice::build(Domain::ball(Point{0.0, 0.0}, 0.4), 0.1, 4);
    CHECK_THROWS_AS(read_field_csv_file(other, path), std::runtime_error);
}
