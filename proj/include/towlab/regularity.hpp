#pragma once

#include <cstdint>

#include "towlab/game.hpp"
#include "towlab/lattice.hpp"
#include "towlab/rng.hpp"

namespace towlab {

// (n+1)-dimensional walk in B_2r(0) x (0, 2r + ell): with probability alpha/2
// a vertical +-eps step, with probability beta a horizontal uniform-ball step.
struct CylinderConfig {
    double r = 1;
    double ell = 0.1;      // start height; start point is (0, ell)
    double epsilon = 0.05;
    double alpha = 0.5;
    double beta = 0.5;
    int n = 1;             // base (horizontal) dimension

    static CylinderConfig for_p(double p, int n, double r, double ell, double epsilon);
    double height() const { return 2 * r + ell; }
    void validate() const;
};

enum class ExitFace : uint8_t { bottom, top, side, capped };

struct CylinderExit {
    ExitFace face = ExitFace::capped;
    long rounds = 0;
    double y_final = 0;
};

long cylinder_round_cap(const CylinderConfig& cfg);

CylinderExit cylinder_walk(const CylinderConfig& cfg, Rng& rng, long round_cap = -1);

// empirical P(exit through the bottom face y <= 0)
ValueEstimate bottom_escape_probability(const CylinderConfig& cfg, long trials,
                                        uint64_t master_seed, int threads = 1);

// Verifies the optional-stopping consequences of the martingale
// y_j^2 - alpha*j*eps^2: alpha*E[tau]*eps^2 <= E[y_tau^2] - y_0^2 (+ MC
// tolerance) and E[tau] <= C / eps^2 with C reported.
struct ExitTimeReport {
    double mean_rounds = 0;
    double rounds_std_error = 0;
    double mean_y2_final = 0;
    double y0_sq = 0;
    double lhs = 0;  // alpha * E[tau] * eps^2
    double rhs = 0;  // E[y_tau^2] - y0^2
    bool inequality_holds = false;
    double C = 0;  // E[tau] * eps^2
    double capped_fraction = 0;
};

ExitTimeReport exit_time_moment_check(const CylinderConfig& cfg, long trials,
                                      uint64_t master_seed, int threads = 1);

// (max over lattice nodes in B_rho(center)) / (min over the same); the min is
// floored at 1e-300, so an interior zero reports +inf. Throws on negative
// values inside the ball.
double harnack_ratio(const LatticeField& field, const Point& center, double rho);

// max over node pairs x, y in B_r(z0) with |x-y| >= eps of
// |u(x)-u(y)| * r / (|x-y| * osc), osc taken over B_6r(z0). Zero for constant
// fields. Requires B_10r(z0) inside the lattice's domain and r > eps.
double lipschitz_quotient(const LatticeField& field, const Point& z0, double r);

}  // namespace towlab
