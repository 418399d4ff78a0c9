#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "towlab/domain.hpp"
#include "towlab/elliptic.hpp"
#include "towlab/lattice.hpp"
#include "towlab/params.hpp"
#include "towlab/rng.hpp"

namespace towlab {

using PayoffFn = std::function<double(const Point&)>;
using SpaceTimePayoffFn = std::function<double(const Point&, double)>;

enum class Toss : uint8_t { player_one, player_two, noise };
enum class EndState : uint8_t { exited, time_out, capped };

// Deterministic rule for the winner's move; the returned point must lie in
// the open eps-ball of the current position.
struct Strategy {
    std::string name;
    std::function<Point(std::span<const Point> history, std::span<const Toss> tosses,
                        const Point& current, double eps)>
        next_move;
};

enum class GreedyMode : uint8_t { maximize, minimize };

// Steps to the in-ball lattice node with extremal field value; ties broken by
// node order. Candidates are lattice nodes inside the open eps-ball of the
// (possibly off-lattice) current position.
Strategy greedy_strategy(LatticeField field, GreedyMode mode);

// Steps (1 - 1e-6) * eps toward the target, or onto it when closer than eps.
Strategy pull_toward(const Point& target);

struct Trajectory {
    std::vector<Point> positions;  // starts with the initial position
    std::vector<Toss> toss_log;
    EndState end_state = EndState::exited;
    long rounds = 0;
    double payoff = 0;
    double t_final = 0;  // remaining time at stop (timed games)
};

long default_round_cap(const Domain& domain, double eps);

Trajectory play(const Point& start, const Strategy& sI, const Strategy& sII,
                const GameParams& params, const PayoffFn& F, const Domain& domain, Rng& rng,
                long round_cap);

// Time-tracking variant: each round consumes eps^2/2; stops on exit or when
// the remaining time reaches <= 0 (payoff time clipped to 0). Never capped.
Trajectory play_timed(const Point& start, double t0, const Strategy& sI, const Strategy& sII,
                      const GameParams& params, const SpaceTimePayoffFn& F,
                      const Domain& domain, Rng& rng);

struct ValueEstimate {
    double mean = 0;
    double std_error = 0;
    long trials = 0;
    double ci95_lo = 0;
    double ci95_hi = 0;
    double capped_fraction = 0;
    uint64_t seed = 0;
    bool valid = true;  // false when every trial was capped
};

ValueEstimate estimate_value(const Point& start, const Strategy& sI, const Strategy& sII,
                             const GameParams& params, const PayoffFn& F,
                             const Domain& domain, long trials, uint64_t master_seed,
                             long round_cap, int threads = 1);

ValueEstimate estimate_value_timed(const Point& start, double t0, const Strategy& sI,
                                   const Strategy& sII, const GameParams& params,
                                   const SpaceTimePayoffFn& F, const Domain& domain,
                                   long trials, uint64_t master_seed, int threads = 1);

// Coarse discrete walk of the introductory examples: a uniformly chosen axis,
// +-eps with probability 1/2 each, stopping outside the domain.
struct DiscreteWalkOutcome {
    Point final{1};
    long rounds = 0;
    bool exited = false;
};

DiscreteWalkOutcome discrete_axis_walk(const Point& start, const Domain& domain, double eps,
                                       Rng& rng, long round_cap);

struct DiscreteWalkStats {
    ValueEstimate payoff;
    double mean_rounds = 0;
    double rounds_std_error = 0;
};

DiscreteWalkStats estimate_discrete_walk(const Point& start, const Domain& domain, double eps,
                                         const PayoffFn& F, long trials, uint64_t master_seed,
                                         long round_cap, int threads = 1);

}  // namespace towlab
